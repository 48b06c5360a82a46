#ifndef COVLAP_FIELDS_HPP
#define COVLAP_FIELDS_HPP

#include <array>
#include <memory>
#include <vector>

#include "covlap/algebra.hpp"
#include "covlap/grid.hpp"

namespace covlap {

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

/// Algebra-valued nodal field. Data layout is node-major (i slowest, k
/// fastest), with the d algebra coefficients of each node contiguous:
///   data[ ((i*n + j)*n + k)*d + a ]
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Grid3 grid, AlgebraPtr alg)
      : grid_(grid),
        alg_(std::move(alg)),
        data_(grid_.nodes() * static_cast<std::size_t>(alg_->dim()), 0.0) {}

  const Grid3& grid() const { return grid_; }
  const AlgebraSpec& alg() const { return *alg_; }
  const AlgebraPtr& alg_ptr() const { return alg_; }
  int dim() const { return alg_->dim(); }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double* at(int i, int j, int k) {
    return data_.data() + grid_.index(i, j, k) * dim();
  }
  const double* at(int i, int j, int k) const {
    return data_.data() + grid_.index(i, j, k) * dim();
  }
  double& value(int i, int j, int k, int a) { return at(i, j, k)[a]; }
  double value(int i, int j, int k, int a) const { return at(i, j, k)[a]; }

  /// Pointwise algebra norm |F(x)| at a node.
  double node_norm(int i, int j, int k) const {
    return alg_->norm_raw(at(i, j, k));
  }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) {
    a += b;
    return a;
  }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) {
    a -= b;
    return a;
  }
  friend ScalarField operator*(double c, ScalarField a) {
    a *= c;
    return a;
  }

 private:
  Grid3 grid_;
  AlgebraPtr alg_;
  std::vector<double> data_;
};

/// Three algebra-valued components indexed by axis (A_k, E_k, grad Phi).
struct VectorField {
  std::array<ScalarField, 3> comp;

  VectorField() = default;
  VectorField(const Grid3& grid, const AlgebraPtr& alg)
      : comp{ScalarField(grid, alg), ScalarField(grid, alg),
             ScalarField(grid, alg)} {}

  const Grid3& grid() const { return comp[0].grid(); }
  const AlgebraSpec& alg() const { return comp[0].alg(); }
  const AlgebraPtr& alg_ptr() const { return comp[0].alg_ptr(); }
  ScalarField& operator[](int k) { return comp[static_cast<std::size_t>(k)]; }
  const ScalarField& operator[](int k) const {
    return comp[static_cast<std::size_t>(k)];
  }
};

/// 3x3 array of algebra-valued components (the curvature G_{kl}).
struct TensorField2 {
  std::array<std::array<ScalarField, 3>, 3> comp;

  TensorField2() = default;
  TensorField2(const Grid3& grid, const AlgebraPtr& alg) {
    for (auto& row : comp)
      for (auto& c : row) c = ScalarField(grid, alg);
  }

  const Grid3& grid() const { return comp[0][0].grid(); }
  const AlgebraSpec& alg() const { return comp[0][0].alg(); }
  ScalarField& operator()(int k, int l) {
    return comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }
  const ScalarField& operator()(int k, int l) const {
    return comp[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }
};

/// Plain real-valued nodal function (|Phi|, u_delta, tensor norms, ...).
class RealField {
 public:
  RealField() = default;
  explicit RealField(Grid3 grid) : grid_(grid), data_(grid_.nodes(), 0.0) {}

  const Grid3& grid() const { return grid_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  double& at(int i, int j, int k) { return data_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }

 private:
  Grid3 grid_;
  std::vector<double> data_;
};

/// Throws unless both fields share grid and algebra object semantics.
void require_compatible(const ScalarField& a, const ScalarField& b);
void require_compatible(const VectorField& a, const ScalarField& b);

}  // namespace covlap

#endif  // COVLAP_FIELDS_HPP
