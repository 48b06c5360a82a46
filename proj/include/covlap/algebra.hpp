#ifndef COVLAP_ALGEBRA_HPP
#define COVLAP_ALGEBRA_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "covlap/errors.hpp"

namespace covlap {

/// Rank-3 array of structure constants f_{ab}^c, zero-based indices.
struct StructureConstants {
  int dim = 0;
  std::vector<double> v;  // dense, size dim^3, index ((a*dim)+b)*dim+c

  static StructureConstants zeros(int d) {
    StructureConstants f;
    f.dim = d;
    f.v.assign(static_cast<std::size_t>(d) * d * d, 0.0);
    return f;
  }
  double operator()(int a, int b, int c) const {
    return v[(static_cast<std::size_t>(a) * dim + b) * dim + c];
  }
  double& operator()(int a, int b, int c) {
    return v[(static_cast<std::size_t>(a) * dim + b) * dim + c];
  }
};

/// Coefficient vector of an algebra element in the generator basis T_a.
struct AlgebraElement {
  std::vector<double> coeffs;

  AlgebraElement() = default;
  explicit AlgebraElement(int d) : coeffs(static_cast<std::size_t>(d), 0.0) {}
  explicit AlgebraElement(std::vector<double> c) : coeffs(std::move(c)) {}

  int dim() const { return static_cast<int>(coeffs.size()); }
  double& operator[](int a) { return coeffs[static_cast<std::size_t>(a)]; }
  double operator[](int a) const { return coeffs[static_cast<std::size_t>(a)]; }

  static AlgebraElement basis(int d, int a) {
    AlgebraElement e(d);
    e[a] = 1.0;
    return e;
  }
};

/// Negative Killing form h_{ab} = -sum_{c,d} f_{ac}^d f_{bd}^c.
/// Assumes f antisymmetric and Jacobi-valid; degeneracy is caught later
/// by build_algebra's positivity check.
Eigen::MatrixXd killing_metric(const StructureConstants& f);

/// A validated compact Lie algebra: structure constants, invariant positive
/// definite metric, and derived data. Immutable after construction; all
/// member operations are pure and thread-safe.
class AlgebraSpec {
 public:
  /// Validates antisymmetry, Jacobi, positive definiteness and invariance of
  /// the metric (tolerance 1e-10). When h is omitted the algebra must be
  /// semisimple and the negative Killing form is used.
  static AlgebraSpec build(const StructureConstants& f,
                           std::optional<Eigen::MatrixXd> h = std::nullopt,
                           std::string name = "custom");

  /// Abelian u(1)^d with h = identity.
  static AlgebraSpec u1(int d);
  /// su(2) with f_{abc} = epsilon_{abc}; Killing metric 2*I.
  static AlgebraSpec su2();
  /// su(3) with the standard Gell-Mann f-constants; Killing metric 3*I.
  static AlgebraSpec su3();

  /// Parse the plain-text definition format:
  ///   dim d
  ///   a b c value     (nonzero f_{ab}^c, 1-based; unlisted entries are zero)
  ///   h a b value     (optional metric entries; if absent, Killing is used)
  static AlgebraSpec from_file(const std::string& path);

  /// Look up a built-in algebra by name ("u1^3", "su2", "su3").
  static AlgebraSpec by_name(const std::string& name);

  int dim() const { return f_.dim; }
  const std::string& name() const { return name_; }
  const StructureConstants& structure_constants() const { return f_; }
  double f(int a, int b, int c) const { return f_(a, b, c); }
  const Eigen::MatrixXd& metric() const { return h_; }
  const Eigen::MatrixXd& metric_inverse() const { return h_inv_; }
  bool abelian() const { return abelian_; }

  /// Extreme eigenvalues of h: lambda_min sum (X^a)^2 <= |X|^2 <= lambda_max sum (X^a)^2.
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  // --- raw-pointer kernels used in field loops (length dim each) ---
  void bracket_into(const double* x, const double* y, double* out) const;
  void bracket_accumulate(const double* x, const double* y, double* out) const;
  double inner_raw(const double* x, const double* y) const;
  double norm_raw(const double* x) const;

 private:
  AlgebraSpec() = default;

  struct FEntry {
    int a, b, c;
    double value;
  };

  std::string name_;
  StructureConstants f_;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd h_inv_;
  std::vector<FEntry> nonzeros_;
  bool abelian_ = true;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

/// [X,Y]^c = sum_{a,b} f_{ab}^c X^a Y^b.
AlgebraElement bracket(const AlgebraSpec& alg, const AlgebraElement& x,
                       const AlgebraElement& y);

/// (X,Y) = h_{ab} X^a Y^b.
double inner(const AlgebraSpec& alg, const AlgebraElement& x,
             const AlgebraElement& y);

/// |X| = sqrt((X,X)).
double norm(const AlgebraSpec& alg, const AlgebraElement& x);

/// Matrix of ad X = [X, .] acting on coefficients: (ad X)_{cb} = sum_a f_{ab}^c X^a,
/// so ad_matrix(X) * Y.coeffs == bracket(X, Y).coeffs.
Eigen::MatrixXd ad_matrix(const AlgebraSpec& alg, const AlgebraElement& x);

/// Sharp constant of the commutator bound |[X,Y]| <= C |X| |Y|, computed by
/// projected gradient ascent over unit pairs from a fixed deterministic seed
/// set, refined to relative tolerance 1e-6. Abelian algebras return 0.
double commutator_bound_constant(const AlgebraSpec& alg);

}  // namespace covlap

#endif  // COVLAP_ALGEBRA_HPP
