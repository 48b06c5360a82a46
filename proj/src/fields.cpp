#include "covlap/fields.hpp"

namespace covlap {

namespace {

bool same_algebra(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (&a == &b) return true;
  return a.dim() == b.dim() && a.structure_constants().v == b.structure_constants().v &&
         a.metric() == b.metric();
}

}  // namespace

void require_compatible(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid())
    throw GridMismatch("fields live on different grids");
  if (!same_algebra(a.alg(), b.alg()))
    throw AlgebraMismatch("fields carry different algebras");
}

void require_compatible(const VectorField& a, const ScalarField& b) {
  require_compatible(a[0], b);
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (auto& x : data_) x *= c;
  return *this;
}

}  // namespace covlap
