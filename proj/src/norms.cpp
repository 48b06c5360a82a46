#include "covlap/norms.hpp"

#include <algorithm>
#include <cmath>

namespace covlap {

namespace {

/// Trapezoid weight along one axis of the sub-box [lo, hi].
double axis_weight(int t, int lo, int hi) {
  return (t == lo || t == hi) ? 0.5 : 1.0;
}

void check_margin(const Grid3& g, int margin) {
  if (margin < 0) throw OrderTooLargeForGrid("negative interior margin");
  if (g.n - 2 * margin < 2)
    throw OrderTooLargeForGrid("interior margin " + std::to_string(margin) +
                               " leaves no quadrature cell on n=" +
                               std::to_string(g.n));
}

/// Largest margin the grid supports, capped at the requested one. The
/// interior variant of a norm report degrades gracefully on small grids.
int feasible_margin(const Grid3& g, int desired) {
  return std::max(0, std::min(desired, (g.n - 2) / 2));
}

void check_order_fits(const Grid3& g, int order) {
  if (g.n < 2 * order + 1)
    throw OrderTooLargeForGrid("derivative order " + std::to_string(order) +
                               " does not fit grid n=" + std::to_string(g.n));
}

double finite_p_accumulate(const RealField& u, double p, double w_exp,
                           int margin) {
  const Grid3& g = u.grid();
  const int lo = margin, hi = g.n - 1 - margin;
  const double h3 = std::pow(g.spacing(), 3);
  double sum = 0.0;
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j)
      for (int k = lo; k <= hi; ++k) {
        const double qw = axis_weight(i, lo, hi) * axis_weight(j, lo, hi) *
                          axis_weight(k, lo, hi);
        const double wv = weight_at(g.point(i, j, k), w_exp);
        sum += qw * h3 * std::pow(wv * std::abs(u.at(i, j, k)), p);
      }
  return std::pow(sum, 1.0 / p);
}

double sup_accumulate(const RealField& u, double w_exp, int margin) {
  const Grid3& g = u.grid();
  const int lo = margin, hi = g.n - 1 - margin;
  double best = 0.0;
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j)
      for (int k = lo; k <= hi; ++k) {
        const double wv = weight_at(g.point(i, j, k), w_exp);
        best = std::max(best, wv * std::abs(u.at(i, j, k)));
      }
  return best;
}

void tensor_sq_accumulate(const VectorField& A, const ScalarField& cur,
                          int remaining, RealField& acc) {
  if (remaining == 0) {
    const Grid3& g = cur.grid();
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double v = cur.node_norm(i, j, k);
          acc.at(i, j, k) += v * v;
        }
    return;
  }
  for (int k = 0; k < 3; ++k) {
    ScalarField next = covariant_derivative(A, cur, k);
    tensor_sq_accumulate(A, next, remaining - 1, acc);
  }
}

}  // namespace

double real_weighted_lp(const RealField& u, double p, double w_exp,
                        int margin) {
  check_margin(u.grid(), margin);
  if (std::isinf(p)) return sup_accumulate(u, w_exp, margin);
  if (!(p >= 1.0)) throw POutOfRange("p must lie in [1, infinity]");
  return finite_p_accumulate(u, p, w_exp, margin);
}

NormReport weighted_lp_norm(const ScalarField& F, double p, double w_exp,
                            int interior_margin) {
  if (!std::isinf(p) && !(p >= 1.0))
    throw POutOfRange("p must lie in [1, infinity], got " + std::to_string(p));
  const RealField mag = pointwise_norm(F);
  NormReport r;
  r.grid = F.grid();
  r.p = p;
  r.w_exp = w_exp;
  r.interior_margin = feasible_margin(F.grid(), interior_margin);
  r.quadrature = std::isinf(p) ? "sup" : "trapezoid";
  r.value = real_weighted_lp(mag, p, w_exp, 0);
  r.interior_value = real_weighted_lp(mag, p, w_exp, r.interior_margin);
  return r;
}

double h1_inner_product(const VectorField& A, const ScalarField& Phi,
                        const ScalarField& Psi, double sigma) {
  validate_sigma(sigma);
  require_compatible(A, Phi);
  require_compatible(Phi, Psi);
  const Grid3& g = Phi.grid();
  const AlgebraSpec& alg = Phi.alg();
  const double h3 = std::pow(g.spacing(), 3);
  const double wexp = -(1.0 - sigma);

  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const ScalarField dPhi = covariant_derivative(A, Phi, k);
    const ScalarField dPsi = covariant_derivative(A, Psi, k);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int kk = 0; kk < g.n; ++kk) {
          const double qw = axis_weight(i, 0, g.n - 1) *
                            axis_weight(j, 0, g.n - 1) *
                            axis_weight(kk, 0, g.n - 1);
          const double wv = weight_at(g.point(i, j, kk), wexp);
          sum += qw * h3 * wv * alg.inner_raw(dPhi.at(i, j, kk), dPsi.at(i, j, kk));
        }
  }
  return sum;
}

double weak_drift_term(const VectorField& A, const ScalarField& Y,
                       const ScalarField& Z, double sigma) {
  validate_sigma(sigma);
  require_compatible(A, Y);
  require_compatible(Y, Z);
  const Grid3& g = Y.grid();
  const AlgebraSpec& alg = Y.alg();
  const double h3 = std::pow(g.spacing(), 3);

  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const ScalarField dZ = covariant_derivative(A, Z, k);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int kk = 0; kk < g.n; ++kk) {
          const auto x = g.point(i, j, kk);
          const double qw = axis_weight(i, 0, g.n - 1) *
                            axis_weight(j, 0, g.n - 1) *
                            axis_weight(kk, 0, g.n - 1);
          const double xk = (k == 0) ? x[0] : (k == 1) ? x[1] : x[2];
          const double wv = weight_at(x, -(3.0 - sigma));
          sum += qw * h3 * xk * wv * alg.inner_raw(Y.at(i, j, kk), dZ.at(i, j, kk));
        }
  }
  return sum;
}

double weak_form_b(const VectorField& A, const ScalarField& Y,
                   const ScalarField& Z, double sigma) {
  const double h1 = h1_inner_product(A, Y, Z, sigma);
  if (sigma == 1.0) return h1;  // drift carries the factor (1 - sigma) == 0
  return h1 - (1.0 - sigma) * weak_drift_term(A, Y, Z, sigma);
}

RealField derivative_tensor_norm(const VectorField& A, const ScalarField& F,
                                 int order) {
  require_compatible(A, F);
  if (order < 0) throw OrderTooLargeForGrid("negative derivative order");
  check_order_fits(F.grid(), std::max(order, 1));
  RealField acc(F.grid());
  tensor_sq_accumulate(A, F, order, acc);
  for (auto& v : acc.data()) v = std::sqrt(v);
  return acc;
}

NormReport sobolev_norm(const VectorField& A, const ScalarField& F, int n,
                        double sigma) {
  validate_sigma(sigma);
  require_compatible(A, F);
  if (n < 1) throw OrderTooLargeForGrid("Sobolev order must be >= 1");
  check_order_fits(F.grid(), n);

  const int margin = feasible_margin(F.grid(), 2 * n);

  double sq = 0.0, sq_int = 0.0;
  for (int p = 1; p <= n; ++p) {
    const RealField t = derivative_tensor_norm(A, F, p);
    const double wexp = (p - 1.5) * (1.0 - sigma);
    const double v = real_weighted_lp(t, 2.0, wexp, 0);
    const double vi = real_weighted_lp(t, 2.0, wexp, margin);
    sq += v * v;
    sq_int += vi * vi;
  }

  NormReport r;
  r.grid = F.grid();
  r.p = 2.0;
  r.sigma = sigma;
  r.w_exp = 0.0;
  r.quadrature = "trapezoid";
  r.interior_margin = margin;
  r.value = std::sqrt(sq);
  r.interior_value = std::sqrt(sq_int);
  return r;
}

NormReport weighted_sup_norm(const VectorField& A, const ScalarField& F, int n,
                             double sigma) {
  validate_sigma(sigma);
  require_compatible(A, F);
  if (n < 2) throw OrderTooLargeForGrid("sup norm order must be >= 2");
  check_order_fits(F.grid(), std::max(n - 2, 1));

  const int margin = feasible_margin(F.grid(), 2 * std::max(n - 2, 1));

  double best = 0.0, best_int = 0.0;
  for (int p = 0; p <= n - 2; ++p) {
    const RealField t = derivative_tensor_norm(A, F, p);
    const double wexp = p * (1.0 - sigma);
    best = std::max(best, real_weighted_lp(t, INFINITY, wexp, 0));
    best_int = std::max(best_int, real_weighted_lp(t, INFINITY, wexp, margin));
  }

  NormReport r;
  r.grid = F.grid();
  r.p = INFINITY;
  r.sigma = sigma;
  r.w_exp = 0.0;
  r.quadrature = "sup";
  r.interior_margin = margin;
  r.value = best;
  r.interior_value = best_int;
  return r;
}

}  // namespace covlap
