#include "covlap/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covlap {

namespace {

void require_family_grid(const VectorField& A, const TestFamily& fam) {
  fam.validate();
  if (A.grid() != fam.grid)
    throw GridMismatch("potential and family live on different grids");
}

/// || w^wexp |nabla^order F| ||_p on the margin-restricted sub-box.
double tensor_lp(const VectorField& A, const ScalarField& F, int order,
                 double p, double wexp, int margin) {
  const RealField t = derivative_tensor_norm(A, F, order);
  return real_weighted_lp(t, p, wexp, margin);
}

/// Sobolev norm with a caller-chosen interior margin (all orders evaluated
/// on the same node set).
double sobolev_at_margin(const VectorField& A, const ScalarField& F, int n,
                         double sigma, int margin) {
  double sq = 0.0;
  for (int p = 1; p <= n; ++p) {
    const double v = tensor_lp(A, F, p, 2.0, (p - 1.5) * (1.0 - sigma), margin);
    sq += v * v;
  }
  return std::sqrt(sq);
}

double supnorm_at_margin(const VectorField& A, const ScalarField& F, int n,
                         double sigma, int margin) {
  double best = 0.0;
  for (int p = 0; p <= n - 2; ++p)
    best = std::max(best, tensor_lp(A, F, p, INFINITY, p * (1.0 - sigma), margin));
  return best;
}

struct Scan {
  double max_ratio = 0.0;
  double lhs_at_max = 0.0;
  double rhs_at_max = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
};

template <typename RatioFn>
Scan scan_family(int samples, RatioFn&& fn) {
  Scan s;
  for (int i = 0; i < samples; ++i) {
    const auto [lhs, rhs] = fn(i);
    const double r = (rhs > 0.0) ? lhs / rhs
                                 : (lhs > 0.0)
                                       ? std::numeric_limits<double>::infinity()
                                       : 0.0;
    if (r > s.max_ratio) {
      s.max_ratio = r;
      s.lhs_at_max = lhs;
      s.rhs_at_max = rhs;
    }
    s.min_ratio = std::min(s.min_ratio, r);
  }
  return s;
}

bool stable(double base, double refined, double band) {
  return std::isfinite(base) && std::isfinite(refined) &&
         std::abs(refined - base) <= band * std::abs(base);
}

}  // namespace

CheckReport check_poincare(const VectorField& A, double sigma,
                           const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);

  auto ratios = [&](const Grid3& g, const VectorField& pot) {
    return scan_family(family.samples, [&](int idx) {
      const ScalarField phi = family.sample_on(g, idx);
      const double lhs = real_weighted_lp(pointwise_norm(phi), 2.0,
                                          -(3.0 - sigma) / 2.0, 0);
      const double rhs =
          std::sqrt(std::max(0.0, h1_inner_product(pot, phi, phi, sigma)));
      return std::pair<double, double>{lhs, rhs};
    });
  };

  const Scan base = ratios(family.grid, A);
  const Grid3 fine = family.grid.refined();
  const Scan refined = ratios(fine, resample_trilinear(A, fine));

  CheckReport rep;
  rep.name = "poincare";
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = family.grid;
  rep.samples = family.samples;
  rep.lhs = base.lhs_at_max;
  rep.rhs = base.rhs_at_max;
  rep.empirical_constant = base.max_ratio;
  rep.details["refined_constant"] = refined.max_ratio;
  rep.details["min_ratio"] = base.min_ratio;
  rep.passed = stable(base.max_ratio, refined.max_ratio, 0.20);
  return rep;
}

CheckReport check_coercivity(const VectorField& A, double sigma,
                             const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);

  CheckReport rep;
  rep.name = "coercivity";
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = family.grid;
  rep.samples = family.samples;

  double worst_margin_scaled = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;  // ||Phi||^2 / B(Phi,Phi)
  double max_abs_drift = 0.0;
  bool ok = true;
  for (int i = 0; i < family.samples; ++i) {
    const ScalarField phi = family.sample(i);
    const double n2 = h1_inner_product(A, phi, phi, sigma);
    const double drift_contribution =
        (sigma == 1.0) ? 0.0
                       : -(1.0 - sigma) * weak_drift_term(A, phi, phi, sigma);
    const double b = n2 + drift_contribution;
    const double margin = drift_contribution;  // B - ||.||^2
    const double scale = n2;
    if (margin < -1e-8 * scale) ok = false;
    worst_margin_scaled = std::min(worst_margin_scaled, margin / scale);
    max_abs_drift = std::max(max_abs_drift, std::abs(drift_contribution));
    if (b > 0.0) {
      const double r = n2 / b;
      if (r > max_ratio) {
        max_ratio = r;
        rep.lhs = n2;
        rep.rhs = b;
      }
    }
  }
  rep.empirical_constant = max_ratio;
  rep.details["min_margin_over_scale"] = worst_margin_scaled;
  rep.details["max_abs_drift_contribution"] = max_abs_drift;
  rep.passed = ok;
  return rep;
}

CheckReport check_boundedness(const VectorField& A, double sigma,
                              const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);
  if (family.samples < 2)
    throw EmptyFamily("boundedness needs at least two samples");

  const Grid3& g = family.grid;
  const AlgebraSpec& alg = *family.alg;
  const double h3 = std::pow(g.spacing(), 3);

  // precompute samples and their covariant derivatives
  std::vector<ScalarField> phi;
  std::vector<std::array<ScalarField, 3>> dphi;
  phi.reserve(family.samples);
  for (int i = 0; i < family.samples; ++i) {
    phi.push_back(family.sample(i));
    dphi.push_back({covariant_derivative(A, phi.back(), 0),
                    covariant_derivative(A, phi.back(), 1),
                    covariant_derivative(A, phi.back(), 2)});
  }

  // fused quadrature for <Y,Z>_1 and the drift term Drift(Y, Z)
  auto forms = [&](int yi, int zi) {
    double h1 = 0.0, drift = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double qi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
          const double qj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
          const double qk = (k == 0 || k == g.n - 1) ? 0.5 : 1.0;
          const double q = qi * qj * qk * h3;
          const auto x = g.point(i, j, k);
          const double w1 = weight_at(x, -(1.0 - sigma));
          const double w3 = weight_at(x, -(3.0 - sigma));
          double grad = 0.0, drif = 0.0;
          for (int ax = 0; ax < 3; ++ax) {
            const double* dz = dphi[zi][ax].at(i, j, k);
            grad += alg.inner_raw(dphi[yi][ax].at(i, j, k), dz);
            drif += x[ax] * alg.inner_raw(phi[yi].at(i, j, k), dz);
          }
          h1 += q * w1 * grad;
          drift += q * w3 * drif;
        }
    return std::pair<double, double>{h1, drift};
  };

  std::vector<double> norms(family.samples);
  for (int i = 0; i < family.samples; ++i)
    norms[i] = std::sqrt(std::max(0.0, forms(i, i).first));

  // inline Poincare constant of the same family (no refinement pass)
  double cp = 0.0;
  for (int i = 0; i < family.samples; ++i) {
    const double lhs =
        real_weighted_lp(pointwise_norm(phi[i]), 2.0, -(3.0 - sigma) / 2.0, 0);
    if (norms[i] > 0.0) cp = std::max(cp, lhs / norms[i]);
  }

  CheckReport rep;
  rep.name = "boundedness";
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = g;
  rep.samples = family.samples;

  // all ordered pairs: the drift term is not symmetric in (Y, Z)
  double max_ratio = 0.0;
  for (int yi = 0; yi < family.samples; ++yi)
    for (int zi = 0; zi < family.samples; ++zi) {
      const auto [h1, drift] = forms(yi, zi);
      const double b = (sigma == 1.0) ? h1 : h1 - (1.0 - sigma) * drift;
      const double denom = norms[yi] * norms[zi];
      if (denom <= 0.0) continue;
      const double r = std::abs(b) / denom;
      if (r > max_ratio) {
        max_ratio = r;
        rep.lhs = std::abs(b);
        rep.rhs = denom;
      }
    }

  const double bound = 1.0 + cp * (1.0 - sigma) + 1e-6;
  rep.empirical_constant = max_ratio;
  rep.details["poincare_constant"] = cp;
  rep.details["declared_bound"] = bound;
  rep.passed = std::isfinite(max_ratio) && max_ratio <= bound;
  return rep;
}

namespace {

/// Nodewise tensor norm of |nabla^order G| summed over both tensor slots,
/// using the antisymmetry of G (off-diagonal pairs counted twice).
RealField curvature_tensor_norm(const VectorField& pot, const TensorField2& G,
                                int order) {
  RealField acc(G.grid());
  for (int l = 0; l < 3; ++l)
    for (int m = l + 1; m < 3; ++m) {
      const RealField t = derivative_tensor_norm(pot, G(l, m), order);
      for (std::size_t idx = 0; idx < acc.data().size(); ++idx) {
        const double v = t.data()[idx];
        acc.data()[idx] += 2.0 * v * v;
      }
    }
  for (auto& v : acc.data()) v = std::sqrt(v);
  return acc;
}

RealField vector_tensor_norm(const VectorField& pot, const VectorField& V,
                             int order) {
  RealField acc(V.grid());
  for (int k = 0; k < 3; ++k) {
    const RealField t = derivative_tensor_norm(pot, V[k], order);
    for (std::size_t idx = 0; idx < acc.data().size(); ++idx) {
      const double v = t.data()[idx];
      acc.data()[idx] += v * v;
    }
  }
  for (auto& v : acc.data()) v = std::sqrt(v);
  return acc;
}

}  // namespace

CheckReport check_apriori(const VectorField& A, double sigma, int n,
                          const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);
  if (n != 2 && n != 3)
    throw OrderUnsupported("a priori estimate implemented for n = 2 or 3");

  const int margin = 2 * n;

  auto ratios = [&](const Grid3& g, const VectorField& pot) {
    return scan_family(family.samples, [&](int idx) {
      const ScalarField phi = family.sample_on(g, idx);
      const double lhs = sobolev_at_margin(pot, phi, n, sigma, margin);
      const ScalarField lap = covariant_laplacian(pot, phi);
      const double rhs =
          sobolev_at_margin(pot, phi, n - 1, sigma, margin) +
          tensor_lp(pot, lap, n - 2, 2.0, (n - 1.5) * (1.0 - sigma), margin);
      return std::pair<double, double>{lhs, rhs};
    });
  };

  const Scan base = ratios(family.grid, A);
  const Grid3 fine = family.grid.refined();
  const Scan refined = ratios(fine, resample_trilinear(A, fine));

  CheckReport rep;
  rep.name = "apriori";
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = family.grid;
  rep.samples = family.samples;
  rep.lhs = base.lhs_at_max;
  rep.rhs = base.rhs_at_max;
  rep.empirical_constant = base.max_ratio;
  rep.details["refined_constant"] = refined.max_ratio;
  rep.details["order_n"] = n;

  // weighted curvature norms entering the constant
  const TensorField2 G = curvature(A);
  const VectorField divG = covariant_divergence(A, G);
  for (int p = 0; p <= std::max(0, n - 3); ++p) {
    const double wexp = (p + 2) * (1.0 - sigma);
    const RealField gN = curvature_tensor_norm(A, G, p);
    const RealField dN = vector_tensor_norm(A, divG, p);
    rep.details["curvature_sup_p" + std::to_string(p)] =
        real_weighted_lp(gN, INFINITY, wexp, 0);
    rep.details["curvature_div_l3_p" + std::to_string(p)] =
        real_weighted_lp(dN, 3.0, wexp, 0);
  }

  rep.passed = stable(base.max_ratio, refined.max_ratio, 0.30);
  return rep;
}

CheckReport check_interpolation(const VectorField& A, double sigma, int n,
                                int which, double q, const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);
  if (n < 2) throw OrderUnsupported("interpolation checks need n >= 2");
  if (which < 1 || which > 3)
    throw ExponentOutOfRange("which must be 1, 2 or 3");
  if (which == 1 && !(q > 3.0))
    throw ExponentOutOfRange("first inequality requires q > 3");
  if (which == 3 && !(q >= 2.0 && q <= 6.0))
    throw ExponentOutOfRange("third inequality requires 2 <= q <= 6");

  const double oms = 1.0 - sigma;
  const int max_order = (which == 3) ? n : n - 1;
  const int margin = 2 * std::max(max_order, 1);

  auto ratios = [&](const Grid3& g, const VectorField& pot) {
    return scan_family(family.samples, [&](int idx) {
      const ScalarField phi = family.sample_on(g, idx);
      double lhs = 0.0, rhs = 0.0;
      if (which == 1) {
        const double a = q / (3.0 * (q - 2.0));
        lhs = tensor_lp(pot, phi, n - 2, INFINITY, (n - 2) * oms, margin);
        const double t6 =
            tensor_lp(pot, phi, n - 2, 6.0, (n - 2.5) * oms, margin);
        const double tq1 =
            tensor_lp(pot, phi, n - 1, q, (n - 1.0 - 3.0 / q) * oms, margin);
        const double tq2 =
            tensor_lp(pot, phi, n - 2, q, (n - 2.0 - 3.0 / q) * oms, margin);
        rhs = std::pow(t6, 1.0 - a) * std::pow(tq1 + (n - 2) * tq2, a);
      } else if (which == 2) {
        lhs = tensor_lp(pot, phi, n - 2, 6.0, (n - 2.5) * oms, margin);
        const double t1 = tensor_lp(pot, phi, n - 1, 2.0, (n - 2.5) * oms, margin);
        const double t2 = tensor_lp(pot, phi, n - 2, 2.0, (n - 3.5) * oms, margin);
        rhs = t1 + (n - 2) * t2;
      } else {
        const double b = 3.0 * (0.5 - 1.0 / q);
        lhs = tensor_lp(pot, phi, n - 1, q, (n - 1.0 - 3.0 / q) * oms, margin);
        const double t1 = tensor_lp(pot, phi, n - 1, 2.0, (n - 2.5) * oms, margin);
        const double t2 = tensor_lp(pot, phi, n, 2.0, (n - 1.5) * oms, margin);
        rhs = std::pow(t1, 1.0 - b) * std::pow(t2 + (n - 1) * t1, b);
      }
      return std::pair<double, double>{lhs, rhs};
    });
  };

  const Scan base = ratios(family.grid, A);
  const Grid3 fine = family.grid.refined();
  const Scan refined = ratios(fine, resample_trilinear(A, fine));

  CheckReport rep;
  rep.name = "interpolation_gns" + std::to_string(which);
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = family.grid;
  rep.samples = family.samples;
  rep.lhs = base.lhs_at_max;
  rep.rhs = base.rhs_at_max;
  rep.empirical_constant = base.max_ratio;
  rep.details["refined_constant"] = refined.max_ratio;
  rep.details["q"] = q;
  rep.details["order_n"] = n;
  rep.passed = stable(base.max_ratio, refined.max_ratio, 0.30);
  return rep;
}

CheckReport check_embedding(const VectorField& A, double sigma, int n,
                            const TestFamily& family) {
  validate_sigma(sigma);
  require_family_grid(A, family);
  if (n < 2) throw OrderUnsupported("embedding needs n >= 2");

  const int margin = 2 * n;

  auto ratios = [&](const Grid3& g, const VectorField& pot) {
    return scan_family(family.samples, [&](int idx) {
      const ScalarField phi = family.sample_on(g, idx);
      const double lhs = supnorm_at_margin(pot, phi, n, sigma, margin);
      const double rhs = sobolev_at_margin(pot, phi, n, sigma, margin);
      return std::pair<double, double>{lhs, rhs};
    });
  };

  const Scan base = ratios(family.grid, A);
  const Grid3 fine = family.grid.refined();
  const Scan refined = ratios(fine, resample_trilinear(A, fine));

  CheckReport rep;
  rep.name = "embedding";
  rep.sigma = sigma;
  rep.seed = family.seed;
  rep.grid = family.grid;
  rep.samples = family.samples;
  rep.lhs = base.lhs_at_max;
  rep.rhs = base.rhs_at_max;
  rep.empirical_constant = base.max_ratio;
  rep.details["refined_constant"] = refined.max_ratio;
  rep.details["order_n"] = n;
  rep.passed = stable(base.max_ratio, refined.max_ratio, 0.30);
  return rep;
}

CheckReport ginibre_velo_check(const ScalarField& Phi, double delta) {
  if (!(delta > 0.0)) throw DeltaNonpositive("delta must be positive");
  const Grid3& g = Phi.grid();
  const AlgebraSpec& alg = Phi.alg();

  CheckReport rep;
  rep.name = "ginibre_velo";
  rep.grid = g;
  rep.samples = static_cast<int>(g.nodes());
  rep.details["delta"] = delta;

  double max_violation = -std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  bool ok = true;
  for (int axis = 0; axis < 3; ++axis) {
    const ScalarField dPhi = partial_derivative(Phi, axis);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double* pv = Phi.at(i, j, k);
          const double* dv = dPhi.at(i, j, k);
          const double phi2 = alg.inner_raw(pv, pv);
          const double t = alg.inner_raw(dv, pv) /
                           std::sqrt(phi2 + delta * delta);
          const double lhs = std::abs(t);
          const double rhs = alg.norm_raw(dv);
          if (lhs > rhs + 1e-12) ok = false;
          max_violation = std::max(max_violation, lhs - rhs);
          if (rhs > 0.0 && lhs / rhs > max_ratio) {
            max_ratio = lhs / rhs;
            rep.lhs = lhs;
            rep.rhs = rhs;
          }
        }
  }
  rep.empirical_constant = max_ratio;
  rep.details["max_violation"] = max_violation;
  rep.passed = ok;
  return rep;
}

CheckReport mollified_curvature_convergence(const VectorField& A, int p,
                                            double sigma,
                                            const std::vector<double>& deltas) {
  validate_sigma(sigma);
  if (deltas.empty()) throw DeltaListEmpty("need at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw DeltaNonpositive("deltas must be positive");
    if (i > 0 && deltas[i] >= deltas[i - 1])
      throw ConfigError("deltas must decrease");
  }
  if (p != 0 && p != 1)
    throw OrderUnsupported("mollified curvature check supports p = 0 or 1");

  const Grid3& g = A.grid();
  const double k_half = 0.5 * g.L;
  const double wexp = (p + 2) * (1.0 - sigma);

  auto masked_sup = [&](const RealField& u) {
    double best = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const auto x = g.point(i, j, k);
          if (std::abs(x[0]) > k_half + 1e-12 ||
              std::abs(x[1]) > k_half + 1e-12 ||
              std::abs(x[2]) > k_half + 1e-12)
            continue;
          best = std::max(best, weight_at(x, wexp) * u.at(i, j, k));
        }
    return best;
  };

  const double target = masked_sup(curvature_tensor_norm(A, curvature(A), p));

  CheckReport rep;
  rep.name = "mollified_curvature";
  rep.sigma = sigma;
  rep.grid = g;
  rep.samples = static_cast<int>(deltas.size());
  rep.details["target"] = target;
  rep.details["order_p"] = p;

  const double tol0 = 1e-10 * (1.0 + target);
  bool ok = true;
  double prev_gap = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    VectorField Am(g, A.alg_ptr());
    for (int k = 0; k < 3; ++k) Am[k] = mollify(A[k], deltas[i]);
    const double v = masked_sup(curvature_tensor_norm(Am, curvature(Am), p));
    const double gap = std::abs(v - target);
    rep.details["norm_" + std::to_string(i)] = v;
    rep.details["gap_" + std::to_string(i)] = gap;
    if (gap > prev_gap + tol0) ok = false;
    prev_gap = gap;
    last = v;
  }
  const double final_gap = std::abs(last - target);
  if (final_gap > 0.05 * target + tol0) ok = false;

  rep.lhs = last;
  rep.rhs = target;
  rep.empirical_constant = (target > 0.0) ? last / target : 1.0;
  rep.passed = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Gurka-Opic condition
// ---------------------------------------------------------------------------

namespace {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 28);
}

/// Coefficients of (1 + u)^alpha around u = 0.
std::vector<double> binomial_series(double alpha, int terms) {
  std::vector<double> c(static_cast<std::size_t>(terms), 0.0);
  c[0] = 1.0;
  for (int m = 1; m < terms; ++m)
    c[static_cast<std::size_t>(m)] =
        c[static_cast<std::size_t>(m - 1)] * (alpha - m + 1) / m;
  return c;
}

constexpr double kTailStart = 10.0;
constexpr int kSeriesTerms = 8;

/// int_0^tau t^2 (1+t^2)^{-(3-sigma)/2} dt
double gurka_i0(double sigma, double tau, double quad_tol) {
  auto f0 = [&](double t) {
    return t * t * std::pow(1.0 + t * t, -(3.0 - sigma) / 2.0);
  };
  if (tau <= kTailStart) return adaptive_simpson(f0, 0.0, tau, quad_tol);
  double v = adaptive_simpson(f0, 0.0, kTailStart, quad_tol);
  // t^2 (1+t^2)^alpha = t^{sigma-1} (1+t^-2)^alpha, alpha = -(3-sigma)/2
  const auto c = binomial_series(-(3.0 - sigma) / 2.0, kSeriesTerms);
  for (int m = 0; m < kSeriesTerms; ++m) {
    const double e = sigma - 2.0 * m;  // exponent of the antiderivative
    v += c[static_cast<std::size_t>(m)] *
         (std::pow(tau, e) - std::pow(kTailStart, e)) / e;
  }
  return v;
}

/// int_tau^inf [t^2 (1+t^2)^{-(1-sigma)/2}]^{-1/(p-1)} dt (finite tails only)
double gurka_i1(double sigma, double p, double tau, double quad_tol) {
  const double gamma = (1.0 - sigma) / (2.0 * (p - 1.0));
  const double e = 2.0 * gamma - 2.0 / (p - 1.0);  // integrand ~ t^e at infinity
  auto f1 = [&](double t) {
    return std::pow(t, -2.0 / (p - 1.0)) * std::pow(1.0 + t * t, gamma);
  };
  const auto c = binomial_series(gamma, kSeriesTerms);
  auto tail_from = [&](double t0) {
    double v = 0.0;
    for (int m = 0; m < kSeriesTerms; ++m) {
      const double ee = e - 2.0 * m + 1.0;  // < 0
      v += c[static_cast<std::size_t>(m)] * (-std::pow(t0, ee) / ee);
    }
    return v;
  };
  if (tau >= kTailStart) return tail_from(tau);
  return adaptive_simpson(f1, tau, kTailStart, quad_tol) + tail_from(kTailStart);
}

}  // namespace

double gurka_opic_condition(double sigma, double p,
                            const GurkaOpicOptions& opt) {
  if (!(p > 1.0)) throw PNotGreaterThanOne("requires p > 1");
  if (!(sigma >= 0.0) || !(sigma <= 1.0))
    throw SigmaOutOfRange("gurka_opic_condition accepts sigma in [0, 1]");

  // tail exponent of the second integrand; divergence iff e >= -1
  const double e = -(1.0 + sigma) / (p - 1.0);
  if (e >= -1.0) return std::numeric_limits<double>::infinity();

  auto value_at = [&](double tau) {
    const double i0 = gurka_i0(sigma, tau, opt.quad_tol);
    const double i1 = gurka_i1(sigma, p, tau, opt.quad_tol);
    return std::pow(i0, 1.0 / p) * std::pow(i1, 1.0 - 1.0 / p);
  };

  const int np = std::max(opt.sweep_points, 8);
  const double la = std::log(opt.tau_min), lb = std::log(opt.tau_max);
  double best = 0.0;
  int best_i = 0;
  std::vector<double> vals(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    const double tau = std::exp(la + (lb - la) * i / (np - 1));
    vals[static_cast<std::size_t>(i)] = value_at(tau);
    if (vals[static_cast<std::size_t>(i)] > best) {
      best = vals[static_cast<std::size_t>(i)];
      best_i = i;
    }
  }

  // golden-section refinement on log(tau) around the sweep maximizer
  const double step = (lb - la) / (np - 1);
  double lo = la + step * std::max(0, best_i - 1);
  double hi = la + step * std::min(np - 1, best_i + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = value_at(std::exp(x1)), f2 = value_at(std::exp(x2));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = value_at(std::exp(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = value_at(std::exp(x1));
    }
  }
  return std::max(best, std::max(f1, f2));
}

}  // namespace covlap
