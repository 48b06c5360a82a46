#ifndef COVLAP_CHECKS_HPP
#define COVLAP_CHECKS_HPP

#include <map>
#include <string>
#include <vector>

#include "covlap/family.hpp"
#include "covlap/norms.hpp"

namespace covlap {

/// Outcome of one inequality verification. lhs/rhs are the two sides at the
/// extremal sample; empirical_constant is the max of lhs/rhs over the family
/// (a lower bound on the true supremum). details carries per-check extras
/// (refined constants, curvature norms, slack extremes).
struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_constant = 0.0;
  int samples = 0;
  bool passed = false;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  Grid3 grid;
  std::map<std::string, double> details;
};

/// Weighted Poincare inequality (the w^{-(3-sigma)/2} zeroth-order bound by
/// the H1 seminorm). Passes when the max ratio is finite and moves by at
/// most 20% under one grid refinement.
CheckReport check_poincare(const VectorField& A, double sigma,
                           const TestFamily& family);

struct GurkaOpicOptions {
  int sweep_points = 400;
  double tau_min = 1e-3;
  double tau_max = 1e9;
  double quad_tol = 1e-12;
};

/// sup over tau of (int_0^tau v0 t^2 dt)^{1/p} (int_tau^inf [v1 t^2]^{-1/(p-1)} dt)^{1-1/p}
/// with v0 = (1+t^2)^{-(3-sigma)/2}, v1 = (1+t^2)^{-(1-sigma)/2}.
/// Returns +infinity when the tail integral diverges (sigma = 0 is accepted
/// by this diagnostic alone to reproduce that negative result).
double gurka_opic_condition(double sigma, double p,
                            const GurkaOpicOptions& opt = {});

/// Coercivity of the weak form: B(Phi,Phi) >= ||Phi||_{1,2}^2 up to
/// quadrature round-off 1e-8 * scale. The drift contribution is exactly zero
/// at sigma = 1.
CheckReport check_coercivity(const VectorField& A, double sigma,
                             const TestFamily& family);

/// Boundedness |B(Y,Z)| <= [1 + C_P (1-sigma)] ||Y|| ||Z|| over all sample
/// pairs, with C_P the empirical Poincare constant of the same family.
CheckReport check_boundedness(const VectorField& A, double sigma,
                              const TestFamily& family);

/// A priori estimate ||Phi||_{n,2} <= C (||Phi||_{n-1,2} +
/// ||w^{(n-3/2)(1-sigma)} nabla^{n-2} Delta(A) Phi||_2) for n = 2 or 3,
/// interior-node evaluation. Also reports the weighted curvature norms that
/// enter the constant. Stability band: 30% under one refinement.
CheckReport check_apriori(const VectorField& A, double sigma, int n,
                          const TestFamily& family);

/// Weighted interpolation inequalities; which = 1 (sup bound, q > 3),
/// 2 (L^6 bound), 3 (L^q bound, 2 <= q <= 6).
CheckReport check_interpolation(const VectorField& A, double sigma, int n,
                                int which, double q, const TestFamily& family);

/// Sobolev embedding ||Phi||_{n-2,inf} <= C ||Phi||_{n,2}.
CheckReport check_embedding(const VectorField& A, double sigma, int n,
                            const TestFamily& family);

/// Pointwise bound |d_k u_delta| <= |nabla_k Phi| for
/// u_delta = (|Phi|^2 + delta^2)^{1/2} - delta, with the derivative taken
/// through the closed-form identity and discrete stencils.
CheckReport ginibre_velo_check(const ScalarField& Phi, double delta);

/// Convergence of mollified-potential curvature norms
/// ||w^{(p+2)(1-sigma)} |(nabla^(delta))^p G^(delta)| ||_{inf,K} toward the
/// unmollified norm over the inner half-box K, for p = 0 or 1.
CheckReport mollified_curvature_convergence(const VectorField& A, int p,
                                            double sigma,
                                            const std::vector<double>& deltas);

}  // namespace covlap

#endif  // COVLAP_CHECKS_HPP
