#ifndef COVLAP_NORMS_HPP
#define COVLAP_NORMS_HPP

#include <string>

#include "covlap/field_ops.hpp"
#include "covlap/weights.hpp"

namespace covlap {

struct NormReport {
  double value = 0.0;
  /// Same quantity evaluated on the sub-box that omits `interior_margin`
  /// nodes at each face (derivatives near the boundary use one-sided
  /// stencils; convergence studies want this variant).
  double interior_value = 0.0;
  int interior_margin = 0;
  std::string quadrature;
  Grid3 grid;
  double p = 2.0;
  double sigma = 1.0;
  double w_exp = 0.0;
};

/// || w^{w_exp} |F| ||_p with trapezoid quadrature (p finite) or the max over
/// nodes (p = infinity). interior_margin restricts both variants.
NormReport weighted_lp_norm(const ScalarField& F, double p, double w_exp,
                            int interior_margin = 2);

/// Weighted L^p of a plain real nodal function (internal building block,
/// also the zeroth block of the Sobolev machinery).
double real_weighted_lp(const RealField& u, double p, double w_exp,
                        int margin = 0);

/// <Phi,Psi>_1 = integral of w^{-(1-sigma)} sum_k (nabla_k Phi, nabla_k Psi).
double h1_inner_product(const VectorField& A, const ScalarField& Phi,
                        const ScalarField& Psi, double sigma);

/// Drift part of the weak form: integral of sum_k x_k w^{-(3-sigma)} (Y, nabla_k Z).
double weak_drift_term(const VectorField& A, const ScalarField& Y,
                       const ScalarField& Z, double sigma);

/// B(Y,Z) = <Y,Z>_1 - (1-sigma) * drift. The drift contribution is exactly
/// zero when sigma == 1.
double weak_form_b(const VectorField& A, const ScalarField& Y,
                   const ScalarField& Z, double sigma);

/// Nodewise tensor norm |nabla^order F| over all ordered index tuples,
/// evaluated by nested first-order covariant derivatives.
RealField derivative_tensor_norm(const VectorField& A, const ScalarField& F,
                                 int order);

/// || F ||_{n,2} = ( sum_{p=1..n} || w^{(p-3/2)(1-sigma)} |nabla^p F| ||_2^2 )^{1/2}.
NormReport sobolev_norm(const VectorField& A, const ScalarField& F, int n,
                        double sigma);

/// || F ||_{n-2,infty} = max_{0 <= p <= n-2} sup_x w^{p(1-sigma)} |nabla^p F(x)|.
NormReport weighted_sup_norm(const VectorField& A, const ScalarField& F, int n,
                             double sigma);

}  // namespace covlap

#endif  // COVLAP_NORMS_HPP
