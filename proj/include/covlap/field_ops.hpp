#ifndef COVLAP_FIELD_OPS_HPP
#define COVLAP_FIELD_OPS_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "covlap/fields.hpp"

namespace covlap {

/// Discrete partial derivative along an axis: second-order central
/// differences at interior nodes, second-order one-sided stencils on the
/// boundary faces.
ScalarField partial_derivative(const ScalarField& F, int axis);

/// nabla_k F = partial_k F + [A_k, F]. For abelian algebras the bracket is
/// skipped entirely, so the result is bit-identical to partial_derivative.
ScalarField covariant_derivative(const VectorField& A, const ScalarField& F,
                                 int axis);

/// G_{kl} = partial_l A_k - partial_k A_l - [A_k, A_l].
/// Antisymmetry G_{kl} = -G_{lk} holds exactly; diagonal blocks are zero.
TensorField2 curvature(const VectorField& A);

/// (div G)_k = sum_j nabla_j G_{jk}.
VectorField covariant_divergence(const VectorField& A, const TensorField2& G);

/// Delta(A) Z = sum_k nabla_k (nabla_k Z), by nested first-order applications.
ScalarField covariant_laplacian(const VectorField& A, const ScalarField& Z);

/// Discrete convolution with the standard mollifier eta_delta, sampled on the
/// grid and renormalized so the discrete kernel mass is exactly 1. Near the
/// boundary the kernel is clipped to the box and renormalized per node.
ScalarField mollify(const ScalarField& F, double delta);

/// Smooth radial cutoff profile: exactly 1 for rho <= 1.25, exactly 0 for
/// rho >= 1.75, monotone in between (mollified step at scale 1/4 around 3/2).
double cutoff_profile(double rho);

/// Nodewise multiply by tau_m(x) = cutoff_profile(|x|/m): identity inside
/// |x| <= m, zero outside |x| >= 2m.
ScalarField truncate(const ScalarField& F, double m);

/// Smooth compactly supported test mapping:
///   F(x) = exp(-1/(1-r^2)) * direction,  r = |x - center| / radius < 1,
/// and zero elsewhere. The ball must fit inside the box.
ScalarField sample_bump(const Grid3& grid, const AlgebraPtr& alg,
                        const std::array<double, 3>& center, double radius,
                        const AlgebraElement& direction);

/// E_k^L = nabla_k Phi.
VectorField longitudinal_field(const VectorField& A, const ScalarField& Phi);

/// Apply a constant d x d matrix to the coefficients at every node
/// (global gauge rotations in tests and diagnostics).
ScalarField map_coefficients(const Eigen::MatrixXd& R, const ScalarField& F);
VectorField map_coefficients(const Eigen::MatrixXd& R, const VectorField& A);

/// Nodewise algebra norm |F(x)| as a real-valued field.
RealField pointwise_norm(const ScalarField& F);

/// Trilinear resampling onto another grid over the same box (used to carry a
/// potential along when a check refines its grid).
ScalarField resample_trilinear(const ScalarField& F, const Grid3& target);
VectorField resample_trilinear(const VectorField& A, const Grid3& target);

// ---------------------------------------------------------------------------
// Analytic bump fields (closed-form values and derivatives), used for
// manufactured problems and generated test families.
// ---------------------------------------------------------------------------

/// Radial profile amplitude * exp(-1/(1 - |x-c|^2/R^2)) with analytic
/// first and (diagonal) second derivatives.
struct Bump {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 1.0;
  double amplitude = 1.0;

  double value(const std::array<double, 3>& x) const;
  /// d/dx_k of the profile.
  double partial(const std::array<double, 3>& x, int k) const;
  /// d^2/dx_k^2 of the profile.
  double second(const std::array<double, 3>& x, int k) const;
};

/// Sum of bumps, each carrying an algebra direction.
struct AnalyticField {
  struct Term {
    Bump profile;
    AlgebraElement direction;
  };
  std::vector<Term> terms;

  void value_into(const std::array<double, 3>& x, double* out, int d) const;
  void partial_into(const std::array<double, 3>& x, int k, double* out,
                    int d) const;
  void second_into(const std::array<double, 3>& x, int k, double* out,
                   int d) const;

  ScalarField materialize(const Grid3& grid, const AlgebraPtr& alg) const;
};

}  // namespace covlap

#endif  // COVLAP_FIELD_OPS_HPP
