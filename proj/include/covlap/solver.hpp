#ifndef COVLAP_SOLVER_HPP
#define COVLAP_SOLVER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "covlap/norms.hpp"

namespace covlap {

struct SolveReport {
  int iterations = 0;
  /// || Delta(A) Z - F ||_2 / || F ||_2 in the discrete h-weighted l2 norm,
  /// recomputed from the returned iterate.
  double final_residual = 0.0;
  double tolerance = 0.0;
  double wall_time_s = 0.0;
  /// max |F| over the boundary shell; a truncation diagnostic.
  double boundary_magnitude = 0.0;
  /// false means MaxIterationsExceeded; the best iterate is still returned.
  bool converged = true;
};

/// Matrix-free action of -Delta(A) on interior nodes with homogeneous
/// Dirichlet data. First derivatives use central differences with
/// zero extension past the box, so the operator is exactly antisymmetric
/// factored: it is symmetric positive definite with respect to the
/// h-weighted dot product for every potential A.
class DiscreteOperator {
 public:
  explicit DiscreteOperator(const VectorField& A);

  struct Workspace {
    std::vector<double> full_u, v, w, acc;
  };

  const Grid3& grid() const { return A_.grid(); }
  const AlgebraSpec& alg() const { return A_.alg(); }
  int interior_n() const { return grid().n - 2; }
  /// Interior nodes times algebra dimension.
  std::size_t dimension() const {
    const std::size_t m = static_cast<std::size_t>(interior_n());
    return m * m * m * static_cast<std::size_t>(alg().dim());
  }
  bool symmetric() const { return true; }

  Workspace make_workspace() const;
  void apply(const std::vector<double>& u, std::vector<double>& out,
             Workspace& ws) const;
  std::vector<double> apply(const std::vector<double>& u) const;

  std::vector<double> restrict_interior(const ScalarField& F) const;
  ScalarField extend_with_zeros(const std::vector<double>& u) const;

  /// Unweighted discrete h-metric dot product on interior vectors.
  double h_dot(const std::vector<double>& u, const std::vector<double>& v) const;

 private:
  VectorField A_;
};

/// assemble_operator per the module contract (requires n >= 5).
DiscreteOperator assemble_operator(const VectorField& A);

/// Conjugate-gradient solve of Delta(A) Z = F with zero Dirichlet data.
/// Z is extended by zeros to the boundary. Stops when the relative residual
/// reaches tol; on MaxIterationsExceeded the best iterate is returned with
/// report.converged == false.
std::pair<ScalarField, SolveReport> solve_poisson(const VectorField& A,
                                                  const ScalarField& F,
                                                  double tol, int max_iter,
                                                  bool diagonal_preconditioner = false);

enum class ManufacturedSource {
  /// F = discrete Delta(A) applied to Z_exact: the solve is exactly consistent.
  Discrete,
  /// F evaluated from the closed-form covariant Laplacian of Z_exact:
  /// order-of-accuracy studies against the continuum problem.
  Analytic,
};

struct ManufacturedProblem {
  VectorField A;
  ScalarField Z_exact;
  ScalarField F;
};

/// Smooth bounded bump potential plus compactly supported exact solution.
/// Bump parameters depend only on (seed, L), so the same seed on refined
/// grids samples the same continuum problem.
ManufacturedProblem manufactured_problem(const Grid3& grid,
                                         const AlgebraPtr& alg,
                                         std::uint64_t seed,
                                         ManufacturedSource source);

// ---------------------------------------------------------------------------
// Weighted Galerkin system (finite section of the generalized Fourier method)
// ---------------------------------------------------------------------------

struct GalerkinSystem {
  Eigen::MatrixXd M;       // identity minus the weighted drift term
  Eigen::VectorXd rhs;     // -integral w^{-(1-sigma)} (F, Psi_n)
  double sigma = 1.0;
  Eigen::VectorXd pivots;  // Gram-Schmidt conditioning report
};

struct GalerkinResult {
  Eigen::VectorXd coefficients;
  GalerkinSystem system;
  std::vector<ScalarField> ortho_basis;
};

/// Orthonormalizes the basis under the H1 inner product (modified
/// Gram-Schmidt; throws BasisDegenerate when a relative pivot drops below
/// 1e-12), assembles the coefficient system
///   a_n - (1-sigma) sum_m a_m Drift(Psi_n, Psi_m) = -int w^{-(1-sigma)}(F,Psi_n)
/// and solves it by dense LU.
GalerkinResult galerkin_solve(const VectorField& A, const ScalarField& F,
                              double sigma,
                              const std::vector<ScalarField>& basis);

/// Z_G = sum_n a_n Psi_n.
ScalarField galerkin_reconstruct(const GalerkinResult& r);

// ---------------------------------------------------------------------------
// Nontrivial asymptotics and the Gauss-law split
// ---------------------------------------------------------------------------

struct SplitReport {
  SolveReport solve;
  /// || w^{(1+sigma)/2} (F - Delta(A) Z0) ||_2, the asymptotic-source condition.
  double fprime_condition_norm = 0.0;
};

/// Z = Y + Z0 where Delta(A) Y = F - Delta(A) Z0 with zero Dirichlet data.
/// Z0 may carry nontrivial boundary values; its Laplacian is evaluated with
/// the one-sided boundary stencils of the field operations.
std::pair<ScalarField, SplitReport> asymptotic_split_solve(
    const VectorField& A, const ScalarField& F, const ScalarField& Z0,
    double sigma, double tol, int max_iter);

struct GaussLawReport {
  SolveReport solve;
  /// || sum_k nabla_k E_k^L - J0 || / || J0 ||, evaluated with the solver's
  /// own discrete operator so it coincides with the solve residual.
  double divergence_residual = 0.0;
};

struct GaussLawSplit {
  ScalarField Phi;
  VectorField E_longitudinal;
  GaussLawReport report;
};

/// Solves Delta(A) Phi = J0 and returns E_k^L = nabla_k Phi.
GaussLawSplit gauss_law_split(const VectorField& A, const ScalarField& J0,
                              double tol, int max_iter);

}  // namespace covlap

#endif  // COVLAP_SOLVER_HPP
