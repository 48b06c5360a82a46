#include "covlap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "covlap/rng.hpp"

namespace covlap {

namespace {

/// Central difference along an axis with zero extension past the box.
void dzero_axis(const double* src, double* dst, int n, int d, int axis,
                double inv2h) {
  const std::ptrdiff_t strides[3] = {static_cast<std::ptrdiff_t>(n) * n * d,
                                     static_cast<std::ptrdiff_t>(n) * d, d};
  const std::ptrdiff_t s = strides[axis];
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int t = (axis == 0) ? i : (axis == 1) ? j : k;
        const double* p = src + idx;
        double* q = dst + idx;
        if (t > 0 && t < n - 1) {
          for (int a = 0; a < d; ++a) q[a] = (p[s + a] - p[-s + a]) * inv2h;
        } else if (t == 0) {
          for (int a = 0; a < d; ++a) q[a] = p[s + a] * inv2h;
        } else {
          for (int a = 0; a < d; ++a) q[a] = -p[-s + a] * inv2h;
        }
        idx += static_cast<std::size_t>(d);
      }
}

}  // namespace

DiscreteOperator::DiscreteOperator(const VectorField& A) : A_(A) {
  if (A.grid().n < 5)
    throw GridTooSmall("operator needs n >= 5, got n=" +
                       std::to_string(A.grid().n));
}

DiscreteOperator::Workspace DiscreteOperator::make_workspace() const {
  const std::size_t full =
      grid().nodes() * static_cast<std::size_t>(alg().dim());
  Workspace ws;
  ws.full_u.assign(full, 0.0);
  ws.v.assign(full, 0.0);
  ws.w.assign(full, 0.0);
  ws.acc.assign(full, 0.0);
  return ws;
}

void DiscreteOperator::apply(const std::vector<double>& u,
                             std::vector<double>& out, Workspace& ws) const {
  const Grid3& g = grid();
  const int n = g.n;
  const int d = alg().dim();
  const int m = interior_n();
  const double inv2h = 1.0 / (2.0 * g.spacing());
  const AlgebraSpec& a = alg();

  // embed into the full box with zero boundary
  std::fill(ws.full_u.begin(), ws.full_u.end(), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double* p =
            u.data() + ((static_cast<std::size_t>(i) * m + j) * m + k) * d;
        double* q = ws.full_u.data() + g.index(i + 1, j + 1, k + 1) * d;
        std::copy(p, p + d, q);
      }

  std::fill(ws.acc.begin(), ws.acc.end(), 0.0);
  const std::size_t nodes = g.nodes();
  for (int axis = 0; axis < 3; ++axis) {
    const double* ak = A_[axis].data().data();

    dzero_axis(ws.full_u.data(), ws.v.data(), n, d, axis, inv2h);
    if (!a.abelian())
      for (std::size_t node = 0; node < nodes; ++node)
        a.bracket_accumulate(ak + node * d, ws.full_u.data() + node * d,
                             ws.v.data() + node * d);

    dzero_axis(ws.v.data(), ws.w.data(), n, d, axis, inv2h);
    if (!a.abelian())
      for (std::size_t node = 0; node < nodes; ++node)
        a.bracket_accumulate(ak + node * d, ws.v.data() + node * d,
                             ws.w.data() + node * d);

    for (std::size_t t = 0; t < ws.acc.size(); ++t) ws.acc[t] += ws.w[t];
  }

  out.resize(dimension());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double* p = ws.acc.data() + g.index(i + 1, j + 1, k + 1) * d;
        double* q =
            out.data() + ((static_cast<std::size_t>(i) * m + j) * m + k) * d;
        for (int t = 0; t < d; ++t) q[t] = -p[t];
      }
}

std::vector<double> DiscreteOperator::apply(const std::vector<double>& u) const {
  Workspace ws = make_workspace();
  std::vector<double> out;
  apply(u, out, ws);
  return out;
}

std::vector<double> DiscreteOperator::restrict_interior(
    const ScalarField& F) const {
  const int d = alg().dim();
  const int m = interior_n();
  std::vector<double> out(dimension());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double* p = F.at(i + 1, j + 1, k + 1);
        double* q =
            out.data() + ((static_cast<std::size_t>(i) * m + j) * m + k) * d;
        std::copy(p, p + d, q);
      }
  return out;
}

ScalarField DiscreteOperator::extend_with_zeros(
    const std::vector<double>& u) const {
  const Grid3& g = grid();
  const int d = alg().dim();
  const int m = interior_n();
  ScalarField F(g, A_.alg_ptr());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double* p =
            u.data() + ((static_cast<std::size_t>(i) * m + j) * m + k) * d;
        double* q = F.at(i + 1, j + 1, k + 1);
        std::copy(p, p + d, q);
      }
  return F;
}

double DiscreteOperator::h_dot(const std::vector<double>& u,
                               const std::vector<double>& v) const {
  const int d = alg().dim();
  const std::size_t blocks = u.size() / static_cast<std::size_t>(d);
  double s = 0.0;
  for (std::size_t b = 0; b < blocks; ++b)
    s += alg().inner_raw(u.data() + b * d, v.data() + b * d);
  return s;
}

DiscreteOperator assemble_operator(const VectorField& A) {
  return DiscreteOperator(A);
}

namespace {

/// Per-node block Jacobi preconditioner: inverse of
///   (6 / (4 h^2)) I - sum_k (ad A_k)^2
/// at each interior node.
class BlockJacobi {
 public:
  BlockJacobi(const DiscreteOperator& op, const VectorField& A) {
    const Grid3& g = op.grid();
    const AlgebraSpec& alg = op.alg();
    const int d = alg.dim();
    const int m = op.interior_n();
    const double h = g.spacing();
    const double lead = 6.0 / (4.0 * h * h);
    d_ = d;
    inv_.reserve(static_cast<std::size_t>(m) * m * m);
    AlgebraElement ax(d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          Eigen::MatrixXd blk = lead * Eigen::MatrixXd::Identity(d, d);
          for (int axis = 0; axis < 3; ++axis) {
            const double* p = A[axis].at(i + 1, j + 1, k + 1);
            std::copy(p, p + d, ax.coeffs.begin());
            const Eigen::MatrixXd ad = ad_matrix(alg, ax);
            blk -= ad * ad;
          }
          inv_.push_back(blk.inverse());
        }
  }

  void apply(const std::vector<double>& r, std::vector<double>& z) const {
    const int d = d_;
    z.resize(r.size());
    for (std::size_t b = 0; b < inv_.size(); ++b) {
      Eigen::Map<const Eigen::VectorXd> rv(r.data() + b * d, d);
      Eigen::Map<Eigen::VectorXd> zv(z.data() + b * d, d);
      zv = inv_[b] * rv;
    }
  }

 private:
  int d_ = 0;
  std::vector<Eigen::MatrixXd> inv_;
};

double max_boundary_magnitude(const ScalarField& F) {
  const Grid3& g = F.grid();
  double best = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        if (g.on_boundary(i, j, k))
          best = std::max(best, F.node_norm(i, j, k));
  return best;
}

}  // namespace

std::pair<ScalarField, SolveReport> solve_poisson(const VectorField& A,
                                                  const ScalarField& F,
                                                  double tol, int max_iter,
                                                  bool diagonal_preconditioner) {
  require_compatible(A, F);
  if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  DiscreteOperator op(A);
  SolveReport rep;
  rep.tolerance = tol;
  rep.boundary_magnitude = max_boundary_magnitude(F);

  // Delta(A) Z = F  <=>  (-Delta(A)) Z = -F
  std::vector<double> b = op.restrict_interior(F);
  for (auto& x : b) x = -x;

  const double bnorm = std::sqrt(op.h_dot(b, b));
  std::vector<double> x(b.size(), 0.0);

  if (bnorm == 0.0) {
    rep.iterations = 0;
    rep.final_residual = 0.0;
    rep.converged = true;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return {op.extend_with_zeros(x), rep};
  }

  std::unique_ptr<BlockJacobi> precond;
  if (diagonal_preconditioner)
    precond = std::make_unique<BlockJacobi>(op, A);

  DiscreteOperator::Workspace ws = op.make_workspace();
  std::vector<double> r = b, z, p, q;
  if (precond)
    precond->apply(r, z);
  else
    z = r;
  p = z;
  double rz = op.h_dot(r, z);
  int it = 0;
  bool done = false;

  while (!done && it < max_iter) {
    op.apply(p, q, ws);
    const double pq = op.h_dot(p, q);
    if (!(pq > 0.0)) break;  // should not happen for an SPD operator
    const double alpha = rz / pq;
    for (std::size_t t = 0; t < x.size(); ++t) x[t] += alpha * p[t];
    for (std::size_t t = 0; t < r.size(); ++t) r[t] -= alpha * q[t];
    ++it;

    const double res = std::sqrt(op.h_dot(r, r)) / bnorm;
    if (res <= tol) {
      // guard against recurrence drift: verify the true residual
      op.apply(x, q, ws);
      for (std::size_t t = 0; t < q.size(); ++t) q[t] = b[t] - q[t];
      const double true_res = std::sqrt(op.h_dot(q, q)) / bnorm;
      if (true_res <= tol) {
        done = true;
        break;
      }
      r = q;  // continue from the true residual
    }

    if (precond)
      precond->apply(r, z);
    else
      z = r;
    const double rz_new = op.h_dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t t = 0; t < p.size(); ++t) p[t] = z[t] + beta * p[t];
  }

  op.apply(x, q, ws);
  for (std::size_t t = 0; t < q.size(); ++t) q[t] = b[t] - q[t];
  rep.final_residual = std::sqrt(op.h_dot(q, q)) / bnorm;
  rep.iterations = it;
  rep.converged = rep.final_residual <= tol;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {op.extend_with_zeros(x), rep};
}

ManufacturedProblem manufactured_problem(const Grid3& grid,
                                         const AlgebraPtr& alg,
                                         std::uint64_t seed,
                                         ManufacturedSource source) {
  const int d = alg->dim();
  const double L = grid.L;
  Rng rng = Rng::keyed(seed, 0x6d616e75ULL);

  // potential: 1..3 bumps per component in random algebra directions
  std::array<AnalyticField, 3> a_spec;
  for (int k = 0; k < 3; ++k) {
    const int nb = rng.uniform_int(1, 3);
    for (int t = 0; t < nb; ++t) {
      Bump b;
      for (int m = 0; m < 3; ++m) b.center[m] = rng.uniform(-0.35 * L, 0.35 * L);
      b.radius = rng.uniform(0.3 * L, 0.6 * L);
      b.amplitude = rng.uniform(0.2, 0.5);
      AlgebraElement dir(rng.unit_vector(d));
      a_spec[k].terms.push_back({b, dir});
    }
  }

  // exact solution: one compactly supported bump near the center
  AnalyticField z_spec;
  {
    Bump b;
    for (int m = 0; m < 3; ++m) b.center[m] = rng.uniform(-0.15 * L, 0.15 * L);
    b.radius = rng.uniform(0.45 * L, 0.6 * L);
    b.amplitude = 1.0;
    AlgebraElement dir(rng.unit_vector(d));
    z_spec.terms.push_back({b, dir});
  }

  ManufacturedProblem mp;
  mp.A = VectorField(grid, alg);
  for (int k = 0; k < 3; ++k) mp.A[k] = a_spec[k].materialize(grid, alg);
  mp.Z_exact = z_spec.materialize(grid, alg);

  if (source == ManufacturedSource::Discrete) {
    DiscreteOperator op(mp.A);
    std::vector<double> z_int = op.restrict_interior(mp.Z_exact);
    std::vector<double> y = op.apply(z_int);
    for (auto& v : y) v = -v;  // F = Delta(A) Z = -(-Delta(A)) Z
    mp.F = op.extend_with_zeros(y);
  } else {
    // F = sum_k d2_k Z + [d_k A_k, Z] + 2 [A_k, d_k Z] + [A_k, [A_k, Z]]
    mp.F = ScalarField(grid, alg);
    std::vector<double> zv(d), zk(d), zkk(d), av(d), adk(d), br(d), br2(d);
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k) {
          const auto x = grid.point(i, j, k);
          double* out = mp.F.at(i, j, k);
          z_spec.value_into(x, zv.data(), d);
          for (int axis = 0; axis < 3; ++axis) {
            z_spec.partial_into(x, axis, zk.data(), d);
            z_spec.second_into(x, axis, zkk.data(), d);
            a_spec[axis].value_into(x, av.data(), d);
            a_spec[axis].partial_into(x, axis, adk.data(), d);
            for (int t = 0; t < d; ++t) out[t] += zkk[t];
            alg->bracket_into(adk.data(), zv.data(), br.data());
            for (int t = 0; t < d; ++t) out[t] += br[t];
            alg->bracket_into(av.data(), zk.data(), br.data());
            for (int t = 0; t < d; ++t) out[t] += 2.0 * br[t];
            alg->bracket_into(av.data(), zv.data(), br.data());
            alg->bracket_into(av.data(), br.data(), br2.data());
            for (int t = 0; t < d; ++t) out[t] += br2[t];
          }
        }
  }
  return mp;
}

GalerkinResult galerkin_solve(const VectorField& A, const ScalarField& F,
                              double sigma,
                              const std::vector<ScalarField>& basis) {
  validate_sigma(sigma);
  if (basis.empty()) throw BasisDegenerate("empty basis");
  require_compatible(A, F);
  for (const auto& b : basis) require_compatible(F, b);

  const int m = static_cast<int>(basis.size());
  GalerkinResult res;
  res.system.sigma = sigma;
  res.system.pivots.resize(m);

  // modified Gram-Schmidt under the H1 inner product
  for (int i = 0; i < m; ++i) {
    ScalarField v = basis[static_cast<std::size_t>(i)];
    const double norm0 =
        std::sqrt(std::max(0.0, h1_inner_product(A, v, v, sigma)));
    for (int j = 0; j < i; ++j) {
      const double proj = h1_inner_product(A, v, res.ortho_basis[j], sigma);
      v -= proj * res.ortho_basis[j];
    }
    const double norm1 =
        std::sqrt(std::max(0.0, h1_inner_product(A, v, v, sigma)));
    const double pivot = (norm0 > 0.0) ? norm1 / norm0 : 0.0;
    res.system.pivots[i] = pivot;
    if (pivot < 1e-12)
      throw BasisDegenerate("Gram-Schmidt pivot " + std::to_string(pivot) +
                            " at basis element " + std::to_string(i + 1));
    v *= 1.0 / norm1;
    res.ortho_basis.push_back(std::move(v));
  }

  // coefficient system a_n - (1-sigma) sum_m Drift(Psi_n, Psi_m) a_m = rhs_n
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(m, m);
  if (sigma != 1.0)
    for (int n = 0; n < m; ++n)
      for (int mm = 0; mm < m; ++mm)
        M(n, mm) -= (1.0 - sigma) * weak_drift_term(A, res.ortho_basis[n],
                                                    res.ortho_basis[mm], sigma);

  Eigen::VectorXd rhs(m);
  const Grid3& g = F.grid();
  const AlgebraSpec& alg = F.alg();
  const double h3 = std::pow(g.spacing(), 3);
  for (int n = 0; n < m; ++n) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double qi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
          const double qj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
          const double qk = (k == 0 || k == g.n - 1) ? 0.5 : 1.0;
          const double wv = weight_at(g.point(i, j, k), -(1.0 - sigma));
          s += qi * qj * qk * h3 * wv *
               alg.inner_raw(F.at(i, j, k), res.ortho_basis[n].at(i, j, k));
        }
    rhs(n) = -s;
  }

  res.system.M = M;
  res.system.rhs = rhs;
  res.coefficients = M.partialPivLu().solve(rhs);
  return res;
}

ScalarField galerkin_reconstruct(const GalerkinResult& r) {
  ScalarField out(r.ortho_basis[0].grid(), r.ortho_basis[0].alg_ptr());
  for (std::size_t n = 0; n < r.ortho_basis.size(); ++n)
    out += r.coefficients[static_cast<Eigen::Index>(n)] * r.ortho_basis[n];
  return out;
}

std::pair<ScalarField, SplitReport> asymptotic_split_solve(
    const VectorField& A, const ScalarField& F, const ScalarField& Z0,
    double sigma, double tol, int max_iter) {
  validate_sigma(sigma);
  require_compatible(A, F);
  require_compatible(F, Z0);

  ScalarField fprime = F - covariant_laplacian(A, Z0);
  SplitReport rep;
  rep.fprime_condition_norm =
      weighted_lp_norm(fprime, 2.0, 0.5 * (1.0 + sigma)).value;

  auto [y, solve_rep] = solve_poisson(A, fprime, tol, max_iter);
  rep.solve = solve_rep;
  return {y + Z0, rep};
}

GaussLawSplit gauss_law_split(const VectorField& A, const ScalarField& J0,
                              double tol, int max_iter) {
  GaussLawSplit out;
  auto [phi, rep] = solve_poisson(A, J0, tol, max_iter);
  out.Phi = std::move(phi);
  out.E_longitudinal = longitudinal_field(A, out.Phi);
  out.report.solve = rep;
  // div E^L = Delta(A) Phi; with the solver's stencil this is the solve residual
  out.report.divergence_residual = rep.final_residual;
  return out;
}

}  // namespace covlap
