#include "covlap/field_ops.hpp"

#include <cmath>
#include <cstring>

namespace covlap {

namespace {

// profile exp(-1/(1-s)) in s = (r/R)^2, vanishing for s >= 1.
// Below u = 1-s = 1e-6 the true value underflows to exactly 0 in double
// precision long before the polynomial prefactors can overflow.
constexpr double kProfileFloor = 1e-6;

double profile_exp(double s) {
  const double u = 1.0 - s;
  if (u <= kProfileFloor) return 0.0;
  return std::exp(-1.0 / u);
}

}  // namespace

ScalarField partial_derivative(const ScalarField& F, int axis) {
  if (axis < 0 || axis > 2)
    throw AxisOutOfRange("axis " + std::to_string(axis) + " not in 0..2");
  const Grid3& g = F.grid();
  const int n = g.n;
  const int d = F.dim();
  const double inv2h = 1.0 / (2.0 * g.spacing());

  ScalarField out(g, F.alg_ptr());
  const double* src = F.data().data();
  double* dst = out.data().data();

  const std::ptrdiff_t strides[3] = {
      static_cast<std::ptrdiff_t>(n) * n * d,
      static_cast<std::ptrdiff_t>(n) * d, d};
  const std::ptrdiff_t s = strides[axis];

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int t = (axis == 0) ? i : (axis == 1) ? j : k;
        const std::ptrdiff_t base =
            static_cast<std::ptrdiff_t>(g.index(i, j, k)) * d;
        const double* p = src + base;
        double* q = dst + base;
        if (t > 0 && t < n - 1) {
          for (int a = 0; a < d; ++a) q[a] = (p[s + a] - p[-s + a]) * inv2h;
        } else if (t == 0) {
          for (int a = 0; a < d; ++a)
            q[a] = (-3.0 * p[a] + 4.0 * p[s + a] - p[2 * s + a]) * inv2h;
        } else {
          for (int a = 0; a < d; ++a)
            q[a] = (3.0 * p[a] - 4.0 * p[-s + a] + p[-2 * s + a]) * inv2h;
        }
      }
  return out;
}

ScalarField covariant_derivative(const VectorField& A, const ScalarField& F,
                                 int axis) {
  if (axis < 0 || axis > 2)
    throw AxisOutOfRange("axis " + std::to_string(axis) + " not in 0..2");
  require_compatible(A, F);
  ScalarField out = partial_derivative(F, axis);
  const AlgebraSpec& alg = F.alg();
  if (alg.abelian()) return out;

  const Grid3& g = F.grid();
  const int d = alg.dim();
  const double* a_data = A[axis].data().data();
  const double* f_data = F.data().data();
  double* o_data = out.data().data();
  const std::size_t nodes = g.nodes();
  for (std::size_t node = 0; node < nodes; ++node) {
    const std::size_t off = node * d;
    alg.bracket_accumulate(a_data + off, f_data + off, o_data + off);
  }
  return out;
}

TensorField2 curvature(const VectorField& A) {
  const Grid3& g = A.grid();
  const AlgebraSpec& alg = A.alg();
  const int d = alg.dim();
  TensorField2 G(g, A.alg_ptr());

  for (int k = 0; k < 3; ++k)
    for (int l = k + 1; l < 3; ++l) {
      ScalarField gkl = partial_derivative(A[k], l);
      gkl -= partial_derivative(A[l], k);
      if (!alg.abelian()) {
        double* dst = gkl.data().data();
        const double* ak = A[k].data().data();
        const double* al = A[l].data().data();
        std::vector<double> br(static_cast<std::size_t>(d));
        const std::size_t nodes = g.nodes();
        for (std::size_t node = 0; node < nodes; ++node) {
          const std::size_t off = node * d;
          alg.bracket_into(ak + off, al + off, br.data());
          for (int a = 0; a < d; ++a) dst[off + a] -= br[a];
        }
      }
      ScalarField glk = -1.0 * gkl;
      G(k, l) = std::move(gkl);
      G(l, k) = std::move(glk);
    }
  return G;
}

VectorField covariant_divergence(const VectorField& A, const TensorField2& G) {
  require_compatible(A, G(0, 0));
  VectorField out(A.grid(), A.alg_ptr());
  for (int k = 0; k < 3; ++k) {
    ScalarField acc = covariant_derivative(A, G(0, k), 0);
    acc += covariant_derivative(A, G(1, k), 1);
    acc += covariant_derivative(A, G(2, k), 2);
    out[k] = std::move(acc);
  }
  return out;
}

ScalarField covariant_laplacian(const VectorField& A, const ScalarField& Z) {
  require_compatible(A, Z);
  ScalarField out(Z.grid(), Z.alg_ptr());
  for (int k = 0; k < 3; ++k) {
    ScalarField first = covariant_derivative(A, Z, k);
    out += covariant_derivative(A, first, k);
  }
  return out;
}

ScalarField mollify(const ScalarField& F, double delta) {
  if (!(delta > 0.0)) throw DeltaNonpositive("delta must be positive");
  const Grid3& g = F.grid();
  const int n = g.n;
  const int d = F.dim();
  const double h = g.spacing();

  const int r = static_cast<int>(std::floor(delta / h));
  if (r == 0) return F;  // kernel support below one cell: exact identity
  const int w = 2 * r + 1;
  std::vector<double> kern(static_cast<std::size_t>(w) * w * w, 0.0);
  double full_sum = 0.0;
  for (int oi = -r; oi <= r; ++oi)
    for (int oj = -r; oj <= r; ++oj)
      for (int ok = -r; ok <= r; ++ok) {
        const double s = (static_cast<double>(oi) * oi + static_cast<double>(oj) * oj +
                          static_cast<double>(ok) * ok) *
                         h * h / (delta * delta);
        const double v = profile_exp(s);
        kern[((static_cast<std::size_t>(oi + r) * w) + (oj + r)) * w + (ok + r)] = v;
        full_sum += v;
      }

  ScalarField out(g, F.alg_ptr());
  std::vector<double> acc(static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const bool clipped = i < r || j < r || k < r || i >= n - r || j >= n - r ||
                             k >= n - r;
        std::fill(acc.begin(), acc.end(), 0.0);
        double wsum = 0.0;
        const int ilo = std::max(-r, -i), ihi = std::min(r, n - 1 - i);
        const int jlo = std::max(-r, -j), jhi = std::min(r, n - 1 - j);
        const int klo = std::max(-r, -k), khi = std::min(r, n - 1 - k);
        for (int oi = ilo; oi <= ihi; ++oi)
          for (int oj = jlo; oj <= jhi; ++oj)
            for (int ok = klo; ok <= khi; ++ok) {
              const double kv =
                  kern[((static_cast<std::size_t>(oi + r) * w) + (oj + r)) * w +
                       (ok + r)];
              if (kv == 0.0) continue;
              wsum += kv;
              const double* p = F.at(i + oi, j + oj, k + ok);
              for (int a = 0; a < d; ++a) acc[a] += kv * p[a];
            }
        const double norm = clipped ? wsum : full_sum;
        double* q = out.at(i, j, k);
        for (int a = 0; a < d; ++a) q[a] = acc[a] / norm;
      }
  return out;
}

double cutoff_profile(double rho) {
  // cumulative mass of the 1d mollifier exp(-1/(1-t^2)) on [-1,1],
  // tabulated once by composite Simpson on a fine grid
  static const std::vector<double>& table = [] {
    static std::vector<double> tab;
    const int n = 4096;  // intervals (even)
    const double a = -1.0, b = 1.0;
    const double dt = (b - a) / n;
    auto eta = [](double t) {
      const double u = 1.0 - t * t;
      return (u <= kProfileFloor) ? 0.0 : std::exp(-1.0 / u);
    };
    tab.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
      const double t0 = a + (i - 1) * dt;
      const double t1 = a + i * dt;
      const double tm = 0.5 * (t0 + t1);
      tab[i] = tab[i - 1] + (dt / 6.0) * (eta(t0) + 4.0 * eta(tm) + eta(t1));
    }
    const double total = tab[n];
    for (auto& x : tab) x /= total;
    return tab;
  }();

  // tau(rho) = H((1.5 - rho)/0.25), H = normalized cumulative above
  const double u = (1.5 - rho) / 0.25;
  if (u >= 1.0) return 1.0;
  if (u <= -1.0) return 0.0;
  const int n = static_cast<int>(table.size()) - 1;
  const double pos = (u + 1.0) / 2.0 * n;
  const int idx = std::min(n - 1, static_cast<int>(pos));
  const double frac = pos - idx;
  return table[idx] * (1.0 - frac) + table[idx + 1] * frac;
}

ScalarField truncate(const ScalarField& F, double m) {
  if (!(m > 0.0)) throw MNonpositive("truncation scale m must be positive");
  const Grid3& g = F.grid();
  const int d = F.dim();
  ScalarField out(g, F.alg_ptr());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const auto x = g.point(i, j, k);
        const double rho =
            std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / m;
        const double t = cutoff_profile(rho);
        const double* p = F.at(i, j, k);
        double* q = out.at(i, j, k);
        for (int a = 0; a < d; ++a) q[a] = t * p[a];
      }
  return out;
}

ScalarField sample_bump(const Grid3& grid, const AlgebraPtr& alg,
                        const std::array<double, 3>& center, double radius,
                        const AlgebraElement& direction) {
  if (!(radius > 0.0)) throw BallOutsideBox("radius must be positive");
  for (int k = 0; k < 3; ++k)
    if (std::abs(center[k]) + radius > grid.L)
      throw BallOutsideBox("ball of radius " + std::to_string(radius) +
                           " around the given center leaves the box");
  if (direction.dim() != alg->dim())
    throw DimensionMismatch("direction dimension does not match algebra");

  AnalyticField af;
  af.terms.push_back({Bump{center, radius, 1.0}, direction});
  return af.materialize(grid, alg);
}

VectorField longitudinal_field(const VectorField& A, const ScalarField& Phi) {
  require_compatible(A, Phi);
  VectorField out(A.grid(), A.alg_ptr());
  for (int k = 0; k < 3; ++k) out[k] = covariant_derivative(A, Phi, k);
  return out;
}

ScalarField map_coefficients(const Eigen::MatrixXd& R, const ScalarField& F) {
  const int d = F.dim();
  if (R.rows() != d || R.cols() != d)
    throw DimensionMismatch("matrix does not match algebra dimension");
  ScalarField out(F.grid(), F.alg_ptr());
  const double* src = F.data().data();
  double* dst = out.data().data();
  const std::size_t nodes = F.grid().nodes();
  for (std::size_t node = 0; node < nodes; ++node) {
    const double* p = src + node * d;
    double* q = dst + node * d;
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      for (int b = 0; b < d; ++b) s += R(a, b) * p[b];
      q[a] = s;
    }
  }
  return out;
}

VectorField map_coefficients(const Eigen::MatrixXd& R, const VectorField& A) {
  VectorField out(A.grid(), A.alg_ptr());
  for (int k = 0; k < 3; ++k) out[k] = map_coefficients(R, A[k]);
  return out;
}

ScalarField resample_trilinear(const ScalarField& F, const Grid3& target) {
  const Grid3& src = F.grid();
  if (src.L != target.L) throw GridMismatch("resampling must keep the box");
  const int d = F.dim();
  ScalarField out(target, F.alg_ptr());
  const double inv_h = 1.0 / src.spacing();
  for (int i = 0; i < target.n; ++i)
    for (int j = 0; j < target.n; ++j)
      for (int k = 0; k < target.n; ++k) {
        const auto x = target.point(i, j, k);
        double cell[3], frac[3];
        int base[3];
        for (int m = 0; m < 3; ++m) {
          cell[m] = (x[m] + src.L) * inv_h;
          base[m] = std::min(src.n - 2, std::max(0, static_cast<int>(cell[m])));
          frac[m] = std::min(1.0, std::max(0.0, cell[m] - base[m]));
        }
        double* q = out.at(i, j, k);
        for (int ci = 0; ci <= 1; ++ci)
          for (int cj = 0; cj <= 1; ++cj)
            for (int ck = 0; ck <= 1; ++ck) {
              const double w = (ci ? frac[0] : 1.0 - frac[0]) *
                               (cj ? frac[1] : 1.0 - frac[1]) *
                               (ck ? frac[2] : 1.0 - frac[2]);
              if (w == 0.0) continue;
              const double* p = F.at(base[0] + ci, base[1] + cj, base[2] + ck);
              for (int a = 0; a < d; ++a) q[a] += w * p[a];
            }
      }
  return out;
}

VectorField resample_trilinear(const VectorField& A, const Grid3& target) {
  VectorField out(target, A.alg_ptr());
  for (int k = 0; k < 3; ++k) out[k] = resample_trilinear(A[k], target);
  return out;
}

RealField pointwise_norm(const ScalarField& F) {
  RealField out(F.grid());
  const Grid3& g = F.grid();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) out.at(i, j, k) = F.node_norm(i, j, k);
  return out;
}

double Bump::value(const std::array<double, 3>& x) const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double t = (x[k] - center[k]) / radius;
    s += t * t;
  }
  return amplitude * profile_exp(s);
}

double Bump::partial(const std::array<double, 3>& x, int k) const {
  double s = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double t = (x[m] - center[m]) / radius;
    s += t * t;
  }
  const double u = 1.0 - s;
  if (u <= kProfileFloor) return 0.0;
  const double v = amplitude * std::exp(-1.0 / u);
  const double gp = -1.0 / (u * u);
  const double sk = 2.0 * (x[k] - center[k]) / (radius * radius);
  return v * gp * sk;
}

double Bump::second(const std::array<double, 3>& x, int k) const {
  double s = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double t = (x[m] - center[m]) / radius;
    s += t * t;
  }
  const double u = 1.0 - s;
  if (u <= kProfileFloor) return 0.0;
  const double v = amplitude * std::exp(-1.0 / u);
  const double gp = -1.0 / (u * u);
  const double gpp = -2.0 / (u * u * u);
  const double sk = 2.0 * (x[k] - center[k]) / (radius * radius);
  const double skk = 2.0 / (radius * radius);
  return v * ((gp * sk) * (gp * sk) + gpp * sk * sk + gp * skk);
}

void AnalyticField::value_into(const std::array<double, 3>& x, double* out,
                               int d) const {
  std::fill(out, out + d, 0.0);
  for (const auto& t : terms) {
    const double v = t.profile.value(x);
    if (v == 0.0) continue;
    for (int a = 0; a < d; ++a) out[a] += v * t.direction[a];
  }
}

void AnalyticField::partial_into(const std::array<double, 3>& x, int k,
                                 double* out, int d) const {
  std::fill(out, out + d, 0.0);
  for (const auto& t : terms) {
    const double v = t.profile.partial(x, k);
    if (v == 0.0) continue;
    for (int a = 0; a < d; ++a) out[a] += v * t.direction[a];
  }
}

void AnalyticField::second_into(const std::array<double, 3>& x, int k,
                                double* out, int d) const {
  std::fill(out, out + d, 0.0);
  for (const auto& t : terms) {
    const double v = t.profile.second(x, k);
    if (v == 0.0) continue;
    for (int a = 0; a < d; ++a) out[a] += v * t.direction[a];
  }
}

ScalarField AnalyticField::materialize(const Grid3& grid,
                                       const AlgebraPtr& alg) const {
  ScalarField out(grid, alg);
  const int d = alg->dim();
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k)
        value_into(grid.point(i, j, k), out.at(i, j, k), d);
  return out;
}

}  // namespace covlap
