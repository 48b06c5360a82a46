#include "covlap/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "covlap/rng.hpp"

namespace covlap {

namespace {

constexpr double kValidationTol = 1e-10;

std::string triple(int a, int b, int c) {
  std::ostringstream os;
  os << "(" << a + 1 << "," << b + 1 << "," << c + 1 << ")";
  return os.str();
}

}  // namespace

Eigen::MatrixXd killing_metric(const StructureConstants& f) {
  const int d = f.dim;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) s += f(a, c, e) * f(b, e, c);
      h(a, b) = -s;
    }
  // symmetric by construction up to round-off; symmetrize exactly
  h = 0.5 * (h + h.transpose()).eval();
  return h;
}

AlgebraSpec AlgebraSpec::build(const StructureConstants& f,
                               std::optional<Eigen::MatrixXd> h,
                               std::string name) {
  const int d = f.dim;
  if (d <= 0 || f.v.size() != static_cast<std::size_t>(d) * d * d)
    throw DimensionMismatch("structure constant array is not cubic");

  // antisymmetry f_{ab}^c = -f_{ba}^c
  {
    double worst = 0.0;
    int wa = 0, wb = 0, wc = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          const double r = std::abs(f(a, b, c) + f(b, a, c));
          if (r > worst) {
            worst = r;
            wa = a;
            wb = b;
            wc = c;
          }
        }
    if (worst > kValidationTol) {
      std::ostringstream os;
      os << "f_{ab}^c + f_{ba}^c != 0 at " << triple(wa, wb, wc)
         << ", residual " << worst;
      throw AntisymmetryViolation(os.str());
    }
  }

  // Jacobi identity
  {
    double worst = 0.0;
    int wa = 0, wb = 0, wc = 0, wg = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int g = 0; g < d; ++g) {
            double s = 0.0;
            for (int e = 0; e < d; ++e)
              s += f(a, b, e) * f(e, c, g) + f(b, c, e) * f(e, a, g) +
                   f(c, a, e) * f(e, b, g);
            const double r = std::abs(s);
            if (r > worst) {
              worst = r;
              wa = a;
              wb = b;
              wc = c;
              wg = g;
            }
          }
    if (worst > kValidationTol) {
      std::ostringstream os;
      os << "Jacobi identity fails at " << triple(wa, wb, wc) << " -> "
         << wg + 1 << ", residual " << worst;
      throw JacobiViolation(os.str());
    }
  }

  AlgebraSpec alg;
  alg.name_ = std::move(name);
  alg.f_ = f;

  if (h.has_value()) {
    if (h->rows() != d || h->cols() != d)
      throw DimensionMismatch("metric h is not d x d");
    alg.h_ = *h;
  } else {
    alg.h_ = killing_metric(f);
  }

  // positive definiteness (and symmetry) of h
  {
    const double asym = (alg.h_ - alg.h_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kValidationTol) {
      std::ostringstream os;
      os << "metric is not symmetric, max |h - h^T| = " << asym;
      throw MetricNotPositiveDefinite(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(alg.h_);
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0.0)) {
      std::ostringstream os;
      os << "metric has non-positive eigenvalue " << lmin;
      if (!h.has_value()) os << " (Killing form degenerate: algebra not semisimple)";
      throw MetricNotPositiveDefinite(os.str());
    }
    alg.lambda_min_ = lmin;
    alg.lambda_max_ = es.eigenvalues().maxCoeff();
  }

  // invariance: h_{cd} f_{ab}^d + h_{bd} f_{ac}^d = 0
  {
    double worst = 0.0;
    int wa = 0, wb = 0, wc = 0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double s = 0.0;
          for (int e = 0; e < d; ++e)
            s += alg.h_(c, e) * f(a, b, e) + alg.h_(b, e) * f(a, c, e);
          const double r = std::abs(s);
          if (r > worst) {
            worst = r;
            wa = a;
            wb = b;
            wc = c;
          }
        }
    if (worst > kValidationTol) {
      std::ostringstream os;
      os << "metric not ad-invariant at " << triple(wa, wb, wc) << ", residual "
         << worst;
      throw MetricNotInvariant(os.str());
    }
  }

  alg.h_inv_ = alg.h_.inverse();

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        if (f(a, b, c) != 0.0) alg.nonzeros_.push_back({a, b, c, f(a, b, c)});
  alg.abelian_ = alg.nonzeros_.empty();

  return alg;
}

AlgebraSpec AlgebraSpec::u1(int d) {
  return build(StructureConstants::zeros(d), Eigen::MatrixXd::Identity(d, d),
               "u1^" + std::to_string(d));
}

AlgebraSpec AlgebraSpec::su2() {
  StructureConstants f = StructureConstants::zeros(3);
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                           {1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
  for (int p = 0; p < 6; ++p)
    f(perms[p][0], perms[p][1], perms[p][2]) = (p < 3) ? 1.0 : -1.0;
  return build(f, std::nullopt, "su2");
}

AlgebraSpec AlgebraSpec::su3() {
  // Standard totally antisymmetric Gell-Mann f-constants (1-based triples).
  struct Entry {
    int a, b, c;
    double v;
  };
  const double s3 = std::sqrt(3.0) / 2.0;
  const Entry base[] = {{1, 2, 3, 1.0},  {1, 4, 7, 0.5},  {1, 5, 6, -0.5},
                        {2, 4, 6, 0.5},  {2, 5, 7, 0.5},  {3, 4, 5, 0.5},
                        {3, 6, 7, -0.5}, {4, 5, 8, s3},   {6, 7, 8, s3}};
  StructureConstants f = StructureConstants::zeros(8);
  for (const auto& e : base) {
    const int a = e.a - 1, b = e.b - 1, c = e.c - 1;
    // all six permutations with signature
    f(a, b, c) = e.v;
    f(b, c, a) = e.v;
    f(c, a, b) = e.v;
    f(b, a, c) = -e.v;
    f(a, c, b) = -e.v;
    f(c, b, a) = -e.v;
  }
  return build(f, std::nullopt, "su3");
}

AlgebraSpec AlgebraSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open algebra file: " + path);

  std::string line;
  int d = -1;
  StructureConstants f;
  std::optional<Eigen::MatrixXd> h;
  int lineno = 0;

  auto fail = [&](const std::string& what) {
    throw IoError(path + ":" + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;

    if (tok == "dim") {
      if (d >= 0) fail("duplicate dim line");
      if (!(is >> d) || d <= 0) fail("bad dimension");
      f = StructureConstants::zeros(d);
    } else if (tok == "h") {
      if (d < 0) fail("h before dim");
      int a, b;
      double v;
      if (!(is >> a >> b >> v)) fail("bad h line");
      if (a < 1 || a > d || b < 1 || b > d) fail("h index out of range");
      if (!h) h = Eigen::MatrixXd::Zero(d, d);
      (*h)(a - 1, b - 1) = v;
    } else {
      if (d < 0) fail("entry before dim");
      int a, b, c;
      double v;
      std::istringstream is2(line);
      if (!(is2 >> a >> b >> c >> v)) fail("bad f line");
      if (a < 1 || a > d || b < 1 || b > d || c < 1 || c > d)
        fail("f index out of range");
      f(a - 1, b - 1, c - 1) = v;
    }
  }
  if (d < 0) throw IoError(path + ": missing dim line");

  return build(f, h, path);
}

AlgebraSpec AlgebraSpec::by_name(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "su3") return su3();
  if (name.rfind("u1^", 0) == 0) {
    const int d = std::stoi(name.substr(3));
    if (d <= 0) throw ConfigError("bad abelian dimension in '" + name + "'");
    return u1(d);
  }
  if (name == "u1") return u1(1);
  throw ConfigError("unknown algebra name '" + name + "'");
}

void AlgebraSpec::bracket_into(const double* x, const double* y,
                               double* out) const {
  std::fill(out, out + dim(), 0.0);
  bracket_accumulate(x, y, out);
}

void AlgebraSpec::bracket_accumulate(const double* x, const double* y,
                                     double* out) const {
  for (const auto& e : nonzeros_) out[e.c] += e.value * x[e.a] * y[e.b];
}

double AlgebraSpec::inner_raw(const double* x, const double* y) const {
  const int d = dim();
  double s = 0.0;
  for (int a = 0; a < d; ++a) {
    double row = 0.0;
    for (int b = 0; b < d; ++b) row += h_(a, b) * y[b];
    s += x[a] * row;
  }
  return s;
}

double AlgebraSpec::norm_raw(const double* x) const {
  return std::sqrt(std::max(0.0, inner_raw(x, x)));
}

namespace {

void check_dims(const AlgebraSpec& alg, const AlgebraElement& x) {
  if (x.dim() != alg.dim())
    throw DimensionMismatch("element has dimension " +
                            std::to_string(x.dim()) + ", algebra expects " +
                            std::to_string(alg.dim()));
}

}  // namespace

AlgebraElement bracket(const AlgebraSpec& alg, const AlgebraElement& x,
                       const AlgebraElement& y) {
  check_dims(alg, x);
  check_dims(alg, y);
  AlgebraElement out(alg.dim());
  alg.bracket_into(x.coeffs.data(), y.coeffs.data(), out.coeffs.data());
  return out;
}

double inner(const AlgebraSpec& alg, const AlgebraElement& x,
             const AlgebraElement& y) {
  check_dims(alg, x);
  check_dims(alg, y);
  return alg.inner_raw(x.coeffs.data(), y.coeffs.data());
}

double norm(const AlgebraSpec& alg, const AlgebraElement& x) {
  check_dims(alg, x);
  return alg.norm_raw(x.coeffs.data());
}

Eigen::MatrixXd ad_matrix(const AlgebraSpec& alg, const AlgebraElement& x) {
  check_dims(alg, x);
  const int d = alg.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int c = 0; c < d; ++c)
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += alg.f(a, b, c) * x[a];
      m(c, b) = s;
    }
  return m;
}

namespace {

using Vec = Eigen::VectorXd;

double h_dot(const AlgebraSpec& alg, const Vec& x, const Vec& y) {
  return x.dot(alg.metric() * y);
}

Vec h_normalize(const AlgebraSpec& alg, const Vec& x) {
  const double n = std::sqrt(std::max(0.0, h_dot(alg, x, x)));
  if (n == 0.0) return x;
  return x / n;
}

double bracket_sq(const AlgebraSpec& alg, const Vec& x, const Vec& y, Vec& b) {
  alg.bracket_into(x.data(), y.data(), b.data());
  return h_dot(alg, b, b);
}

/// One projected gradient ascent run for |[X,Y]|_h^2 on the product of
/// h-unit spheres. Returns the best objective value reached.
double ascend(const AlgebraSpec& alg, Vec x, Vec y) {
  const int d = alg.dim();
  Vec b(d), gx(d), gy(d);
  x = h_normalize(alg, x);
  y = h_normalize(alg, y);
  double phi = bracket_sq(alg, x, y, b);
  double step = 0.25;

  for (int it = 0; it < 2000; ++it) {
    // Euclidean gradient: d(phi)/dX^p = 2 h_{cd} B^d f_{pb}^c Y^b (and sym. in Y)
    const Vec hb = alg.metric() * b;
    gx.setZero();
    gy.setZero();
    for (int p = 0; p < d; ++p) {
      double sx = 0.0, sy = 0.0;
      for (int q = 0; q < d; ++q) {
        double fx = 0.0, fy = 0.0;
        for (int c = 0; c < d; ++c) {
          fx += alg.f(p, q, c) * hb[c];
          fy += alg.f(q, p, c) * hb[c];
        }
        sx += fx * y[q];
        sy += fy * x[q];
      }
      gx[p] = 2.0 * sx;
      gy[p] = 2.0 * sy;
    }
    // Riemannian gradient on the h-sphere
    Vec rx = alg.metric_inverse() * gx;
    Vec ry = alg.metric_inverse() * gy;
    rx -= h_dot(alg, rx, x) * x;
    ry -= h_dot(alg, ry, y) * y;

    const double gnorm2 = h_dot(alg, rx, rx) + h_dot(alg, ry, ry);
    if (gnorm2 <= 1e-24 * std::max(1.0, phi)) break;

    bool improved = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vec xn = h_normalize(alg, x + step * rx);
      Vec yn = h_normalize(alg, y + step * ry);
      const double phin = bracket_sq(alg, xn, yn, b);
      if (phin > phi) {
        const double gain = phin - phi;
        x = xn;
        y = yn;
        phi = phin;
        step = std::min(step * 1.5, 4.0);
        improved = true;
        if (gain <= 1e-14 * std::max(1.0, phi)) it = 2000;  // converged
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (!improved) break;
    // restore b to current iterate for the next gradient
    bracket_sq(alg, x, y, b);
  }
  bracket_sq(alg, x, y, b);
  return phi;
}

}  // namespace

double commutator_bound_constant(const AlgebraSpec& alg) {
  if (alg.abelian()) return 0.0;
  const int d = alg.dim();

  std::vector<std::pair<Vec, Vec>> seeds;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Vec x = Vec::Zero(d), y = Vec::Zero(d);
      x[a] = 1.0;
      y[b] = 1.0;
      seeds.emplace_back(x, y);
    }
  Rng rng(0x5eedULL);
  for (int k = 0; k < 16; ++k) {
    Vec x(d), y(d);
    for (int a = 0; a < d; ++a) {
      x[a] = rng.normal();
      y[a] = rng.normal();
    }
    seeds.emplace_back(x, y);
  }

  double best = 0.0;
  for (const auto& [x, y] : seeds) best = std::max(best, ascend(alg, x, y));
  return std::sqrt(best);
}

}  // namespace covlap
