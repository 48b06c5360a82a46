#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "covlap/norms.hpp"
#include "test_util.hpp"

using namespace covlap;
using covlap::testing::shared;

namespace {

ScalarField constant_field(const Grid3& g, const AlgebraPtr& alg, double v,
                           int component = 0) {
  ScalarField F(g, alg);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) F.value(i, j, k, component) = v;
  return F;
}

ScalarField centered_bump(const Grid3& g, const AlgebraPtr& alg,
                          double radius_frac, int component = 0,
                          double amp = 1.0) {
  AlgebraElement dir(alg->dim());
  dir[component] = amp;
  return sample_bump(g, alg, {0.0, 0.0, 0.0}, radius_frac * g.L, dir);
}

}  // namespace

TEST_CASE("weight_at: frozen values") {
  CHECK(weight_at({0.0, 0.0, 0.0}, 3.7) == 1.0);
  CHECK(weight_at({1.0, 2.0, 2.0}, 1.0) == doctest::Approx(std::sqrt(10.0)));
  CHECK(weight_at({5.0, -1.0, 0.25}, 0.0) == 1.0);
}

TEST_CASE("WeightSpec validates sigma") {
  CHECK_THROWS_AS(WeightSpec(0.0, 1.0), SigmaOutOfRange);
  CHECK_THROWS_AS(WeightSpec(1.5, 1.0), SigmaOutOfRange);
  const WeightSpec w(0.5, 2.0);
  CHECK(w({1.0, 2.0, 2.0}) == doctest::Approx(10.0));
}

TEST_CASE("weighted_lp_norm: zero field, constant volume, sup norm") {
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(1.0, 17);

  CHECK(weighted_lp_norm(ScalarField(g, ab), 2.0, 0.0).value == 0.0);

  // constant 1 on the box [-1,1]^3 with h = I: integral = volume 8, exactly
  // reproduced by trapezoid weights on a constant
  const ScalarField c = constant_field(g, ab, 1.0);
  CHECK(weighted_lp_norm(c, 2.0, 0.0).value ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));

  // p = infinity: plain sup of w^wexp |F|
  const NormReport sup = weighted_lp_norm(c, INFINITY, 0.0);
  CHECK(sup.value == doctest::Approx(1.0));
  CHECK(sup.quadrature == "sup");

  CHECK_THROWS_AS(weighted_lp_norm(c, 0.5, 0.0), POutOfRange);
}

TEST_CASE("weighted_lp_norm: O(h^2) refinement convergence on a bump") {
  const auto ab = shared(AlgebraSpec::u1(1));
  // reference value from a fine grid
  const Grid3 gref(1.0, 129);
  const double ref = weighted_lp_norm(centered_bump(gref, ab, 0.8), 2.0, 0.0).value;

  std::vector<double> errs;
  for (const int n : {17, 33, 65}) {
    const Grid3 g(1.0, n);
    errs.push_back(std::abs(
        weighted_lp_norm(centered_bump(g, ab, 0.8), 2.0, 0.0).value - ref));
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.7);
  CHECK(std::log2(errs[1] / errs[2]) > 1.7);
}

TEST_CASE("h1_inner_product: constants, sigma=1 reduction, symmetry") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 13);
  const VectorField A0(g, su2);

  const ScalarField c = constant_field(g, su2, 3.0);
  CHECK(h1_inner_product(A0, c, c, 0.5) == doctest::Approx(0.0));

  // sigma = 1: the weight collapses to 1 (unweighted Dirichlet product);
  // cross-check against a direct quadrature of the derivative fields
  const ScalarField u = centered_bump(g, su2, 0.6, 0);
  const ScalarField v = centered_bump(g, su2, 0.7, 1);
  const double got = h1_inner_product(A0, u, v, 1.0);
  double want = 0.0;
  const double h3 = std::pow(g.spacing(), 3);
  for (int k = 0; k < 3; ++k) {
    const ScalarField du = partial_derivative(u, k);
    const ScalarField dv = partial_derivative(v, k);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int kk = 0; kk < g.n; ++kk) {
          const double qi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
          const double qj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
          const double qk = (kk == 0 || kk == g.n - 1) ? 0.5 : 1.0;
          want += qi * qj * qk * h3 *
                  su2->inner_raw(du.at(i, j, kk), dv.at(i, j, kk));
        }
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-12));

  // symmetry on random bumps
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    ScalarField a(g, su2), b(g, su2);
    for (auto& x : a.data()) x = rng.normal();
    for (auto& x : b.data()) x = rng.normal();
    const double ab_ = h1_inner_product(A0, a, b, 0.5);
    const double ba_ = h1_inner_product(A0, b, a, 0.5);
    CHECK(std::abs(ab_ - ba_) <= 1e-12 * (1.0 + std::abs(ab_)));
  }
}

TEST_CASE("sobolev_norm: zero, n=1 equals the H1 norm, monotone in n") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 17);
  VectorField A(g, su2);
  A[0] = centered_bump(g, su2, 0.6, 2, 0.4);

  CHECK(sobolev_norm(A, ScalarField(g, su2), 2, 0.5).value == 0.0);

  const ScalarField phi = centered_bump(g, su2, 0.65, 0);
  const double n1 = sobolev_norm(A, phi, 1, 0.5).value;
  const double h1 = std::sqrt(h1_inner_product(A, phi, phi, 0.5));
  CHECK(n1 == doctest::Approx(h1).epsilon(1e-12));

  const double n2 = sobolev_norm(A, phi, 2, 0.5).value;
  CHECK(n1 <= n2);

  CHECK_THROWS_AS(sobolev_norm(A, phi, 9, 0.5), OrderTooLargeForGrid);
}

TEST_CASE("weighted_sup_norm: n=2 is the plain sup, homogeneity") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 17);
  const VectorField A0(g, su2);
  const ScalarField phi = centered_bump(g, su2, 0.7, 1);

  double sup = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) sup = std::max(sup, phi.node_norm(i, j, k));
  CHECK(weighted_sup_norm(A0, phi, 2, 0.5).value == doctest::Approx(sup));

  CHECK(weighted_sup_norm(A0, ScalarField(g, su2), 2, 0.5).value == 0.0);

  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const double c = rng.uniform(-3.0, 3.0);
    const double base = weighted_sup_norm(A0, phi, 3, 0.5).value;
    const double scaled = weighted_sup_norm(A0, c * phi, 3, 0.5).value;
    CHECK(scaled == doctest::Approx(std::abs(c) * base).epsilon(1e-12));
  }
}

TEST_CASE("norms: homogeneity and triangle inequality on random pairs") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 13);
  VectorField A(g, su2);
  A[1] = centered_bump(g, su2, 0.6, 0, 0.3);
  Rng rng(7);

  for (int t = 0; t < 4; ++t) {
    ScalarField u(g, su2), v(g, su2);
    for (auto& x : u.data()) x = rng.normal();
    for (auto& x : v.data()) x = rng.normal();
    const double c = rng.uniform(-2.0, 2.0);

    for (const double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const double nu = weighted_lp_norm(u, p, -0.5).value;
      const double nv = weighted_lp_norm(v, p, -0.5).value;
      const double nuv = weighted_lp_norm(u + v, p, -0.5).value;
      const double nc = weighted_lp_norm(c * u, p, -0.5).value;
      CHECK(nuv <= (nu + nv) * (1.0 + 1e-10));
      CHECK(nc == doctest::Approx(std::abs(c) * nu).epsilon(1e-10));
    }

    const double su = sobolev_norm(A, u, 2, 0.5).value;
    const double sv = sobolev_norm(A, v, 2, 0.5).value;
    const double suv = sobolev_norm(A, u + v, 2, 0.5).value;
    const double sc = sobolev_norm(A, c * u, 2, 0.5).value;
    CHECK(suv <= (su + sv) * (1.0 + 1e-10));
    CHECK(sc == doctest::Approx(std::abs(c) * su).epsilon(1e-10));
  }
}

TEST_CASE("sigma=1 collapses every weight: independent unweighted evaluation") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 17);
  VectorField A(g, su2);
  A[0] = centered_bump(g, su2, 0.55, 2, 0.5);
  const ScalarField phi = centered_bump(g, su2, 0.7, 0);

  // independent unweighted covariant Sobolev norm of order 2
  double sq = 0.0;
  const double h3 = std::pow(g.spacing(), 3);
  for (int p = 1; p <= 2; ++p) {
    const RealField t = derivative_tensor_norm(A, phi, p);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double qi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
          const double qj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
          const double qk = (k == 0 || k == g.n - 1) ? 0.5 : 1.0;
          sq += qi * qj * qk * h3 * t.at(i, j, k) * t.at(i, j, k);
        }
  }
  CHECK(sobolev_norm(A, phi, 2, 1.0).value ==
        doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
}

TEST_CASE("||F||_2 equals the zeroth Sobolev building block") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(1.0, 13);
  const ScalarField phi = centered_bump(g, su2, 0.7, 0);
  const VectorField A0(g, su2);

  const double lp = weighted_lp_norm(phi, 2.0, 0.0).value;
  const RealField zeroth = derivative_tensor_norm(A0, phi, 0);
  CHECK(lp == doctest::Approx(real_weighted_lp(zeroth, 2.0, 0.0, 0))
                  .epsilon(1e-13));
}
