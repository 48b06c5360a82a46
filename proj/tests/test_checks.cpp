#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "covlap/checks.hpp"
#include "test_util.hpp"

using namespace covlap;
using covlap::testing::shared;

namespace {

TestFamily small_family(const Grid3& g, const AlgebraPtr& alg, int samples,
                        std::uint64_t seed = 2024) {
  TestFamily fam;
  fam.grid = g;
  fam.alg = alg;
  fam.seed = seed;
  fam.samples = samples;
  return fam;
}

}  // namespace

TEST_CASE("gurka_opic_condition: sigma=1, p=2 gives exactly 1") {
  const double v = gurka_opic_condition(1.0, 2.0);
  CHECK(std::abs(v - 1.0) <= 1e-6);
}

TEST_CASE("gurka_opic_condition: sigma=0 is divergent (expected negative)") {
  const double v = gurka_opic_condition(0.0, 2.0);
  CHECK(std::isinf(v));
}

TEST_CASE("gurka_opic_condition: sigma=0.5 finite and stable under refinement") {
  GurkaOpicOptions coarse;
  GurkaOpicOptions fine;
  fine.sweep_points = 900;
  fine.quad_tol = 1e-13;
  const double a = gurka_opic_condition(0.5, 2.0, coarse);
  const double b = gurka_opic_condition(0.5, 2.0, fine);
  CHECK(std::isfinite(a));
  CHECK(std::abs(a - b) <= 1e-4);
}

TEST_CASE("gurka_opic_condition: guards") {
  CHECK_THROWS_AS(gurka_opic_condition(0.5, 1.0), PNotGreaterThanOne);
  CHECK_THROWS_AS(gurka_opic_condition(-0.1, 2.0), SigmaOutOfRange);
}

TEST_CASE("check_poincare: Hardy bound for centered bumps at sigma=1") {
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(3.0, 25);
  TestFamily fam = small_family(g, ab, 12);
  fam.centered = true;
  fam.min_bumps = fam.max_bumps = 1;
  const VectorField A0(g, ab);

  const CheckReport rep = check_poincare(A0, 1.0, fam);
  CHECK(rep.passed);
  // classical 3d Hardy constant 2 bounds the ratio since w >= |x|
  CHECK(rep.empirical_constant <= 2.0 + 0.05);
  CHECK(rep.empirical_constant > 0.0);
}

TEST_CASE("check_poincare: metric isometry makes abelian and su(2) agree") {
  const Grid3 g(3.0, 17);
  const auto ab = shared(AlgebraSpec::u1(1));
  const auto su2 = shared(AlgebraSpec::su2());

  // same seed => same bump geometry; the su(2) field points along e1 only
  // when d=3 directions come out as unit vectors; instead compare via
  // single-component profiles built by hand
  AnalyticField spec;
  spec.terms.push_back({Bump{{0.3, -0.2, 0.1}, 0.9, 1.3},
                        AlgebraElement(std::vector<double>{1.0})});
  const ScalarField phi_ab = spec.materialize(g, ab);
  AnalyticField spec2;
  spec2.terms.push_back(
      {Bump{{0.3, -0.2, 0.1}, 0.9, 1.3}, AlgebraElement::basis(3, 0)});
  const ScalarField phi_su2 = spec2.materialize(g, su2);

  const double sigma = 0.5;
  const VectorField a0_ab(g, ab), a0_su2(g, su2);
  const double lhs_ab =
      real_weighted_lp(pointwise_norm(phi_ab), 2.0, -(3.0 - sigma) / 2.0, 0);
  const double rhs_ab =
      std::sqrt(h1_inner_product(a0_ab, phi_ab, phi_ab, sigma));
  const double lhs_su2 =
      real_weighted_lp(pointwise_norm(phi_su2), 2.0, -(3.0 - sigma) / 2.0, 0);
  const double rhs_su2 =
      std::sqrt(h1_inner_product(a0_su2, phi_su2, phi_su2, sigma));
  CHECK(lhs_ab / rhs_ab == doctest::Approx(lhs_su2 / rhs_su2).epsilon(1e-12));
}

TEST_CASE("check_poincare: finite ratios at sigma=0.5 over 100 samples") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 25);
  const TestFamily fam = small_family(g, su2, 100);
  const VectorField A0(g, su2);
  const CheckReport rep = check_poincare(A0, 0.5, fam);
  CHECK(std::isfinite(rep.empirical_constant));
  CHECK(rep.empirical_constant > 0.0);
  CHECK(rep.passed);
}

TEST_CASE("check_coercivity: sigma=1 drift contribution is exactly zero") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 17);
  VectorField A(g, su2);
  A[0] = sample_bump(g, su2, {0.2, 0.0, 0.0}, 1.0, AlgebraElement::basis(3, 2));
  const TestFamily fam = small_family(g, su2, 20);

  const CheckReport rep = check_coercivity(A, 1.0, fam);
  CHECK(rep.passed);
  CHECK(rep.details.at("max_abs_drift_contribution") == 0.0);
  CHECK(rep.details.at("min_margin_over_scale") == 0.0);
}

TEST_CASE("check_coercivity: non-negative margins at sigma in (0,1)") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 17);
  VectorField A(g, su2);
  A[1] = sample_bump(g, su2, {0.0, -0.2, 0.0}, 1.1, AlgebraElement::basis(3, 0));
  const TestFamily fam = small_family(g, su2, 100);

  for (const double sigma : {0.25, 0.5, 0.75}) {
    const CheckReport rep = check_coercivity(A, sigma, fam);
    CHECK(rep.passed);
    CHECK(rep.details.at("min_margin_over_scale") >= -1e-8);
  }
}

TEST_CASE("check_coercivity: margin sign is scale invariant") {
  // quadratic homogeneity: scaling Phi -> c Phi scales the margin by c^2
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(3.0, 17);
  const VectorField A0(g, ab);
  const ScalarField phi = sample_bump(g, ab, {0.4, 0.0, 0.0}, 1.0,
                                      AlgebraElement(std::vector<double>{1.0}));
  const double sigma = 0.5;
  const double m1 = -(1.0 - sigma) * weak_drift_term(A0, phi, phi, sigma);
  const ScalarField phic = 3.0 * phi;
  const double m2 = -(1.0 - sigma) * weak_drift_term(A0, phic, phic, sigma);
  CHECK(m2 == doctest::Approx(9.0 * m1).epsilon(1e-10));
  CHECK((m1 >= 0.0) == (m2 >= 0.0));
}

TEST_CASE("check_boundedness: Schwarz at sigma=1, Poincare-corrected bound") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 13);
  VectorField A(g, su2);
  A[0] = sample_bump(g, su2, {0.2, 0.0, 0.0}, 0.9, AlgebraElement::basis(3, 1));
  const TestFamily fam = small_family(g, su2, 10);

  const CheckReport r1 = check_boundedness(A, 1.0, fam);
  CHECK(r1.passed);
  CHECK(r1.empirical_constant <= 1.0 + 1e-8);
  // the diagonal pair realizes the coercivity ratio >= 1
  CHECK(r1.empirical_constant >= 1.0 - 1e-10);

  const CheckReport r2 = check_boundedness(A, 0.5, fam);
  CHECK(r2.passed);
  CHECK(r2.empirical_constant <=
        1.0 + r2.details.at("poincare_constant") * 0.5 + 1e-6);

  TestFamily tiny = fam;
  tiny.samples = 1;
  CHECK_THROWS_AS(check_boundedness(A, 0.5, tiny), EmptyFamily);
}

TEST_CASE("check_apriori: abelian A=0 reduces to the classical estimate") {
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(3.0, 25);
  const VectorField A0(g, ab);
  const TestFamily fam = small_family(g, ab, 10);

  const CheckReport rep = check_apriori(A0, 0.5, 2, fam);
  CHECK(rep.passed);
  CHECK(std::isfinite(rep.empirical_constant));
  // zero potential has zero curvature
  CHECK(rep.details.at("curvature_sup_p0") == 0.0);
  CHECK(rep.details.at("curvature_div_l3_p0") == 0.0);
}

TEST_CASE("check_apriori: constant abelian potential has zero curvature") {
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(3.0, 25);
  VectorField A(g, ab);
  for (int k = 0; k < 3; ++k)
    for (auto& v : A[k].data()) v = 0.3 + 0.1 * k;
  const TestFamily fam = small_family(g, ab, 6);

  const CheckReport rep = check_apriori(A, 0.5, 2, fam);
  CHECK(rep.details.at("curvature_sup_p0") <= 1e-13);
}

TEST_CASE("check_apriori: su(2) bump potential, n=2, sigma=0.5") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 25);
  VectorField A(g, su2);
  A[0] = sample_bump(g, su2, {0.3, 0.0, 0.0}, 1.2, AlgebraElement::basis(3, 2));
  A[1] = sample_bump(g, su2, {0.0, 0.3, 0.0}, 1.0, AlgebraElement::basis(3, 0));
  const TestFamily fam = small_family(g, su2, 10);

  const CheckReport rep = check_apriori(A, 0.5, 2, fam);
  CHECK(rep.passed);
  CHECK(std::isfinite(rep.empirical_constant));
  CHECK(rep.details.at("curvature_sup_p0") > 0.0);

  CHECK_THROWS_AS(check_apriori(A, 0.5, 5, fam), OrderUnsupported);
}

TEST_CASE("check_interpolation: guards and the three inequalities") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 25);
  const VectorField A0(g, su2);
  const TestFamily fam = small_family(g, su2, 8);

  CHECK_THROWS_AS(check_interpolation(A0, 0.5, 2, 3, 1.9, fam),
                  ExponentOutOfRange);
  CHECK_THROWS_AS(check_interpolation(A0, 0.5, 2, 1, 3.0, fam),
                  ExponentOutOfRange);
  CHECK_THROWS_AS(check_interpolation(A0, 0.5, 2, 4, 4.0, fam),
                  ExponentOutOfRange);

  // gns2 at n=2: the (n-2) term vanishes; finite constant expected
  const CheckReport r2 = check_interpolation(A0, 0.5, 2, 2, 0.0, fam);
  CHECK(r2.passed);
  CHECK(std::isfinite(r2.empirical_constant));

  // gns1 with q=4 over bumps
  TestFamily fifty = fam;
  fifty.samples = 50;
  const CheckReport r1 = check_interpolation(A0, 0.5, 2, 1, 4.0, fifty);
  CHECK(r1.passed);
  CHECK(std::isfinite(r1.empirical_constant));

  // gns3 with q in range
  const CheckReport r3 = check_interpolation(A0, 0.5, 2, 3, 4.0, fam);
  CHECK(r3.passed);
  CHECK(std::isfinite(r3.empirical_constant));
}

TEST_CASE("check_embedding: spike sequence stays bounded; homogeneity") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 33);
  const VectorField A0(g, su2);

  // shrinking radii: the ratio max over the family must stay bounded
  for (const double radius_frac : {0.5 / 3.0, 0.25 / 3.0, 0.125 / 3.0}) {
    TestFamily fam = small_family(g, su2, 4);
    fam.centered = true;
    fam.min_bumps = fam.max_bumps = 1;
    fam.min_radius_frac = radius_frac * 0.999;
    fam.max_radius_frac = radius_frac;
    const CheckReport rep = check_embedding(A0, 0.5, 2, fam);
    CHECK(std::isfinite(rep.empirical_constant));
    CHECK(rep.empirical_constant < 50.0);
  }

  // sigma variants on the same family are finite and recorded
  const TestFamily fam = small_family(g, su2, 8);
  const CheckReport r1 = check_embedding(A0, 1.0, 2, fam);
  const CheckReport r05 = check_embedding(A0, 0.5, 2, fam);
  CHECK(r1.passed);
  CHECK(r05.passed);
  CHECK(std::isfinite(r1.empirical_constant));
  CHECK(std::isfinite(r05.empirical_constant));
}

TEST_CASE("check_embedding: constant multiples leave the ratio invariant") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 25);
  const VectorField A0(g, su2);
  const TestFamily fam = small_family(g, su2, 3);
  const ScalarField phi = fam.sample(1);

  const double lhs1 = weighted_sup_norm(A0, phi, 2, 0.5).value;
  const double rhs1 = sobolev_norm(A0, phi, 2, 0.5).value;
  const ScalarField phic = -2.5 * phi;
  const double lhs2 = weighted_sup_norm(A0, phic, 2, 0.5).value;
  const double rhs2 = sobolev_norm(A0, phic, 2, 0.5).value;
  CHECK(lhs1 / rhs1 == doctest::Approx(lhs2 / rhs2).epsilon(1e-12));
}

TEST_CASE("ginibre_velo_check: zero field, large-delta slack, su(2) bump") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(2.0, 17);

  CHECK_THROWS_AS(ginibre_velo_check(ScalarField(g, su2), 0.0),
                  DeltaNonpositive);

  const CheckReport zero = ginibre_velo_check(ScalarField(g, su2), 0.5);
  CHECK(zero.passed);
  CHECK(zero.empirical_constant == 0.0);

  const ScalarField bump =
      sample_bump(g, su2, {0.2, -0.1, 0.0}, 1.0, AlgebraElement::basis(3, 0));

  const CheckReport r = ginibre_velo_check(bump, 0.1);
  CHECK(r.passed);

  // larger delta shrinks the derivative of u_delta: slack grows monotonically
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (const double delta : {0.1, 1.0, 10.0}) {
    const CheckReport rep = ginibre_velo_check(bump, delta);
    CHECK(rep.passed);
    CHECK(rep.empirical_constant < prev_ratio);
    prev_ratio = rep.empirical_constant;
  }
}

TEST_CASE("mollified_curvature_convergence: constant potential has zero gap") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(2.0, 17);
  VectorField A(g, su2);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        A[0].value(i, j, k, 0) = 0.7;
        A[1].value(i, j, k, 1) = 0.4;
      }

  const CheckReport rep =
      mollified_curvature_convergence(A, 0, 0.5, {0.4, 0.2});
  CHECK(rep.passed);
  CHECK(rep.details.at("gap_0") <= 1e-12 * (1.0 + rep.details.at("target")));
  CHECK(rep.details.at("target") > 0.0);  // noncommuting constants curve
}

TEST_CASE("mollified_curvature_convergence: abelian linear potential") {
  const auto ab = shared(AlgebraSpec::u1(1));
  const Grid3 g(2.0, 17);
  VectorField A(g, ab);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        A[0].value(i, j, k, 0) = g.coord(j);  // A_1 = x_2

  const CheckReport rep =
      mollified_curvature_convergence(A, 0, 0.5, {0.4, 0.2});
  CHECK(rep.passed);
  // curvature is the constant field e1; mollification keeps it on K
  CHECK(rep.details.at("gap_1") <= 1e-10 * (1.0 + rep.details.at("target")));
}

TEST_CASE("mollified_curvature_convergence: su(2) bump, shrinking deltas") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(2.0, 21);
  VectorField A(g, su2);
  A[0] = sample_bump(g, su2, {0.2, 0.0, 0.0}, 0.9, AlgebraElement::basis(3, 2));
  A[1] = sample_bump(g, su2, {0.0, 0.2, 0.0}, 0.8, AlgebraElement::basis(3, 0));

  const CheckReport rep =
      mollified_curvature_convergence(A, 0, 0.5, {0.4, 0.2, 0.1});
  CHECK(rep.passed);
  CHECK(rep.details.at("gap_0") >= rep.details.at("gap_2") - 1e-12);

  // p = 1 variant also runs
  const CheckReport rep1 =
      mollified_curvature_convergence(A, 1, 0.5, {0.4, 0.2, 0.1});
  CHECK(std::isfinite(rep1.empirical_constant));

  CHECK_THROWS_AS(mollified_curvature_convergence(A, 2, 0.5, {0.4}),
                  OrderUnsupported);
  CHECK_THROWS_AS(mollified_curvature_convergence(A, 0, 0.5, {}),
                  DeltaListEmpty);
  CHECK_THROWS_AS(mollified_curvature_convergence(A, 0, 0.5, {0.1, 0.4}),
                  ConfigError);
}

TEST_CASE("check reports are bit-reproducible from the same seed") {
  const auto su2 = shared(AlgebraSpec::su2());
  const Grid3 g(3.0, 13);
  VectorField A(g, su2);
  A[0] = sample_bump(g, su2, {0.2, 0.0, 0.0}, 0.9, AlgebraElement::basis(3, 1));
  const TestFamily fam = small_family(g, su2, 8, 555);

  const CheckReport a = check_poincare(A, 0.5, fam);
  const CheckReport b = check_poincare(A, 0.5, fam);
  CHECK(a.empirical_constant == b.empirical_constant);
  CHECK(a.lhs == b.lhs);
  CHECK(a.rhs == b.rhs);

  TestFamily fam2 = fam;
  fam2.seed = 556;
  const CheckReport c = check_poincare(A, 0.5, fam2);
  CHECK(a.empirical_constant != c.empirical_constant);
}
