#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "test_util.hpp"

using namespace covlap;
using covlap::testing::commutator_bound_sampling_oracle;
using covlap::testing::killing_contraction_oracle;
using covlap::testing::random_element;

namespace {

StructureConstants epsilon_tensor() {
  StructureConstants f = StructureConstants::zeros(3);
  f(0, 1, 2) = f(1, 2, 0) = f(2, 0, 1) = 1.0;
  f(1, 0, 2) = f(2, 1, 0) = f(0, 2, 1) = -1.0;
  return f;
}

}  // namespace

TEST_CASE("killing_metric: su(2) epsilon tensor gives 2*I") {
  const StructureConstants f = epsilon_tensor();
  const Eigen::MatrixXd oracle = killing_contraction_oracle(f);
  const Eigen::MatrixXd h = killing_metric(f);
  CHECK((h - oracle).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((h - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("killing_metric: abelian f gives the zero matrix") {
  const Eigen::MatrixXd h = killing_metric(StructureConstants::zeros(4));
  CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("killing_metric: su(3) Gell-Mann constants give 3*I") {
  const AlgebraSpec su3 = AlgebraSpec::su3();
  const Eigen::MatrixXd oracle =
      killing_contraction_oracle(su3.structure_constants());
  CHECK((su3.metric() - oracle).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((su3.metric() - 3.0 * Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("build_algebra: su(2) with omitted metric uses the Killing form") {
  const AlgebraSpec alg = AlgebraSpec::build(epsilon_tensor());
  CHECK(alg.dim() == 3);
  CHECK((alg.metric() - 2.0 * Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(alg.lambda_min() == doctest::Approx(2.0));
  CHECK(alg.lambda_max() == doctest::Approx(2.0));
  CHECK_FALSE(alg.abelian());
}

TEST_CASE("build_algebra: abelian d=2 with identity metric is valid") {
  const AlgebraSpec alg = AlgebraSpec::build(StructureConstants::zeros(2),
                                             Eigen::MatrixXd::Identity(2, 2));
  CHECK(alg.abelian());
  CHECK(alg.dim() == 2);
}

TEST_CASE("build_algebra: indefinite metric is rejected") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
  h(2, 2) = -1.0;
  CHECK_THROWS_AS(AlgebraSpec::build(epsilon_tensor(), h),
                  MetricNotPositiveDefinite);
}

TEST_CASE("build_algebra: antisymmetry violation is caught and named") {
  StructureConstants f = StructureConstants::zeros(3);
  f(0, 1, 2) = 1.0;
  f(1, 0, 2) = -0.5;  // should be -1
  try {
    AlgebraSpec::build(f, Eigen::MatrixXd::Identity(3, 3));
    FAIL("expected AntisymmetryViolation");
  } catch (const AntisymmetryViolation& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(1,2,3)") != std::string::npos);
    CHECK(msg.find("0.5") != std::string::npos);
  }
}

TEST_CASE("build_algebra: Jacobi violation is caught") {
  // epsilon tensor plus an extra f_{12}^1 entry breaks Jacobi at (1,2,3)
  StructureConstants f = epsilon_tensor();
  f(0, 1, 0) = 1.0;
  f(1, 0, 0) = -1.0;
  CHECK_THROWS_AS(AlgebraSpec::build(f), JacobiViolation);
}

TEST_CASE("build_algebra: non-invariant metric is rejected") {
  Eigen::MatrixXd h(3, 3);
  h.setZero();
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  h(2, 2) = 3.0;
  CHECK_THROWS_AS(AlgebraSpec::build(epsilon_tensor(), h), MetricNotInvariant);
}

TEST_CASE("bracket: su(2) basics and the cross-product oracle") {
  const AlgebraSpec su2 = AlgebraSpec::su2();
  const auto e1 = AlgebraElement::basis(3, 0);
  const auto e2 = AlgebraElement::basis(3, 1);

  const AlgebraElement b = bracket(su2, e1, e2);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == 1.0);

  // bracket(X, X) = 0
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const AlgebraElement x = random_element(su2, rng);
    CHECK(norm(su2, bracket(su2, x, x)) < 1e-14);
  }

  // frozen cross-product case: (1,2,0) x (0,1,1) = (2,-1,1)
  const AlgebraElement x(std::vector<double>{1.0, 2.0, 0.0});
  const AlgebraElement y(std::vector<double>{0.0, 1.0, 1.0});
  const AlgebraElement c = bracket(su2, x, y);
  CHECK(c[0] == doctest::Approx(2.0));
  CHECK(c[1] == doctest::Approx(-1.0));
  CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("bracket: dimension mismatch is rejected") {
  const AlgebraSpec su2 = AlgebraSpec::su2();
  CHECK_THROWS_AS(bracket(su2, AlgebraElement(2), AlgebraElement(3)),
                  DimensionMismatch);
}

TEST_CASE("inner and norm on su(2) with the Killing metric") {
  const AlgebraSpec su2 = AlgebraSpec::su2();
  const auto e1 = AlgebraElement::basis(3, 0);
  CHECK(inner(su2, e1, e1) == doctest::Approx(2.0));
  CHECK(norm(su2, e1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(inner(su2, AlgebraElement(3), e1) == 0.0);
}

TEST_CASE("ad-invariance (X,[Y,Z]) = -([Y,X],Z) over random triples") {
  for (const AlgebraSpec& alg :
       {AlgebraSpec::u1(3), AlgebraSpec::su2(), AlgebraSpec::su3()}) {
    Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
      const AlgebraElement x = random_element(alg, rng);
      const AlgebraElement y = random_element(alg, rng);
      const AlgebraElement z = random_element(alg, rng);
      const double lhs = inner(alg, x, bracket(alg, y, z));
      const double rhs = -inner(alg, bracket(alg, y, x), z);
      const double scale = 1.0 + norm(alg, x) * norm(alg, y) * norm(alg, z);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("bracket bilinearity, antisymmetry, and element-level Jacobi") {
  for (const AlgebraSpec& alg : {AlgebraSpec::su2(), AlgebraSpec::su3()}) {
    const double c = commutator_bound_constant(alg);
    Rng rng(13);
    for (int t = 0; t < 200; ++t) {
      const AlgebraElement x = random_element(alg, rng);
      const AlgebraElement y = random_element(alg, rng);
      const AlgebraElement z = random_element(alg, rng);

      AlgebraElement anti = bracket(alg, x, y);
      const AlgebraElement yx = bracket(alg, y, x);
      for (int a = 0; a < alg.dim(); ++a) anti[a] += yx[a];
      CHECK(norm(alg, anti) <= 1e-12 * norm(alg, x) * norm(alg, y) * c);

      AlgebraElement jac = bracket(alg, x, bracket(alg, y, z));
      const AlgebraElement j2 = bracket(alg, y, bracket(alg, z, x));
      const AlgebraElement j3 = bracket(alg, z, bracket(alg, x, y));
      for (int a = 0; a < alg.dim(); ++a) jac[a] += j2[a] + j3[a];
      const double scale = 1.0 + norm(alg, x) * norm(alg, y) * norm(alg, z);
      CHECK(norm(alg, jac) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("norm equivalence via extreme metric eigenvalues") {
  for (const AlgebraSpec& alg : {AlgebraSpec::su2(), AlgebraSpec::su3()}) {
    Rng rng(17);
    for (int t = 0; t < 1000; ++t) {
      const AlgebraElement x = random_element(alg, rng);
      double e2 = 0.0;
      for (int a = 0; a < alg.dim(); ++a) e2 += x[a] * x[a];
      const double n2 = inner(alg, x, x);
      CHECK(n2 >= alg.lambda_min() * e2 * (1.0 - 1e-12));
      CHECK(n2 <= alg.lambda_max() * e2 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("ad_matrix matches the bracket and is h-antisymmetric") {
  const AlgebraSpec su2 = AlgebraSpec::su2();
  const auto e1 = AlgebraElement::basis(3, 0);
  const auto e2 = AlgebraElement::basis(3, 1);
  const auto e3 = AlgebraElement::basis(3, 2);

  // columns of ad(e3) are bracket(e3, e_b): [e3,e1] = e2, [e3,e2] = -e1
  const Eigen::MatrixXd ad3 = ad_matrix(su2, e3);
  const AlgebraElement b31 = bracket(su2, e3, e1);
  const AlgebraElement b32 = bracket(su2, e3, e2);
  for (int c = 0; c < 3; ++c) {
    CHECK(ad3(c, 0) == doctest::Approx(b31[c]));
    CHECK(ad3(c, 1) == doctest::Approx(b32[c]));
    CHECK(ad3(c, 2) == doctest::Approx(0.0));
  }
  CHECK(b31[1] == doctest::Approx(1.0));   // [e3,e1] = +e2
  CHECK(b32[0] == doctest::Approx(-1.0));  // [e3,e2] = -e1

  CHECK(ad_matrix(su2, AlgebraElement(3)).cwiseAbs().maxCoeff() == 0.0);

  for (const AlgebraSpec& alg : {AlgebraSpec::su2(), AlgebraSpec::su3()}) {
    Rng rng(19);
    for (int t = 0; t < 50; ++t) {
      const AlgebraElement x = random_element(alg, rng);
      const AlgebraElement y = random_element(alg, rng);
      const Eigen::MatrixXd ad = ad_matrix(alg, x);

      Eigen::VectorXd yv(alg.dim());
      for (int a = 0; a < alg.dim(); ++a) yv[a] = y[a];
      const Eigen::VectorXd av = ad * yv;
      const AlgebraElement br = bracket(alg, x, y);
      for (int a = 0; a < alg.dim(); ++a)
        CHECK(av[a] == doctest::Approx(br[a]).epsilon(1e-12));

      const Eigen::MatrixXd res =
          alg.metric().transpose() * ad + ad.transpose() * alg.metric();
      CHECK(res.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + norm(alg, x)));
    }
  }
}

TEST_CASE("commutator_bound_constant: su(2) sharp value 1/sqrt(2)") {
  const double c = commutator_bound_constant(AlgebraSpec::su2());
  CHECK(std::abs(c - 1.0 / std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("commutator_bound_constant: abelian returns zero") {
  CHECK(commutator_bound_constant(AlgebraSpec::u1(4)) == 0.0);
}

TEST_CASE("commutator_bound_constant: su(3) matches the sampling oracle") {
  const AlgebraSpec su3 = AlgebraSpec::su3();
  const double opt = commutator_bound_constant(su3);
  const double oracle = commutator_bound_sampling_oracle(su3, 100000);
  CHECK(std::abs(opt - oracle) < 1e-3);
}

TEST_CASE("commutator bound has no violations over 1e5 random pairs") {
  for (const AlgebraSpec& alg :
       {AlgebraSpec::u1(3), AlgebraSpec::su2(), AlgebraSpec::su3()}) {
    const double c = commutator_bound_constant(alg);
    Rng rng(23);
    int violations = 0;
    for (int t = 0; t < 100000; ++t) {
      const AlgebraElement x = random_element(alg, rng);
      const AlgebraElement y = random_element(alg, rng);
      if (norm(alg, bracket(alg, x, y)) >
          c * norm(alg, x) * norm(alg, y) * (1.0 + 1e-12))
        ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("algebra definition file round trip") {
  const std::string path = "su2_test.alg";
  {
    std::ofstream out(path);
    out << "# su(2), Killing metric implied\n";
    out << "dim 3\n";
    out << "1 2 3 1\n2 1 3 -1\n";
    out << "2 3 1 1\n3 2 1 -1\n";
    out << "3 1 2 1\n1 3 2 -1\n";
  }
  const AlgebraSpec alg = AlgebraSpec::from_file(path);
  CHECK(alg.dim() == 3);
  CHECK((alg.metric() - 2.0 * Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  const std::string path2 = "u1_test.alg";
  {
    std::ofstream out(path2);
    out << "dim 2\nh 1 1 1\nh 2 2 1\n";
  }
  const AlgebraSpec ab = AlgebraSpec::from_file(path2);
  CHECK(ab.abelian());
  CHECK(ab.metric()(0, 0) == 1.0);

  CHECK_THROWS_AS(AlgebraSpec::from_file("does_not_exist.alg"), IoError);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("by_name resolves the built-ins") {
  CHECK(AlgebraSpec::by_name("su2").dim() == 3);
  CHECK(AlgebraSpec::by_name("su3").dim() == 8);
  CHECK(AlgebraSpec::by_name("u1^5").dim() == 5);
  CHECK_THROWS_AS(AlgebraSpec::by_name("so8"), ConfigError);
}
