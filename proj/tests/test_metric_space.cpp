#include <doctest.h>

#include <cmath>
#include <numbers>

#include "roughmetrics/constructions.hpp"
#include "roughmetrics/error.hpp"
#include "roughmetrics/metric_space.hpp"
#include "support/oracles.hpp"

using namespace roughmetrics;

namespace {

FiniteMetricSpace triangle(double ab, double ac, double bc) {
  Eigen::MatrixXd d(3, 3);
  d << 0, ab, ac, ab, 0, bc, ac, bc, 0;
  return FiniteMetricSpace(d);
}

FiniteMetricSpace line(std::vector<double> xs) {
  return FiniteMetricSpace(oracle::to_eigen(oracle::line(xs)));
}

} // namespace

TEST_CASE("validate accepts the equilateral triangle") {
  const ValidationReport r = validate(triangle(1, 1, 1));
  CHECK(r.passed);
  CHECK(r.violations.empty());
}

TEST_CASE("validate reports the triangle violation of (1,1,3)") {
  // d(a,b)=1, d(a,c)=1, d(b,c)=3
  const ValidationReport r = validate(triangle(1, 1, 3));
  REQUIRE_FALSE(r.passed);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == ViolationKind::triangle);
  CHECK(r.violations[0].residual == doctest::Approx(1.0));
  CHECK(r.violations[0].where.i == 1);
  CHECK(r.violations[0].where.j == 2);
  CHECK(r.violations[0].where.k == 0);
}

TEST_CASE("validate flags asymmetry, non-zero diagonal and coincident points") {
  Eigen::MatrixXd d(3, 3);
  d << 0.5, 1, 1, 1.2, 0, 0, 1, 0, 0;
  const ValidationReport r = validate(d);
  CHECK_FALSE(r.passed);
  bool identity = false, symmetry = false, positivity = false;
  for (const auto& v : r.violations) {
    identity |= v.kind == ViolationKind::identity;
    symmetry |= v.kind == ViolationKind::symmetry;
    positivity |= v.kind == ViolationKind::positivity;
  }
  CHECK(identity);
  CHECK(symmetry);
  CHECK(positivity);
}

TEST_CASE("structural errors are distinct from metric violations") {
  CHECK_THROWS_AS(FiniteMetricSpace(Eigen::MatrixXd::Zero(2, 3)), StructuralError);
  Eigen::MatrixXd neg(2, 2);
  neg << 0, -1, -1, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{neg}, StructuralError);
  Eigen::MatrixXd nan(2, 2);
  nan << 0, NAN, NAN, 0;
  CHECK_THROWS_AS(FiniteMetricSpace{nan}, StructuralError);
  CHECK_THROWS_AS(require_metric(triangle(1, 1, 3)), MetricViolation);
}

TEST_CASE("validate is order independent") {
  oracle::Rng rng(7);
  Eigen::MatrixXd d = oracle::to_eigen(oracle::euclidean(oracle::random_points(rng, 6, 2)));
  d(0, 5) = d(5, 0) = 5.0; // too long
  const auto base = validate(d);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.indices() << 3, 5, 0, 1, 4, 2;
  const Eigen::MatrixXd p = perm * d * perm.transpose();
  const auto permuted = validate(p);
  CHECK(base.passed == permuted.passed);
  CHECK(base.violations.size() == permuted.violations.size());
  CHECK(validate(d).violations.size() == base.violations.size());
}

TEST_CASE("snowflake of a collinear triple") {
  const FiniteMetricSpace s = line({0, 1, 2});
  CHECK(snowflake(s, 1.0).matrix() == s.matrix());
  const FiniteMetricSpace h = snowflake(s, 0.5);
  CHECK(h(0, 1) == doctest::Approx(1.0));
  CHECK(h(1, 2) == doctest::Approx(1.0));
  CHECK(h(0, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(validate(h).passed);
  CHECK(h.kind() == "snowflake");
}

TEST_CASE("snowflake exponents compose") {
  oracle::Rng rng(11);
  const FiniteMetricSpace s = oracle::random_space(rng, 7);
  const FiniteMetricSpace twice = snowflake(snowflake(s, 0.5), 0.5);
  const FiniteMetricSpace once = snowflake(s, 0.25);
  CHECK(twice.matrix() == once.matrix());
  CHECK_THROWS_AS(snowflake(s, 0.0), DomainError);
  CHECK_THROWS_AS(snowflake(s, 1.5), DomainError);
}

TEST_CASE("snowflakes of random spaces are metrics at zero tolerance") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteMetricSpace s = oracle::random_space(rng, 8);
    for (double a : {0.2, 0.5, 0.9})
      CHECK(validate(snowflake(s, a), 0.0).passed);
  }
}

TEST_CASE("max_lp_exponent examples") {
  CHECK(max_lp_exponent(line({0, 1, 2})).exponent == doctest::Approx(1.0));
  CHECK(std::isinf(max_lp_exponent(triangle(2, 2, 1)).exponent));
  CHECK(max_lp_exponent(snowflake(line({0, 1, 2}), 0.5)).exponent == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("max_lp_exponent of a snowflaked line is at least 1/alpha") {
  const FiniteMetricSpace s = line({0, 0.3, 1, 1.7, 3});
  for (double a : {0.3, 0.5, 0.8}) {
    const double p = max_lp_exponent(snowflake(s, a)).exponent;
    CHECK(p >= 1.0 / a - 1e-9);
    // the L^p condition at p holds on every triple
    const auto d = snowflake(s, a).matrix();
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        for (int z = 0; z < 5; ++z)
          if (x != y && y != z && x != z)
            CHECK(std::pow(d(x, y), p) <= (std::pow(d(x, z), p) + std::pow(d(z, y), p)) * (1 + 1e-9));
  }
}

TEST_CASE("comparison angles") {
  const double pi = std::numbers::pi;
  const auto eq = comparison_angles(triangle(1, 1, 1), 0, 1, 2);
  for (double a : eq.at)
    CHECK(a == doctest::Approx(pi / 3));
  CHECK_FALSE(eq.degenerate);

  // apex 0 with legs sqrt(2)/2 and base 1 between points 1 and 2
  const double leg = std::sqrt(2.0) / 2.0;
  const auto right = comparison_angles(triangle(leg, leg, 1.0), 0, 1, 2);
  CHECK(right.at[0] == doctest::Approx(pi / 2));

  const auto flat = comparison_angles(triangle(1, 2, 1), 0, 1, 2);
  CHECK(flat.degenerate);
  CHECK(flat.at[1] == doctest::Approx(pi));
  CHECK(flat.at[0] == 0.0);
  CHECK(flat.at[2] == 0.0);
}

TEST_CASE("comparison angles sum to pi") {
  oracle::Rng rng(3);
  const FiniteMetricSpace s = oracle::random_space(rng, 6);
  for (Index i = 0; i < 6; ++i)
    for (Index j = i + 1; j < 6; ++j)
      for (Index k = j + 1; k < 6; ++k) {
        const auto a = comparison_angles(s, i, j, k);
        CHECK(a.at[0] + a.at[1] + a.at[2] == doctest::Approx(std::numbers::pi).epsilon(1e-9));
      }
}

TEST_CASE("doubling probe") {
  CHECK(doubling_probe(line({0, 1}), std::vector<double>{1.0, 5.0})[1].count <= 2);

  // k/16 grid: greedy picks 0, 1/2, 1
  std::vector<double> sixteenths;
  for (int k = 0; k <= 16; ++k)
    sixteenths.push_back(k / 16.0);
  CHECK(doubling_probe(line(sixteenths), std::vector<double>{1.0})[0].count == 3);

  // 16 evenly spaced points including both endpoints: 0 then 8/15
  std::vector<double> grid;
  for (int k = 0; k < 16; ++k)
    grid.push_back(k / 15.0);
  CHECK(doubling_probe(line(grid), std::vector<double>{1.0})[0].count == 2);

  CHECK_THROWS_AS(doubling_probe(line({0, 1}), std::vector<double>{}), DomainError);
}

TEST_CASE("doubling probe on Laakso levels at the diameter") {
  for (int m = 1; m <= 4; ++m) {
    const FiniteMetricSpace f = laakso_level(m);
    const double diam = f.matrix().maxCoeff();
    const Index count = doubling_probe(f, std::vector<double>{diam})[0].count;
    CHECK(count >= 2);
    CHECK(count <= f.size());
  }
}

TEST_CASE("subspace and coordinates") {
  Eigen::MatrixXd c(3, 2);
  c << 0, 0, 3, 4, 1, 1;
  const auto e = FiniteMetricSpace::from_coordinates(c, Norm::euclidean);
  const auto t = FiniteMetricSpace::from_coordinates(c, Norm::taxicab);
  CHECK(e(0, 1) == doctest::Approx(5.0));
  CHECK(t(0, 1) == doctest::Approx(7.0));
  CHECK(e.kind() == "euclidean");
  CHECK(t.kind() == "taxicab");
  const std::vector<Index> idx{2, 0};
  const auto sub = e.subspace(idx);
  CHECK(sub.size() == 2);
  CHECK(sub(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(sub.labels()[0] == "2");
}
