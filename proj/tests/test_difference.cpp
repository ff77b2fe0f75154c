#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bicalc/difference.hpp"
#include "bicalc/exprlang.hpp"

using namespace bicalc;

TEST_CASE("delta2 of x1*x2 is the area") {
  auto f = expr::field2("x1*x2");
  CHECK(delta2(f, {1, 2}, {3, 5}) == 6.0);   // (3-1)(5-2)
  CHECK(delta2(f, {0, 0}, {1, 1}) == 1.0);
  CHECK(delta2(f, {3, 5}, {1, 2}) == 6.0);   // orientation-free corners
}

TEST_CASE("delta2 kills separable parts") {
  auto f = expr::field2("x1^2 + sin(x2) + 7");
  CHECK(std::abs(delta2(f, {-1.3, 0.4}, {2.1, 1.9})) < 1e-14);
}

TEST_CASE("delta_n generalizes: n=2 agrees bit for bit") {
  auto f2 = expr::field2("exp(x1*x2) + x1^3*x2");
  auto fn = expr::fieldn("exp(x1*x2) + x1^3*x2", 2);
  for (double a1 : {-1.0, 0.3})
    for (double b2 : {0.9, 2.0}) {
      const double d2 = delta2(f2, {a1, -0.7}, {1.1, b2});
      const double dn = delta_n(fn, {a1, -0.7}, {1.1, b2});
      CHECK(d2 == dn);
    }
}

TEST_CASE("delta_n with n=3 matches the eight-corner formula") {
  auto f = expr::fieldn("x1*x2*x3", 3);
  // Delta of the product over [0,1]^3 is 1
  CHECK(delta_n(f, {0, 0, 0}, {1, 1, 1}) == 1.0);
  auto g = expr::fieldn("x1*x2 + x2*x3 + x1*x3", 3);
  // every term misses one coordinate, so the triple difference vanishes
  CHECK(delta_n(g, {0.2, -1.0, 0.5}, {1.4, 2.2, 3.0}) == 0.0);
}

TEST_CASE("mean slope and degenerate rejection") {
  auto f = expr::field2("x1*x2");
  CHECK(mean_slope(f, {0, 0}, {2, 3}) == 1.0);
  CHECK_THROWS_AS(mean_slope(f, {1, 0}, {1, 3}), UsageError);
}

TEST_CASE("double-constant detection and split") {
  Interval2 box{{-1, -1}, {1, 1}};
  auto sep = expr::field2("x1^3 + exp(x2)", box);
  auto not_sep = expr::field2("x1*x2", box);
  CHECK(is_double_constant(sep, box, 7, 1e-10));
  CHECK_FALSE(is_double_constant(not_sep, box, 7, 1e-10));

  const SplitDecomposition d = split_double_constant(sep, box, {0.0, 0.0});
  for (double x1 : {-0.9, 0.0, 0.7})
    for (double x2 : {-0.5, 0.2, 1.0})
      CHECK(sep.at({x1, x2}) ==
            Catch::Approx(d.g(x1) + d.h(x2)).margin(1e-12));
}

TEST_CASE("split works with a discontinuous axis part") {
  // g(x1) + h(x2) where h jumps at 0: still double constant
  Interval2 box{{-1, -1}, {1, 1}};
  ScalarField2 f = ScalarField2::from(
      [](double x1, double x2) {
        return x1 * x1 + (x2 > 0.0 ? 3.0 + x2 : x2);
      },
      box);
  CHECK(is_double_constant(f, box, 9, 1e-12));
  const SplitDecomposition d = split_double_constant(f, box, {-1.0, -1.0});
  CHECK(f.at({0.5, 0.5}) == Catch::Approx(d.g(0.5) + d.h(0.5)).margin(1e-12));
}

TEST_CASE("continuity probe passes on smooth fields") {
  auto f = expr::field2("sin(x1)*sin(x2)");
  const ContinuityReport r = continuity_probe(f, {0.5, 0.5});
  CHECK(r.verdict == ContinuityReport::Verdict::Pass);
}

TEST_CASE("continuity probe passes on separable discontinuous fields") {
  ScalarField2 f = ScalarField2::from([](double x1, double x2) {
    return std::floor(x1) + (x2 > 0.25 ? 10.0 : 0.0);
  });
  // heavily discontinuous as an ordinary function, yet double continuous
  const ContinuityReport r = continuity_probe(f, {0.25, 0.25});
  CHECK(r.verdict == ContinuityReport::Verdict::Pass);
}

TEST_CASE("continuity probe fails where the double difference persists") {
  // f = x1 * sgn(x2): Delta over [(a1,0),(x1,x2)] stays ~ x1 as x2 -> 0+
  ScalarField2 f = ScalarField2::from([](double x1, double x2) {
    return x1 * (x2 > 0.0 ? 1.0 : -1.0);
  });
  const ContinuityReport r = continuity_probe(f, {0.0, 0.0});
  CHECK(r.verdict == ContinuityReport::Verdict::Fail);
}

TEST_CASE("axes-zero quadratic is not double continuous at the origin") {
  // x1^2 + x2^2 off the axes, 0 on them: for fixed x1 the family
  // Delta_(0,0)^(x1,x2) tends to x1^2, not 0.
  ScalarField2 f = ScalarField2::from([](double x1, double x2) {
    if (x1 == 0.0 || x2 == 0.0) return 0.0;
    return x1 * x1 + x2 * x2;
  });
  const ContinuityReport r = continuity_probe(f, {0.0, 0.0});
  CHECK(r.verdict == ContinuityReport::Verdict::Fail);
}

TEST_CASE("global probe on a smooth field") {
  Interval2 box{{0, 0}, {1, 1}};
  auto f = expr::field2("x1*x2 + sin(x1+x2)", box);
  const ContinuityReport r = global_continuity_probe(f, box, 4, 16, 1e-5);
  CHECK(r.verdict == ContinuityReport::Verdict::Pass);
}

TEST_CASE("delta map field") {
  auto f = expr::field2("x1^2*x2");
  const ScalarField2 m = delta_map_field(f, {0.5, 0.25});
  const Point2 x{0.3, 0.8};
  CHECK(m.at(x) == delta2(f, x, {x.x1 + 0.5, x.x2 + 0.25}));
}
