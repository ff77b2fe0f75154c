#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bicalc/derivative.hpp"
#include "bicalc/exprlang.hpp"

using namespace bicalc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("double derivative of smooth products") {
  // f = sin(x1) sin(x2): f' = cos(x1) cos(x2)
  auto f = expr::field2("sin(x1)*sin(x2)");
  const DerivEstimate d = double_derivative(f, {1.0, 1.0});
  REQUIRE(d.report.verdict == Verdict::Converged);
  CHECK(*d.report.value ==
        Catch::Approx(std::cos(1.0) * std::cos(1.0)).margin(1e-6));
  CHECK(d.first_order_residual <= 1e-6);
}

TEST_CASE("double derivative of exp(x1 x2)") {
  // f' = (1 + x1 x2) exp(x1 x2)
  auto f = expr::field2("exp(x1*x2)");
  const Point2 a{0.4, -0.6};
  const DerivEstimate d = double_derivative(f, a);
  REQUIRE(d.report.verdict == Verdict::Converged);
  const double want = (1.0 + a.x1 * a.x2) * std::exp(a.x1 * a.x2);
  CHECK(*d.report.value == Catch::Approx(want).margin(1e-6));
}

TEST_CASE("separable fields have zero double derivative") {
  auto f = expr::field2("x1^3 + cos(x2)");
  const DerivEstimate d = double_derivative(f, {0.7, -0.3});
  REQUIRE(d.report.verdict == Verdict::Converged);
  CHECK(std::abs(*d.report.value) <= 1e-9);
}

TEST_CASE("signed derivative at a boundary point") {
  Interval2 box{{0, 0}, {1, 1}};
  auto f = expr::field2("x1^2*x2^2", box);
  const DerivEstimate d =
      double_derivative(f, {0.0, 0.0}, QuadrantSign::PP);
  REQUIRE(d.report.verdict == Verdict::Converged);
  CHECK(std::abs(*d.report.value) <= 1e-6);  // 4 x1 x2 = 0 at the corner
}

TEST_CASE("derivative rejects when signed limits disagree") {
  // f = |x1| |x2| has signed slopes +1/-1 by quadrant at the origin
  ScalarField2 f = ScalarField2::from(
      [](double x1, double x2) { return std::abs(x1) * std::abs(x2); });
  const DerivEstimate d = double_derivative(f, {0.0, 0.0});
  CHECK(d.report.verdict != Verdict::Converged);
}

TEST_CASE("mixed partials agree with the double derivative") {
  auto f = expr::field2("x1^3*x2^2 + sin(x1*x2)");
  const Point2 a{0.5, 0.8};
  const MixedPartialsReport r = mixed_partials_check(f, a, 1e-2, 3, 1e-5);
  CHECK(r.agree);
  // analytic: 6 x1^2 x2 + cos(x1 x2) - x1 x2 sin(x1 x2)
  const double want = 6 * a.x1 * a.x1 * a.x2 + std::cos(a.x1 * a.x2) -
                      a.x1 * a.x2 * std::sin(a.x1 * a.x2);
  CHECK(r.f12 == Catch::Approx(want).margin(1e-6));
  CHECK(r.f21 == Catch::Approx(want).margin(1e-6));
}

TEST_CASE("rolle finds an interior zero of the double derivative") {
  auto f = expr::field2("sin(x1)*sin(x2)");
  Interval2 box{{0, 0}, {kPi, kPi}};
  const MeanValueResult r = rolle_solve(f, box, 1e-6, 40);
  CHECK(r.c.x1 > 0.0);
  CHECK(r.c.x1 < kPi);
  CHECK(r.c.x2 > 0.0);
  CHECK(r.c.x2 < kPi);
  CHECK(std::abs(r.achieved) <= 1e-6);
  // independent confirmation against the analytic derivative
  CHECK(std::abs(std::cos(r.c.x1) * std::cos(r.c.x2)) <= 1e-6);
}

TEST_CASE("rolle rejects a violated hypothesis") {
  auto f = expr::field2("x1*x2");
  CHECK_THROWS_AS(rolle_solve(f, Interval2{{0, 0}, {1, 1}}, 1e-6, 40),
                  UsageError);
}

TEST_CASE("mvt on x1^2 x2^2 over the unit square") {
  auto f = expr::field2("x1^2*x2^2");
  Interval2 box{{0, 0}, {1, 1}};
  const MeanValueResult r = mvt_solve(f, box, 1e-6, 40);
  CHECK(r.target == 1.0);  // Delta / area = 1
  CHECK(std::abs(4.0 * r.c.x1 * r.c.x2 - 1.0) <= 1e-5);
  CHECK(r.residual <= 1e-5);
}

TEST_CASE("cauchy mvt relates two fields") {
  auto f = expr::field2("x1^2*x2^2");
  auto g = expr::field2("x1*x2");
  Interval2 box{{0, 0}, {1, 1}};
  const CauchyResult r = cauchy_mvt_solve(f, g, box, 1e-6, 40);
  // f'(c) dg = g'(c) df with dg = 1, df = 1: 4 c1 c2 = 1
  CHECK(std::abs(r.lhs - r.rhs) <= 1e-5);
  CHECK(std::abs(4.0 * r.c.x1 * r.c.x2 - 1.0) <= 1e-4);
}

TEST_CASE("intermediate point hits the target value") {
  auto f = expr::field2("x1 + x2");
  Interval2 box{{0, 0}, {1, 1}};
  const Point2 c = intermediate_point(f, box, 0.83, 1e-10);
  CHECK(f.at(c) == Catch::Approx(0.83).margin(1e-9));
  CHECK_THROWS_AS(intermediate_point(f, box, 5.0), UsageError);
}

TEST_CASE("monotonicity classification") {
  Interval2 box{{0.1, 0.1}, {1, 1}};
  CHECK(monotonicity_classify(expr::field2("x1*x2", box), box) ==
        Monotonicity::DoubleIncreasing);
  CHECK(monotonicity_classify(expr::field2("-x1*x2", box), box) ==
        Monotonicity::DoubleDecreasing);
  CHECK(monotonicity_classify(expr::field2("x1^2 + x2^2", box), box) ==
        Monotonicity::DoubleConstant);
  Interval2 wide{{-1, -1}, {1, 1}};
  CHECK(monotonicity_classify(expr::field2("x1^2*x2^2", wide), wide) ==
        Monotonicity::Mixed);
}

TEST_CASE("critical point of the product-square example") {
  // f = (x1-c1)^2 (x2-c2)^2: unique stationary point at c, double min
  const Point2 c{0.83, 2.31};
  Interval2 box{{0, 0}, {2, 4}};
  ScalarField2 f = ScalarField2::from(
      [c](double x1, double x2) {
        const double s = (x1 - c.x1) * (x2 - c.x2);
        return s * s;
      },
      box);
  const auto pts = critical_points(f, box, 9, 1e-6);
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0].location.x1 - c.x1) <= 1e-4);
  CHECK(std::abs(pts[0].location.x2 - c.x2) <= 1e-4);
  CHECK(pts[0].classification == StationaryClass::DoubleMin);
}

TEST_CASE("saddle-free product has no double extremum at the origin") {
  // f = x1 x2: f' = 1 everywhere, sector signs uniform
  Interval2 box{{-1, -1}, {1, 1}};
  auto f = expr::field2("x1*x2", box);
  CHECK(classify_stationary(f, {0, 0}, box) == StationaryClass::Neither);
}
