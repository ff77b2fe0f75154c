#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bicalc/exprlang.hpp"
#include "bicalc/integral.hpp"

using namespace bicalc;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kLn2 = std::log(2.0);
}

TEST_CASE("newton integral golden value") {
  auto F = expr::field2("x1^2*x2^3/2");
  CHECK(newton_integral(F, Interval2{{0, 1}, {2, 3}}) == 52.0);
}

TEST_CASE("riemann integral converges to the newton value") {
  auto f = expr::field2("3*x1*x2^2");
  Interval2 box{{0, 1}, {2, 3}};
  RiemannConfig cfg;
  cfg.tol = 1e-6;
  const EstimateReport r = riemann_integral(f, box, cfg);
  REQUIRE(r.verdict == Verdict::Converged);
  CHECK(*r.value == Catch::Approx(52.0).margin(1e-6));
  CHECK(r.trace.size() <= 13);  // initial panel + at most 12 refinements
}

TEST_CASE("sample rules land on the same limit") {
  auto f = expr::field2("exp(x1)*sin(x2) + x1*x2");
  Interval2 box{{0, 0}, {1, 2}};
  RiemannConfig mid, corner, rnd;
  mid.tol = rnd.tol = 1e-7;
  // Corner sums converge O(h): run to a fixed depth and bound the error
  // by a rate-implied multiple of the last refinement step.
  corner.tol = 0.0;
  corner.max_refinements = 8;
  corner.rule = SampleRule::Corner;
  rnd.rule = SampleRule::Random;
  rnd.seed = 12345;
  const auto a = riemann_integral(f, box, mid);
  const auto b = riemann_integral(f, box, corner);
  const auto c = riemann_integral(f, box, rnd);
  REQUIRE(a.value);
  REQUIRE(b.value);
  REQUIRE(c.value);
  CHECK(std::abs(*a.value - *b.value) <= 4.0 * b.residual + 1e-6);
  CHECK(*a.value == Catch::Approx(*c.value).margin(1e-5));
}

TEST_CASE("random rule is deterministic in the seed") {
  auto f = expr::field2("x1*x2^2");
  Interval2 box{{0, 0}, {1, 1}};
  RiemannConfig cfg;
  cfg.rule = SampleRule::Random;
  cfg.seed = 99;
  cfg.max_refinements = 3;
  const auto a = riemann_integral(f, box, cfg);
  const auto b = riemann_integral(f, box, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k)
    CHECK(a.trace[k].second == b.trace[k].second);
}

TEST_CASE("accumulation field obeys the sub-box identity") {
  auto F = expr::field2("x1^2*x2^3/2");
  const Point2 lower{0, 1};
  const ScalarField2 G = accumulate_field(F, lower);
  // Delta_b^x(G) = Delta_b^x(F) for sub-boxes
  const Point2 b{0.5, 1.5}, x{1.5, 2.5};
  CHECK(delta2(G, b, x) == Catch::Approx(delta2(F, b, x)).margin(1e-12));
}

TEST_CASE("ftc1 at interior and boundary samples") {
  auto f = expr::field2("3*x1*x2^2", Interval2{{0, 1}, {2, 3}});
  const Ftc1Report r = ftc1_check(f, Interval2{{0, 1}, {2, 3}}, 3, 1e-3);
  CHECK(r.pass);
}

TEST_CASE("ftc2 compares newton and riemann") {
  auto F = expr::field2("x1^2*x2^3/2");
  auto f = expr::field2("3*x1*x2^2");
  RiemannConfig cfg;
  cfg.tol = 1e-6;
  const Ftc2Report r = ftc2_check(F, f, Interval2{{0, 1}, {2, 3}}, cfg);
  CHECK(r.pass);
  CHECK(r.newton == 52.0);
}

TEST_CASE("integral mean point attains the mean value") {
  auto F = expr::field2("x1^2*x2^2");  // primitive of 4 x1 x2
  auto f = expr::field2("4*x1*x2");
  Interval2 box{{0, 0}, {1, 1}};
  const MeanValueResult r = integral_mean_point(F, f, box, 1e-6);
  CHECK(r.target == 1.0);
  CHECK(r.residual <= 1e-5);
}

TEST_CASE("improper: (x1+x2) ln(x1+x2) over the open unit square") {
  auto F = expr::field2("(x1+x2)*ln(x1+x2)");
  Interval2 box{{0, 0}, {1, 1}, false, false, false, false};
  const ImproperResult r = improper_newton_integral(F, box);
  REQUIRE(r.kind == ImproperResult::Kind::Convergent);
  CHECK(*r.value == Catch::Approx(2.0 * kLn2).margin(1e-6));
}

TEST_CASE("improper: x1/(x1+x2) diverges with path witnesses") {
  auto F = expr::field2("x1/(x1+x2)");
  Interval2 box{{0, 0}, {1, 1}, false, true, false, true};
  const ImproperResult r = improper_newton_integral(F, box);
  REQUIRE(r.kind == ImproperResult::Kind::Divergent);
  REQUIRE(r.witness_a);
  REQUIRE(r.witness_b);
  CHECK(*r.witness_a == Catch::Approx(0.0).margin(1e-6));
  CHECK(*r.witness_b == Catch::Approx(-1.0 / 6.0).margin(1e-6));
}

TEST_CASE("improper over an unbounded interval") {
  // primitive -exp(-x1^2) x2 / 2 over (0,inf) x (-1,1): value 1
  auto F = expr::field2("-exp(-x1^2)*x2/2");
  const double inf = std::numeric_limits<double>::infinity();
  Interval2 box{{0, -1}, {inf, 1}, false, false, false, false};
  const ImproperResult r = improper_newton_integral(F, box);
  REQUIRE(r.kind == ImproperResult::Kind::Convergent);
  CHECK(*r.value == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("change of variables with a primitive, triangle example") {
  // f = x1 x2 mapped by h(u,v) = (u, uv): integrand u^3 v with
  // primitive u^4 v^2 / 8, value 1/8
  CovSpec spec{expr::field2("x1"), expr::field2("x1*x2"), std::nullopt,
               Interval2{{0, 0}, {1, 1}, false, false, false, false}};
  const ImproperResult r = change_of_variables_integral(
      expr::field2("x1*x2"), spec, expr::field2("x1^4*x2^2/8"));
  REQUIRE(r.kind == ImproperResult::Kind::Convergent);
  CHECK(*r.value == Catch::Approx(0.125).margin(1e-6));
}

TEST_CASE("change of variables without a primitive falls back to sums") {
  // same triangle example, integrated numerically with the Jacobian u
  CovSpec spec{expr::field2("x1"), expr::field2("x1*x2"),
               expr::field2("x1"),
               Interval2{{0, 0}, {1, 1}, false, false, false, false}};
  const ImproperResult r = change_of_variables_integral(
      expr::field2("x1*x2"), spec, std::nullopt, 20, 1e-5);
  REQUIRE(r.kind == ImproperResult::Kind::Convergent);
  CHECK(*r.value == Catch::Approx(0.125).margin(1e-4));
}

TEST_CASE("numeric jacobian matches the analytic one") {
  // h(u,v) = (u, u^2 v): J = u^2; integrand 1/(1+uv)^2, value ln 2
  CovSpec with_jac{expr::field2("x1"), expr::field2("x1^2*x2"),
                   expr::field2("x1^2"),
                   Interval2{{0, 0}, {1, 1}, false, false, false, false}};
  CovSpec numeric{expr::field2("x1"), expr::field2("x1^2*x2"), std::nullopt,
                  Interval2{{0, 0}, {1, 1}, false, false, false, false}};
  auto f = expr::field2("1/(x1+x2)^2");
  const ImproperResult a =
      change_of_variables_integral(f, with_jac, std::nullopt, 20, 1e-5);
  const ImproperResult b =
      change_of_variables_integral(f, numeric, std::nullopt, 20, 1e-5);
  REQUIRE(a.kind == ImproperResult::Kind::Convergent);
  REQUIRE(b.kind == ImproperResult::Kind::Convergent);
  CHECK(*a.value == Catch::Approx(kLn2).margin(1e-4));
  CHECK(*b.value == Catch::Approx(*a.value).margin(1e-4));
}

TEST_CASE("improper with joint-net fallback, skew profile") {
  // primitive of 1/(u^2+v) on (1,inf) x (0,1): corner limits diverge
  // individually but the joint limit is pi/2 - ln 2
  auto F = expr::field2("x1*ln(x1^2+x2) + 2*sqrt(x2)*atan(x1/sqrt(x2))");
  const double inf = std::numeric_limits<double>::infinity();
  Interval2 box{{1, 0}, {inf, 1}, false, false, false, false};
  const ImproperResult r = improper_newton_integral(F, box, 48, 1e-4);
  REQUIRE(r.kind == ImproperResult::Kind::Convergent);
  CHECK(*r.value == Catch::Approx(kPi / 2.0 - kLn2).margin(1e-4));
}
