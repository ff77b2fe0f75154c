// Acceptance gate: twelve numbered end-to-end checks, one pass/fail
// line each. Exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "bicalc/bicalc.hpp"

using namespace bicalc;

namespace {

constexpr double kPi = 3.14159265358979323846;
int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%-4s criterion %2d: %-34s %s\n", pass ? "PASS" : "FAIL", id,
              name, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// 1. Newton integral golden value, exact in binary64, < 1 ms.
void criterion1() {
  auto F = expr::field2("x1^2*x2^3/2");
  const auto t0 = std::chrono::steady_clock::now();
  const double v = newton_integral(F, Interval2{{0, 1}, {2, 3}});
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  report(1, "newton integral = 52 exactly", v == 52.0 && us < 1000,
         fmt("value=%.17g time_us=%.0f", v, static_cast<double>(us)));
}

// 2. Riemann integral of the derivative within 1e-6 of 52 in <= 12
//    dyadic refinements and < 5 s.
void criterion2() {
  auto f = expr::field2("3*x1*x2^2");
  RiemannConfig cfg;
  cfg.tol = 1e-6;
  cfg.max_refinements = 12;
  const auto t0 = std::chrono::steady_clock::now();
  const EstimateReport r = riemann_integral(f, Interval2{{0, 1}, {2, 3}}, cfg);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  const bool pass = r.verdict == Verdict::Converged && r.value &&
                    std::abs(*r.value - 52.0) <= 1e-6 && secs < 5.0;
  report(2, "riemann -> 52 within 1e-6", pass,
         fmt("value=%.12g err=%.2e secs=%.2f", r.value.value_or(-1),
             r.value ? std::abs(*r.value - 52.0) : -1.0, secs));
}

// 3. Improper convergence to 2 ln 2 on the open unit square.
void criterion3() {
  auto F = expr::field2("(x1+x2)*ln(x1+x2)");
  Interval2 box{{0, 0}, {1, 1}, false, false, false, false};
  const ImproperResult r = improper_newton_integral(F, box, 48, 1e-6);
  const double want = 2.0 * std::log(2.0);
  const bool pass = r.kind == ImproperResult::Kind::Convergent && r.value &&
                    std::abs(*r.value - want) <= 1e-6;
  report(3, "improper -> 2 ln 2", pass,
         fmt("value=%.12g err=%.2e", r.value.value_or(-1),
             r.value ? std::abs(*r.value - want) : -1.0));
}

// 4. Divergence with path witnesses 0 and -1/6.
void criterion4() {
  auto F = expr::field2("x1/(x1+x2)");
  Interval2 box{{0, 0}, {1, 1}, false, true, false, true};
  const ImproperResult r = improper_newton_integral(F, box, 48, 1e-6);
  const bool pass = r.kind == ImproperResult::Kind::Divergent && r.witness_a &&
                    r.witness_b && std::abs(*r.witness_a) <= 1e-6 &&
                    std::abs(*r.witness_b + 1.0 / 6.0) <= 1e-6;
  report(4, "divergence witnesses 0 and -1/6", pass,
         fmt("w1=%.3e w2=%.9g", r.witness_a.value_or(-99),
             r.witness_b.value_or(-99)));
}

// 5. Change of variables: the four worked examples.
void criterion5() {
  const double inf = std::numeric_limits<double>::infinity();
  struct Case {
    const char* prim;
    Interval2 box;
    double want;
    double tol;
  };
  const std::vector<Case> cases = {
      // triangle, f = x1 x2, h = (u, uv): integrand u^3 v
      {"x1^4*x2^2/8",
       Interval2{{0, 0}, {1, 1}, false, false, false, false}, 0.125, 1e-6},
      // f = 1/(x1+x2)^2, h = (u, u^2 v): integrand 1/(1+uv)^2
      {"ln(1+x1*x2)",
       Interval2{{0, 0}, {1, 1}, false, false, false, false},
       std::log(2.0), 1e-6},
      // f = exp(-x1^2) on the wedge, h = (u, uv): integrand u exp(-u^2)
      {"-exp(-x1^2)*x2/2",
       Interval2{{0, -1}, {inf, 1}, false, false, false, false}, 1.0, 1e-4},
      // f = 1/(x1+x2) on the hyperbolic strip, h = (u, v/u):
      // integrand 1/(u^2+v)
      {"x1*ln(x1^2+x2) + 2*sqrt(x2)*atan(x1/sqrt(x2))",
       Interval2{{1, 0}, {inf, 1}, false, false, false, false},
       kPi / 2.0 - std::log(2.0), 1e-4}};
  bool pass = true;
  std::string detail;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    const ImproperResult r =
        improper_newton_integral(expr::field2(c.prim), c.box, 48, c.tol);
    const double err =
        r.value ? std::abs(*r.value - c.want) : std::nan("");
    const bool ok = r.kind == ImproperResult::Kind::Convergent && r.value &&
                    err <= c.tol;
    pass = pass && ok;
    detail += fmt("e%.0f=%.1e ", static_cast<double>(k + 1), err);
  }
  report(5, "change of variables (a)-(d)", pass, detail);
}

// 6. Rolle point for sin sin on [0,pi]^2 in <= 40 halvings, with an
//    independent finite-difference confirmation via cos cos.
void criterion6() {
  auto f = expr::field2("sin(x1)*sin(x2)");
  Interval2 box{{0, 0}, {kPi, kPi}};
  const MeanValueResult r = rolle_solve(f, box, 1e-6, 40);
  const bool interior = r.c.x1 > 0 && r.c.x1 < kPi && r.c.x2 > 0 &&
                        r.c.x2 < kPi;
  const double analytic = std::cos(r.c.x1) * std::cos(r.c.x2);
  const bool pass =
      interior && std::abs(r.achieved) <= 1e-6 && std::abs(analytic) <= 1e-6;
  report(6, "rolle |f'(c)| <= 1e-6", pass,
         fmt("achieved=%.2e cos*cos=%.2e", std::abs(r.achieved),
             std::abs(analytic)));
}

// 7. MVT on x1^2 x2^2 over the unit square: 4 c1 c2 = 1.
void criterion7() {
  auto f = expr::field2("x1^2*x2^2");
  const MeanValueResult r = mvt_solve(f, Interval2{{0, 0}, {1, 1}}, 1e-6, 40);
  const double gap = std::abs(4.0 * r.c.x1 * r.c.x2 - 1.0);
  report(7, "mvt |4 c1 c2 - 1| <= 1e-5", gap <= 1e-5,
         fmt("gap=%.2e c=(%.6f,%.6f)", gap, r.c.x1, r.c.x2));
}

// 8. Schwarz agreement over 10 smooth functions at 20 points each.
void criterion8() {
  const std::vector<const char*> family = {
      "x1^3*x2^2",          "sin(x1)*cos(x2)",      "exp(x1*x2/4)",
      "x1*x2 + x1^2*x2^3",  "sin(x1*x2)",           "ln(4+x1+x2)",
      "x1^2*x2^2/4",        "cos(x1+2*x2)",         "x2*exp(x1/2)",
      "atan(x1*x2)"};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  double worst = 0.0;
  for (const char* src : family) {
    auto f = expr::field2(src);
    for (int k = 0; k < 20; ++k) {
      const Point2 a{u(rng), u(rng)};
      const MixedPartialsReport r = mixed_partials_check(f, a, 1e-2, 3, 1e-4);
      worst = std::max(worst, std::abs(r.f12 - r.f21));
      worst = std::max(worst, std::abs(r.dd - r.f12));
    }
  }
  report(8, "schwarz max discrepancy <= 1e-4", worst <= 1e-4,
         fmt("worst=%.2e over 200 points", worst));
}

// 9. Subdivision identities to 1e-10 relative over 1000 trials.
void criterion9() {
  const verify::SuiteResult r = verify::difference_suite(1234, 1000);
  double worst = 0.0;
  long fails = 0;
  for (const auto& c : r.checks)
    if (c.name == "subdivision_identities") {
      worst = c.worst;
      fails = c.failures;
    }
  report(9, "subdivision identities 1e-10", fails == 0,
         fmt("worst=%.2e trials=1000 failures=%.0f", worst,
             static_cast<double>(fails)));
}

// 10. Separable suite: vanishing delta, passing probes, split
//     reconstruction on a 9x9 lattice.
void criterion10() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_delta = 0.0, worst_split = 0.0;
  long probe_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
    const double jump = (t % 2) ? u(rng) : 0.0;
    const double tau = 0.4 * u(rng);
    ScalarField2 f = ScalarField2::from([=](double x1, double x2) {
      return a1 * x1 + a2 * std::sin(x1) + b1 * x2 + b2 * x2 * x2 +
             (x2 > tau ? jump : 0.0);
    });
    const Point2 p{u(rng) / 2, u(rng) / 2};
    const Point2 q{p.x1 + 0.5 + std::abs(u(rng)), p.x2 + 0.5 + std::abs(u(rng))};
    worst_delta = std::max(worst_delta, std::abs(delta2(f, p, q)));
    if (continuity_probe(f, p).verdict != ContinuityReport::Verdict::Pass)
      ++probe_failures;
    Interval2 box{p, q};
    const SplitDecomposition d = split_double_constant(f, box, p);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        const Point2 x{p.x1 + (q.x1 - p.x1) * i / 8.0,
                       p.x2 + (q.x2 - p.x2) * j / 8.0};
        worst_split = std::max(
            worst_split, std::abs(f.at(x) - (d.g(x.x1) + d.h(x.x2))));
      }
  }
  const bool pass =
      worst_delta <= 1e-12 && probe_failures == 0 && worst_split <= 1e-10;
  report(10, "separable suite (100 functions)", pass,
         fmt("delta=%.1e split=%.1e probe_failures=%.0f", worst_delta,
             worst_split, static_cast<double>(probe_failures)));
}

// 11. Extremum classification of D (x1-c1)^2 (x2-c2)^2.
void criterion11() {
  const Point2 c{0.83, 2.31};
  Interval2 box{{0, 0}, {2, 4}};
  bool pass = true;
  std::string detail;
  for (double D : {1.0, -1.0}) {
    ScalarField2 f = ScalarField2::from(
        [c, D](double x1, double x2) {
          const double s = (x1 - c.x1) * (x2 - c.x2);
          return D * s * s;
        },
        box);
    const auto pts = critical_points(f, box, 9, 1e-6);
    const bool one = pts.size() == 1;
    const bool close = one &&
                       std::abs(pts[0].location.x1 - c.x1) <= 1e-4 &&
                       std::abs(pts[0].location.x2 - c.x2) <= 1e-4;
    const bool classed =
        one && pts[0].classification == (D > 0 ? StationaryClass::DoubleMin
                                               : StationaryClass::DoubleMax);
    pass = pass && one && close && classed;
    detail += fmt("D=%.0f n=%.0f ", D, static_cast<double>(pts.size()));
  }
  report(11, "extremum located and classified", pass, detail);
}

// 12. Piecewise double continuity at the origin with sign PP, while the
//     diagonal limit shows ordinary discontinuity.
void criterion12() {
  ScalarField2 f = ScalarField2::from([](double x1, double x2) {
    if (x1 > 0.0 && x2 > 0.0) return std::pow(x1, x2) * std::pow(x2, x1);
    return 0.0;
  });
  // convergence in x2 for fixed x1 is extremely non-uniform
  // (x2 ~ x1-th root of the tolerance), hence the deep shrink budget
  const ContinuityReport r =
      continuity_probe(f, {0.0, 0.0}, QuadrantSign::PP, 8, 180, 1e-6);
  const double diag = f.at({1e-4, 1e-4});
  const bool pass =
      r.verdict == ContinuityReport::Verdict::Pass && diag > 0.99;
  report(12, "piecewise probe at (0,0) PP", pass,
         fmt("worst=%.2e f(t,t)=%.6f", r.worst_deviation, diag));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
