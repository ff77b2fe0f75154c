#pragma once

// Seeded self-check suites over random function families. Used by the
// `verify` CLI subcommand and exercised from the test suite.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bicalc/core.hpp"
#include "bicalc/derivative.hpp"
#include "bicalc/difference.hpp"
#include "bicalc/integral.hpp"

namespace bicalc::verify {

struct CheckResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst = 0.0;
  bool pass() const { return failures == 0; }
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

namespace detail {

// bicubic with bounded coefficients: smooth, cheap, closed under Delta
struct Poly2 {
  double c[4][4] = {};
  double operator()(Point2 x) const {
    double xp[4] = {1, x.x1, x.x1 * x.x1, x.x1 * x.x1 * x.x1};
    double yp[4] = {1, x.x2, x.x2 * x.x2, x.x2 * x.x2 * x.x2};
    double s = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) s += c[p][q] * xp[p] * yp[q];
    return s;
  }
};

inline Poly2 random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Poly2 f;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) f.c[p][q] = u(rng);
  return f;
}

inline ScalarField2 poly_field(const Poly2& f) {
  return ScalarField2::from([f](double x1, double x2) { return f({x1, x2}); });
}

// smooth trig-polynomial: sum of scaled sinusoids in x1 +/- x2
inline ScalarField2 random_trig(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.5, 1.5);
  std::uniform_real_distribution<double> freq(0.3, 1.6);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  struct Term {
    double a, w1, w2, p;
  };
  std::vector<Term> terms;
  for (int k = 0; k < 3; ++k)
    terms.push_back({amp(rng), freq(rng), freq(rng), phase(rng)});
  return ScalarField2::from([terms](double x1, double x2) {
    double s = 0.0;
    for (const auto& t : terms)
      s += t.a * std::sin(t.w1 * x1 + t.w2 * x2 + t.p);
    return s;
  });
}

// separable g(x1) + h(x2), with h optionally carrying a jump
inline ScalarField2 random_separable(std::mt19937_64& rng,
                                     bool with_jump = false) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double a0 = u(rng), a1 = u(rng), a2 = u(rng);
  const double b1 = u(rng), b2 = u(rng);
  const double jump = with_jump ? u(rng) : 0.0;
  const double tau = 0.5 * u(rng);
  return ScalarField2::from([=](double x1, double x2) {
    const double g = a0 + a1 * x1 + a2 * std::sin(x1);
    const double h = b1 * x2 + b2 * x2 * x2 + (x2 > tau ? jump : 0.0);
    return g + h;
  });
}

inline Point2 random_point(std::mt19937_64& rng, double lo = -2.0,
                           double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng)};
}

// two points, pairwise distinct in both coordinates
inline std::pair<Point2, Point2> random_box(std::mt19937_64& rng,
                                            double min_gap = 0.05) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (std::abs(b.x1 - a.x1) > min_gap && std::abs(b.x2 - a.x2) > min_gap) {
      if (b.x1 < a.x1) std::swap(a.x1, b.x1);
      if (b.x2 < a.x2) std::swap(a.x2, b.x2);
      return {a, b};
    }
  }
}

inline void record(CheckResult& c, double err, double tol) {
  ++c.trials;
  c.worst = std::max(c.worst, err);
  if (!(err <= tol)) ++c.failures;
}

}  // namespace detail

/// Algebraic identities of the double difference operator.
inline SuiteResult difference_suite(std::uint64_t seed, long trials = 1000) {
  std::mt19937_64 rng(seed);
  SuiteResult out;
  out.suite = "difference";
  CheckResult sub{"subdivision_identities"};
  CheckResult dn{"delta_n_matches_delta2"};
  CheckResult sep{"separable_delta_vanishes"};
  CheckResult split{"split_reconstructs"};
  CheckResult dmap{"delta_map_consistency"};

  for (long t = 0; t < trials; ++t) {
    const auto f = detail::random_poly(rng);
    const ScalarField2 F = detail::poly_field(f);
    auto [a, b] = detail::random_box(rng);
    std::uniform_real_distribution<double> u1(a.x1, b.x1), u2(a.x2, b.x2);
    const Point2 x{u1(rng), u2(rng)};
    const double whole = delta2(F, a, b);
    const double scale = std::max(1.0, std::abs(whole));
    // vertical split, horizontal split, four-way split, telescoping
    const double v = delta2(F, a, {x.x1, b.x2}) + delta2(F, {x.x1, a.x2}, b);
    const double h = delta2(F, a, {b.x1, x.x2}) + delta2(F, {a.x1, x.x2}, b);
    const double quad = delta2(F, a, x) + delta2(F, x, b) +
                        delta2(F, {a.x1, x.x2}, {x.x1, b.x2}) +
                        delta2(F, {x.x1, a.x2}, {b.x1, x.x2});
    const double tele =
        delta2(F, a, x) + delta2(F, {x.x1, a.x2}, {b.x1, x.x2}) +
        delta2(F, {a.x1, x.x2}, {x.x1, b.x2}) + delta2(F, x, b);
    double err = std::abs(whole - v) / scale;
    err = std::max(err, std::abs(whole - h) / scale);
    err = std::max(err, std::abs(whole - quad) / scale);
    err = std::max(err, std::abs(whole - tele) / scale);
    detail::record(sub, err, 1e-10);

    // n = 2 general operator agrees bit-for-bit with delta2
    ScalarFieldN Fn{2, [&F](const std::vector<double>& xs) {
                      return F(Point2{xs[0], xs[1]});
                    }};
    const double g2 = delta_n(Fn, {a.x1, a.x2}, {b.x1, b.x2});
    detail::record(dn, g2 == whole ? 0.0 : std::abs(g2 - whole), 0.0);
  }

  for (long t = 0; t < trials / 10 + 1; ++t) {
    const ScalarField2 S = detail::random_separable(rng, t % 2 == 1);
    auto [a, b] = detail::random_box(rng);
    detail::record(sep, std::abs(delta2(S, a, b)), 1e-12);
    Interval2 box{a, b};
    if (is_double_constant(S, box, 9, 1e-12)) {
      const SplitDecomposition d = split_double_constant(S, box, a);
      double worst = 0.0;
      for (int p = 0; p < 9; ++p)
        for (int q = 0; q < 9; ++q) {
          const Point2 x{a.x1 + (b.x1 - a.x1) * p / 8.0,
                         a.x2 + (b.x2 - a.x2) * q / 8.0};
          worst = std::max(worst,
                           std::abs(S.at(x) - (d.g(x.x1) + d.h(x.x2))));
        }
      detail::record(split, worst, 1e-10);
    }
  }

  for (long t = 0; t < trials / 10 + 1; ++t) {
    const auto f = detail::random_poly(rng);
    const ScalarField2 F = detail::poly_field(f);
    std::uniform_real_distribution<double> u(0.05, 0.5);
    const Point2 h{u(rng), u(rng)};
    const ScalarField2 M = delta_map_field(F, h);
    const Point2 x = detail::random_point(rng);
    const double expect = delta2(F, x, {x.x1 + h.x1, x.x2 + h.x2});
    detail::record(dmap, std::abs(M.at(x) - expect), 0.0);
  }

  out.checks = {sub, dn, sep, split, dmap};
  return out;
}

/// Derivative-side properties: Schwarz agreement, differentiability
/// implying double continuity, and mean value postconditions.
inline SuiteResult derivative_suite(std::uint64_t seed, long trials = 20) {
  std::mt19937_64 rng(seed);
  SuiteResult out;
  out.suite = "derivative";
  CheckResult schwarz{"mixed_partials_agree"};
  CheckResult cont{"differentiable_implies_continuous"};
  CheckResult resid{"first_order_residual_bounded"};
  CheckResult mvt{"mvt_postcondition"};
  CheckResult cauchy{"cauchy_symmetry"};
  CheckResult sectors{"sector_classification"};

  for (long t = 0; t < trials; ++t) {
    const ScalarField2 F =
        t % 2 == 0 ? detail::poly_field(detail::random_poly(rng))
                   : detail::random_trig(rng);
    const Point2 a = detail::random_point(rng, -1.0, 1.0);
    const MixedPartialsReport mp = mixed_partials_check(F, a, 1e-2, 3, 1e-4);
    detail::record(schwarz,
                   std::max(std::abs(mp.f12 - mp.f21),
                            std::abs(mp.dd - mp.f12)),
                   1e-4);

    // Deviations scale with the local slope, which random draws push well
    // past 1; deepen the shrink schedule and make the tolerance relative
    // to the field magnitude at the probe point.
    const double mag = std::max(1.0, std::abs(F.at(a)));
    const ContinuityReport cr =
        continuity_probe(F, a, std::nullopt, 8, 40, 1e-6 * mag);
    detail::record(cont,
                   cr.verdict == ContinuityReport::Verdict::Pass ? 0.0 : 1.0,
                   0.5);

    const DerivEstimate d = double_derivative(F, a);
    if (d.report.verdict == Verdict::Converged)
      detail::record(resid, d.first_order_residual, 1e-6);
  }

  for (long t = 0; t < trials / 2 + 1; ++t) {
    const ScalarField2 F = detail::poly_field(detail::random_poly(rng));
    auto [a, b] = detail::random_box(rng, 0.4);
    Interval2 box{a, b};
    try {
      // Random polynomials reach magnitudes well past 1, so the solver
      // tolerance and the recorded residual are both magnitude-relative.
      const MeanValueResult r = mvt_solve(F, box, 1e-4);
      detail::record(mvt, r.residual / std::max(1.0, std::abs(r.target)),
                     1e-4);
      const ScalarField2 G = detail::poly_field(detail::random_poly(rng));
      const CauchyResult cf = cauchy_mvt_solve(F, G, box, 1e-4);
      const double scale =
          std::max({1.0, std::abs(cf.lhs), std::abs(cf.rhs)});
      detail::record(cauchy, std::abs(cf.lhs - cf.rhs) / scale, 1e-3);
    } catch (const UsageError&) {
      // degenerate random draw (near-vanishing double difference)
    }
  }

  // D (x1-c1)^2 (x2-c2)^2 has a double extremum at c matching sign(D)
  for (long t = 0; t < trials / 4 + 1; ++t) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Point2 c{u(rng), u(rng)};
    const double D = u(rng) > 0 ? 1.0 : -1.0;
    const ScalarField2 F = ScalarField2::from([c, D](double x1, double x2) {
      const double s = (x1 - c.x1) * (x2 - c.x2);
      return D * s * s;
    });
    Interval2 box{{c.x1 - 1.0, c.x2 - 1.0}, {c.x1 + 1.0, c.x2 + 1.0}};
    const StationaryClass cls = classify_stationary(F, c, box);
    const bool good = (D > 0 && cls == StationaryClass::DoubleMin) ||
                      (D < 0 && cls == StationaryClass::DoubleMax);
    detail::record(sectors, good ? 0.0 : 1.0, 0.5);
  }

  out.checks = {schwarz, cont, resid, mvt, cauchy, sectors};
  return out;
}

/// Integral-side properties: Newton integral algebra, primitive
/// independence, sample-rule independence and FTC2 agreement.
inline SuiteResult integral_suite(std::uint64_t seed, long trials = 50) {
  std::mt19937_64 rng(seed);
  SuiteResult out;
  out.suite = "integral";
  CheckResult additive{"newton_additivity"};
  CheckResult prim{"primitive_independence"};
  CheckResult accum{"accumulation_identity"};
  CheckResult rules{"sample_rule_independence"};
  CheckResult linear{"riemann_linearity"};
  CheckResult ftc2{"ftc2_agreement"};

  for (long t = 0; t < trials; ++t) {
    const auto f = detail::random_poly(rng);
    const ScalarField2 F = detail::poly_field(f);
    auto [a, b] = detail::random_box(rng);
    Interval2 box{a, b};
    std::uniform_real_distribution<double> u1(a.x1, b.x1), u2(a.x2, b.x2);
    const Point2 x{u1(rng), u2(rng)};
    const double whole = newton_integral(F, box);
    const double scale = std::max(1.0, std::abs(whole));

    const double parts = newton_integral(F, {a, x}) +
                         newton_integral(F, {x, b}) +
                         newton_integral(F, {{a.x1, x.x2}, {x.x1, b.x2}}) +
                         newton_integral(F, {{x.x1, a.x2}, {b.x1, x.x2}});
    detail::record(additive, std::abs(whole - parts) / scale, 1e-10);

    // adding s(x1) + t(x2) to the primitive changes nothing (up to
    // rounding of the corner sums)
    std::uniform_real_distribution<double> uc(-2.0, 2.0);
    const double s1 = uc(rng), s2 = uc(rng), t1 = uc(rng), t2 = uc(rng);
    const ScalarField2 F2 =
        ScalarField2::from([f, s1, s2, t1, t2](double x1, double x2) {
          return f({x1, x2}) + s1 * x1 + s2 * std::sin(x1) + t1 * x2 +
                 t2 * std::cos(x2);
        });
    detail::record(prim,
                   std::abs(newton_integral(F2, box) - whole) / scale, 1e-10);

    const ScalarField2 G = accumulate_field(F, a);
    detail::record(accum,
                   std::abs(delta2(G, x, b) - delta2(F, x, b)) / scale,
                   1e-10);
  }

  for (long t = 0; t < 4; ++t) {
    const auto f = detail::random_poly(rng);
    const ScalarField2 F = detail::poly_field(f);
    auto [a, b] = detail::random_box(rng, 0.3);
    Interval2 box{a, b};
    // Pilot pass to scale the convergence tolerance with the magnitude
    // of the integral (random polynomials can give |I| well past 1).
    RiemannConfig pilot;
    pilot.max_refinements = 2;
    pilot.tol = 0.0;
    const EstimateReport rp = riemann_integral(F, box, pilot);
    const double scale = std::max(1.0, std::abs(rp.value.value_or(1.0)));

    RiemannConfig mid, corner, rnd;
    mid.tol = rnd.tol = 1e-6 * scale;
    // Corner sums converge O(h), far too slowly for a tight Cauchy stop;
    // run them to a fixed depth and bound their error by the rate-implied
    // multiple of the last refinement step instead.
    corner.tol = 0.0;
    corner.max_refinements = 8;
    corner.rule = SampleRule::Corner;
    rnd.rule = SampleRule::Random;
    rnd.seed = rng();
    const EstimateReport rm = riemann_integral(F, box, mid);
    const EstimateReport rc = riemann_integral(F, box, corner);
    const EstimateReport rr = riemann_integral(F, box, rnd);
    if (rm.verdict == Verdict::Converged && rr.verdict == Verdict::Converged &&
        rm.value && rc.value && rr.value) {
      detail::record(rules, std::abs(*rr.value - *rm.value) / scale, 1e-5);
      const double corner_bound = 4.0 * rc.residual + 1e-5 * scale;
      detail::record(rules, std::abs(*rc.value - *rm.value) / corner_bound,
                     1.0);
    }

    // linearity at a fixed partition (no refinement)
    const auto g = detail::random_poly(rng);
    const ScalarField2 Gf = detail::poly_field(g);
    const double al = 2.0, be = -0.5;
    const ScalarField2 combo =
        ScalarField2::from([f, g, al, be](double x1, double x2) {
          return al * f({x1, x2}) + be * g({x1, x2});
        });
    RiemannConfig fixed;
    fixed.initial_m = fixed.initial_n = 16;
    fixed.max_refinements = 0;
    auto fixed_sum = [&](const ScalarField2& h) {
      return riemann_integral(h, box, fixed).trace.back().second;
    };
    const double lhs = fixed_sum(combo);
    const double rhs = al * fixed_sum(F) + be * fixed_sum(Gf);
    detail::record(linear, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)),
                   1e-12);

    // FTC2: derivative of the primitive integrates back
    const ScalarField2 deriv =
        ScalarField2::from([Ff = F](double x1, double x2) {
          return cross_slope_richardson(Ff, {x1, x2}, 1e-4, 1e-4);
        });
    RiemannConfig rcfg;
    rcfg.tol = 1e-7;
    const Ftc2Report rep = ftc2_check(F, deriv, box, rcfg);
    if (rep.riemann.verdict == Verdict::Converged)
      detail::record(ftc2, rep.error / std::max(1.0, std::abs(rep.newton)),
                     1e-5);
  }

  out.checks = {additive, prim, accum, rules, linear, ftc2};
  return out;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {difference_suite(seed), derivative_suite(seed + 1),
          integral_suite(seed + 2)};
}

}  // namespace bicalc::verify
