#pragma once

// Signed double limits, double derivative estimation, mixed-partial
// cross-checks, monotonicity and extremum classification, and the
// constructive Rolle / Lagrange / Cauchy mean value solvers.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "bicalc/core.hpp"
#include "bicalc/difference.hpp"

namespace bicalc {

namespace detail {

// Net scale: how far from the target the net starts.
inline double limit_scale(const ScalarField2& g, const ExtendedPoint2& a) {
  if (g.domain_hint && g.domain_hint->finite()) {
    const Interval2& d = *g.domain_hint;
    return 0.5 * std::min(d.span1(), d.span2());
  }
  (void)a;
  return 1.0;
}

inline double net_coord(double target, double dir, double mult, double s,
                        double scale) {
  if (std::isinf(target))
    return (target > 0 ? 1.0 : -1.0) * mult * scale / s;
  return target + dir * mult * s * scale;
}

}  // namespace detail

/// Heuristic net for the (signed) double limit of g as x approaches a.
/// Three families approach along offset multipliers (1,1), (1,2) and
/// (2,1); the limit is accepted where the families agree within tol.
/// Infinite target components are approached by geometric growth.
inline EstimateReport double_limit(const ScalarField2& g,
                                   const ExtendedPoint2& a, QuadrantSign sign,
                                   int steps = 48, double tol = 1e-6,
                                   std::function<double(double)> noise_floor =
                                       nullptr) {
  EstimateReport rep;
  const double d1 = sign1(sign);
  const double d2 = sign2(sign);
  const double scale = detail::limit_scale(g, a);
  static constexpr double kMults[3][2] = {{1, 1}, {1, 2}, {2, 1}};

  double best_score = kInf;
  double min_spread = kInf;
  double prev_est = kInf;
  std::array<double, 3> prev_v{};
  bool have_prev_v = false;
  bool any_step = false;

  double s = 1.0 / 8.0;
  for (int k = 0; k < steps; ++k, s *= 0.5) {
    std::array<double, 3> v{};
    bool all_ok = true;
    bool moved = true;
    for (int fam = 0; fam < 3 && all_ok; ++fam) {
      const double x1 =
          detail::net_coord(a.x1, d1, kMults[fam][0], s, scale);
      const double x2 =
          detail::net_coord(a.x2, d2, kMults[fam][1], s, scale);
      if ((std::isfinite(a.x1) && x1 == a.x1) ||
          (std::isfinite(a.x2) && x2 == a.x2)) {
        moved = false;
        break;
      }
      EvalOutcome o = g({x1, x2});
      ++rep.evaluations;
      if (!o.has_value()) {
        all_ok = false;
        rep.diagnostic = o.error;
        break;
      }
      v[fam] = *o;
    }
    if (!moved) break;  // offsets vanished in binary64
    if (!all_ok) {
      if (!any_step && !have_prev_v) continue;  // net not yet in the domain
      break;                                    // domain ends; keep data
    }
    // Per-family Richardson step: with a geometric net the leading
    // O(s) truncation cancels in 2 v(s/2) - v(s).
    std::array<double, 3> r = v;
    if (have_prev_v)
      for (int fam = 0; fam < 3; ++fam) r[fam] = 2.0 * v[fam] - prev_v[fam];
    prev_v = v;
    have_prev_v = true;

    // Steps where evaluation noise can exceed a tenth of the tolerance
    // are recorded but never chosen as the limit value.
    const bool eligible = !noise_floor || noise_floor(s) <= 0.1 * tol;
    const double est = r[0];
    const double spread = std::max({r[0], r[1], r[2]}) -
                          std::min({r[0], r[1], r[2]});
    rep.trace.emplace_back(s, est);
    if (!eligible) continue;
    any_step = true;
    min_spread = std::min(min_spread, spread);
    const double score =
        spread + (prev_est == kInf ? 0.0 : std::abs(est - prev_est));
    if (score <= best_score) {
      best_score = score;
      rep.value = est;
      rep.residual = score;
    }
    prev_est = est;
  }

  if (!any_step) {
    rep.verdict = Verdict::Inconclusive;
    if (rep.diagnostic.empty()) rep.diagnostic = "net never entered the domain";
    rep.value.reset();
    return rep;
  }
  if (best_score <= tol)
    rep.verdict = Verdict::Converged;
  else if (min_spread > 10.0 * tol) {
    rep.verdict = Verdict::Diverged;
    rep.value.reset();
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

struct DerivEstimate {
  EstimateReport report;
  std::optional<QuadrantSign> sign;
  double first_order_residual = 0.0;
};

namespace detail {

inline ScalarField2 slope_field(const ScalarField2& f, Point2 a) {
  return ScalarField2(
      [f, a](Point2 x) -> EvalOutcome {
        if (!nsim(a, x)) return EvalOutcome::fail("x ~ a");
        try {
          return EvalOutcome::ok(mean_slope(f, a, x));
        } catch (const DomainError& e) {
          return EvalOutcome::fail(e.what());
        }
      },
      f.domain_hint);
}

}  // namespace detail

/// Double derivative f'(a) = lim_{x ~> a} m_a^x(f). Without a sign all
/// four signed estimates must converge and agree within tol.
inline DerivEstimate double_derivative(const ScalarField2& f, Point2 a,
                                       std::optional<QuadrantSign> sign =
                                           std::nullopt,
                                       int steps = 48, double tol = 1e-6) {
  DerivEstimate out;
  out.sign = sign;
  const ScalarField2 slopes = detail::slope_field(f, a);
  // rounding of the corner evaluations, divided by the net box area
  double mag = 1.0;
  if (EvalOutcome o = f(a); o.has_value()) mag = std::max(1.0, std::abs(*o));
  const double net_scale = detail::limit_scale(slopes, ExtendedPoint2(a));
  auto noise = [mag, net_scale](double s) {
    const double side = s * net_scale;
    return 8.0 * std::numeric_limits<double>::epsilon() * mag / (side * side);
  };
  if (sign) {
    out.report =
        double_limit(slopes, ExtendedPoint2(a), *sign, steps, tol, noise);
    out.first_order_residual = out.report.residual;
    return out;
  }

  std::array<EstimateReport, 4> reps;
  long evals = 0;
  bool all_converged = true;
  bool any_diverged = false;
  for (int i = 0; i < 4; ++i) {
    reps[i] = double_limit(slopes, ExtendedPoint2(a), kAllSigns[i], steps, tol,
                           noise);
    evals += reps[i].evaluations;
    if (reps[i].verdict != Verdict::Converged) all_converged = false;
    if (reps[i].verdict == Verdict::Diverged) any_diverged = true;
  }
  EstimateReport& rep = out.report;
  rep = reps[0];
  rep.evaluations = evals;
  if (all_converged) {
    double lo = kInf, hi = -kInf, sum = 0.0;
    for (const auto& r : reps) {
      lo = std::min(lo, *r.value);
      hi = std::max(hi, *r.value);
      sum += *r.value;
    }
    const double disagreement = hi - lo;
    if (disagreement <= tol) {
      rep.verdict = Verdict::Converged;
      rep.value = sum / 4.0;
      rep.residual = std::max(rep.residual, disagreement);
      out.first_order_residual = rep.residual;
    } else if (disagreement > 10.0 * tol) {
      rep.verdict = Verdict::Diverged;
      rep.value.reset();
      rep.diagnostic = "signed estimates disagree";
    } else {
      rep.verdict = Verdict::Inconclusive;
      rep.value.reset();
      rep.diagnostic = "signed estimates disagree marginally";
    }
  } else {
    rep.verdict = any_diverged ? Verdict::Diverged : Verdict::Inconclusive;
    rep.value.reset();
    if (rep.diagnostic.empty())
      rep.diagnostic = "a signed estimate failed to converge";
  }
  return out;
}

/// Symmetric cross-difference estimate of the double derivative at x
/// over the box [x-h, x+h]; one Richardson level (h, h/2).
inline double cross_slope(const ScalarField2& f, Point2 x, double h1,
                          double h2) {
  return delta2(f, {x.x1 - h1, x.x2 - h2}, {x.x1 + h1, x.x2 + h2}) /
         (4.0 * h1 * h2);
}

inline double cross_slope_richardson(const ScalarField2& f, Point2 x,
                                     double h1, double h2) {
  const double c = cross_slope(f, x, h1, h2);
  const double fine = cross_slope(f, x, h1 * 0.5, h2 * 0.5);
  return (4.0 * fine - c) / 3.0;
}

struct MixedPartialsReport {
  double f12 = 0.0;
  double f21 = 0.0;
  double dd = 0.0;
  bool agree = false;
};

/// Schwarz-type cross check: f12 and f21 by nested central differences
/// with Richardson extrapolation, against the double derivative.
inline MixedPartialsReport mixed_partials_check(const ScalarField2& f,
                                                Point2 a, double h0 = 1e-2,
                                                int steps = 3,
                                                double tol = 1e-6) {
  // Nested central differences; the inner step is kept a quarter of the
  // outer one so the two iteration orders are numerically distinct.
  auto nested = [&](bool x1_inner, double h) {
    const double hin = 0.25 * h;
    auto inner = [&](double t) {
      if (x1_inner)
        return (f.at({a.x1 + hin, t}) - f.at({a.x1 - hin, t})) / (2.0 * hin);
      return (f.at({t, a.x2 + hin}) - f.at({t, a.x2 - hin})) / (2.0 * hin);
    };
    if (x1_inner)
      return (inner(a.x2 + h) - inner(a.x2 - h)) / (2.0 * h);
    return (inner(a.x1 + h) - inner(a.x1 - h)) / (2.0 * h);
  };
  auto richardson = [&](bool x1_inner) {
    std::vector<double> row;
    double h = h0;
    for (int k = 0; k < std::max(2, steps); ++k, h *= 0.5)
      row.push_back(nested(x1_inner, h));
    // standard O(h^2) Richardson tableau
    for (std::size_t lvl = 1; lvl < row.size(); ++lvl) {
      const double w = std::pow(4.0, static_cast<double>(lvl));
      for (std::size_t i = row.size() - 1; i >= lvl; --i)
        row[i] = (w * row[i] - row[i - 1]) / (w - 1.0);
    }
    return row.back();
  };

  MixedPartialsReport rep;
  rep.f12 = richardson(true);
  rep.f21 = richardson(false);
  DerivEstimate d = double_derivative(f, a, std::nullopt, 48, tol);
  rep.dd = d.report.value.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.agree = d.report.verdict == Verdict::Converged &&
              std::abs(rep.f12 - rep.f21) <= tol &&
              std::abs(rep.dd - rep.f12) <= tol &&
              std::abs(rep.dd - rep.f21) <= tol;
  return rep;
}

/// Intermediate value point: finds c strictly inside i with f(c) = d
/// (within tol), d interior to the corner-value hull. Brackets on a
/// sample lattice, then bisects along the bracketing segment.
inline Point2 intermediate_point(const ScalarField2& f, const Interval2& i,
                                 double d, double tol = 1e-9,
                                 int sample_grid = 33) {
  if (!i.finite()) throw UsageError("intermediate_point: interval not finite");
  std::optional<Point2> below, above;
  for (int p = 1; p < sample_grid && !(below && above); ++p)
    for (int q = 1; q < sample_grid && !(below && above); ++q) {
      const Point2 x{i.lower.x1 + i.span1() * p / sample_grid,
                     i.lower.x2 + i.span2() * q / sample_grid};
      const double v = f.at(x);
      if (v < d && !below) below = x;
      if (v > d && !above) above = x;
    }
  if (!below || !above)
    throw UsageError("intermediate_point: no bracket for d within interval");
  Point2 lo = *below, hi = *above;
  for (int it = 0; it < 200; ++it) {
    const Point2 mid{0.5 * (lo.x1 + hi.x1), 0.5 * (lo.x2 + hi.x2)};
    const double v = f.at(mid);
    if (std::abs(v - d) <= tol) return mid;
    (v < d ? lo : hi) = mid;
  }
  return {0.5 * (lo.x1 + hi.x1), 0.5 * (lo.x2 + hi.x2)};
}

struct MeanValueResult {
  Point2 c;
  double target = 0.0;
  double achieved = 0.0;
  double residual = 0.0;
};

namespace detail {

// One step of the Rolle construction: given the square [p, p+span] with
// vanishing double difference, find q with Delta_q^{q+span/2} = 0 via
// the four-anchor tiling identity and 1-D bisection on the continuous
// map g(x) = Delta_x^{x+h}(f).
struct RolleState {
  Point2 p;
  double s1, s2;
};

inline double rolle_g(const ScalarField2& f, Point2 x, double h1, double h2) {
  return delta2(f, x, {x.x1 + h1, x.x2 + h2});
}

inline RolleState rolle_halve(const ScalarField2& f, const RolleState& st,
                              double zero_eps) {
  const double h1 = 0.5 * st.s1, h2 = 0.5 * st.s2;
  const std::array<Point2, 4> anchors = {
      Point2{st.p.x1, st.p.x2}, Point2{st.p.x1, st.p.x2 + h2},
      Point2{st.p.x1 + h1, st.p.x2}, Point2{st.p.x1 + h1, st.p.x2 + h2}};
  std::array<double, 4> g{};
  for (int k = 0; k < 4; ++k) g[k] = rolle_g(f, anchors[k], h1, h2);

  if (std::abs(g[0]) <= zero_eps) return {st.p, h1, h2};

  // g[0] != 0 and the four anchors sum to Delta over the whole square
  // (= 0), so some anchor has the opposite sign. Bisect between them.
  int opp = -1;
  for (int k = 1; k < 4; ++k)
    if ((g[0] > 0.0) != (g[k] > 0.0)) {
      opp = k;
      break;
    }
  if (opp < 0) {
    // Numerically flat: all anchors on one side within noise. Recurse
    // on the anchor square with the smallest |g|.
    int best = 0;
    for (int k = 1; k < 4; ++k)
      if (std::abs(g[k]) < std::abs(g[best])) best = k;
    return {anchors[best], h1, h2};
  }

  Point2 lo = anchors[0], hi = anchors[opp];
  double glo = g[0];
  for (int it = 0; it < 60; ++it) {
    const Point2 mid{0.5 * (lo.x1 + hi.x1), 0.5 * (lo.x2 + hi.x2)};
    const double gm = rolle_g(f, mid, h1, h2);
    if (gm == 0.0) return {mid, h1, h2};
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return {{0.5 * (lo.x1 + hi.x1), 0.5 * (lo.x2 + hi.x2)}, h1, h2};
}

// Axis polish: the halving loop bottoms out when the double difference
// over tiny squares drops below binary64 rounding noise. A bisection on
// the sign of a Richardson cross-difference recovers the lost digits
// whenever the derivative changes sign across c along an axis.
inline Point2 rolle_polish(const ScalarField2& f, Point2 c, double w1,
                           double w2, double fd1, double fd2) {
  auto deriv = [&](Point2 x) {
    return cross_slope_richardson(f, x, fd1, fd2);
  };
  Point2 best = c;
  double best_abs = std::abs(deriv(c));
  for (int axis = 0; axis < 2; ++axis) {
    const double w = axis == 0 ? w1 : w2;
    auto att = [&](double t) {
      return axis == 0 ? Point2{t, c.x2} : Point2{c.x1, t};
    };
    double lo = (axis == 0 ? c.x1 : c.x2) - w;
    double hi = (axis == 0 ? c.x1 : c.x2) + w;
    double dlo, dhi;
    try {
      dlo = deriv(att(lo));
      dhi = deriv(att(hi));
    } catch (const DomainError&) {
      continue;
    }
    if ((dlo > 0.0) == (dhi > 0.0)) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double dm = deriv(att(mid));
      if ((dm > 0.0) == (dlo > 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    const Point2 cand = att(0.5 * (lo + hi));
    const double cand_abs = std::abs(deriv(cand));
    if (cand_abs < best_abs) {
      best = cand;
      best_abs = cand_abs;
    }
  }
  return best;
}

}  // namespace detail

/// Constructive double Rolle: the interval must carry (numerically)
/// vanishing double difference; returns c strictly inside with the
/// double derivative estimate as `achieved` against target 0.
inline MeanValueResult rolle_solve(const ScalarField2& f, const Interval2& i,
                                   double tol = 1e-6, int max_halvings = 40) {
  if (!i.finite()) throw UsageError("rolle_solve: interval not finite");
  const Point2 a = i.lower.as_point();
  const Point2 b = i.upper.as_point();
  double scale = 1.0;
  for (const Point2& q :
       {a, b, Point2{a.x1, b.x2}, Point2{b.x1, a.x2}})
    scale = std::max(scale, std::abs(f.at(q)));
  const double total = delta2(f, a, b);
  if (std::abs(total) > tol * scale)
    throw UsageError("rolle_solve: Rolle hypothesis violated (|Delta| = " +
                     std::to_string(std::abs(total)) + ")");

  const double zero_eps = 8.0 * std::numeric_limits<double>::epsilon() * scale;
  detail::RolleState st{a, i.span1(), i.span2()};
  const double stop1 = i.span1() * std::ldexp(1.0, -26);
  const double stop2 = i.span2() * std::ldexp(1.0, -26);
  for (int k = 0; k < max_halvings && (st.s1 > stop1 || st.s2 > stop2); ++k)
    st = detail::rolle_halve(f, st, zero_eps);

  Point2 c{st.p.x1 + 0.5 * st.s1, st.p.x2 + 0.5 * st.s2};
  c = detail::rolle_polish(f, c, 1e-3 * i.span1(), 1e-3 * i.span2(),
                           1e-4 * i.span1(), 1e-4 * i.span2());
  // keep c strictly interior
  c.x1 = std::clamp(c.x1, std::nextafter(a.x1, b.x1),
                    std::nextafter(b.x1, a.x1));
  c.x2 = std::clamp(c.x2, std::nextafter(a.x2, b.x2),
                    std::nextafter(b.x2, a.x2));

  MeanValueResult out;
  out.c = c;
  out.target = 0.0;
  DerivEstimate d = double_derivative(f, c, std::nullopt, 48, tol);
  out.achieved = d.report.value.value_or(
      std::numeric_limits<double>::quiet_NaN());
  out.residual = std::abs(out.achieved - out.target);
  return out;
}

/// Double Lagrange MVT: c with f'(c) = m_a^b(f), via Rolle on the
/// auxiliary g(x) = f(x) - m (x1-a1)(x2-a2).
inline MeanValueResult mvt_solve(const ScalarField2& f, const Interval2& i,
                                 double tol = 1e-6, int max_halvings = 40) {
  if (!i.finite()) throw UsageError("mvt_solve: interval not finite");
  const Point2 a = i.lower.as_point();
  const Point2 b = i.upper.as_point();
  const double m = mean_slope(f, a, b);
  ScalarField2 aux(
      [f, a, m](Point2 x) -> EvalOutcome {
        EvalOutcome o = f(x);
        if (!o.has_value()) return o;
        return EvalOutcome::ok(*o - m * (x.x1 - a.x1) * (x.x2 - a.x2));
      },
      f.domain_hint ? f.domain_hint : std::optional<Interval2>(i));
  MeanValueResult r = rolle_solve(aux, i, tol, max_halvings);
  MeanValueResult out;
  out.c = r.c;
  out.target = m;
  DerivEstimate d = double_derivative(f, out.c, std::nullopt, 48, tol);
  out.achieved = d.report.value.value_or(
      std::numeric_limits<double>::quiet_NaN());
  out.residual = std::abs(out.achieved - out.target);
  return out;
}

struct CauchyResult {
  Point2 c;
  double lhs = 0.0;  // f'(c) * Delta_a^b(g)
  double rhs = 0.0;  // g'(c) * Delta_a^b(f)
};

/// Double Cauchy MVT: c with f'(c) Delta(g) = g'(c) Delta(f).
inline CauchyResult cauchy_mvt_solve(const ScalarField2& f,
                                     const ScalarField2& g, const Interval2& i,
                                     double tol = 1e-6,
                                     int max_halvings = 40) {
  if (!i.finite()) throw UsageError("cauchy_mvt_solve: interval not finite");
  const Point2 a = i.lower.as_point();
  const Point2 b = i.upper.as_point();
  const double df = delta2(f, a, b);
  const double dg = delta2(g, a, b);
  double scale_g = 1.0;
  for (const Point2& q : {a, b, Point2{a.x1, b.x2}, Point2{b.x1, a.x2}})
    scale_g = std::max(scale_g, std::abs(g.at(q)));

  Point2 c;
  if (std::abs(dg) <= tol * scale_g) {
    c = rolle_solve(g, i, tol, max_halvings).c;  // Case 1 of the proof
  } else {
    ScalarField2 aux(
        [f, g, ratio = df / dg](Point2 x) -> EvalOutcome {
          EvalOutcome of = f(x);
          if (!of.has_value()) return of;
          EvalOutcome og = g(x);
          if (!og.has_value()) return og;
          return EvalOutcome::ok(*of - ratio * *og);
        },
        f.domain_hint ? f.domain_hint : std::optional<Interval2>(i));
    c = rolle_solve(aux, i, tol, max_halvings).c;
  }
  CauchyResult out;
  out.c = c;
  const double fpc = double_derivative(f, c, std::nullopt, 48, tol)
                         .report.value.value_or(
                             std::numeric_limits<double>::quiet_NaN());
  const double gpc = double_derivative(g, c, std::nullopt, 48, tol)
                         .report.value.value_or(
                             std::numeric_limits<double>::quiet_NaN());
  out.lhs = fpc * dg;
  out.rhs = gpc * df;
  return out;
}

enum class Monotonicity {
  DoubleIncreasing,
  DoubleDecreasing,
  DoubleConstant,
  Mixed
};

inline const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::DoubleIncreasing: return "double_increasing";
    case Monotonicity::DoubleDecreasing: return "double_decreasing";
    case Monotonicity::DoubleConstant: return "double_constant";
    case Monotonicity::Mixed: return "mixed";
  }
  return "?";
}

/// Derivative-sign classification on an interior grid.
inline Monotonicity monotonicity_classify(const ScalarField2& f,
                                          const Interval2& i, int grid = 5,
                                          double tol = 1e-6) {
  if (!i.finite())
    throw UsageError("monotonicity_classify: interval not finite");
  bool all_pos = true, all_neg = true, all_zero = true;
  for (int p = 0; p < grid; ++p)
    for (int q = 0; q < grid; ++q) {
      const Point2 x{i.lower.x1 + i.span1() * (p + 0.5) / grid,
                     i.lower.x2 + i.span2() * (q + 0.5) / grid};
      DerivEstimate d = double_derivative(f, x, std::nullopt, 48, tol);
      if (d.report.verdict != Verdict::Converged) return Monotonicity::Mixed;
      const double v = *d.report.value;
      if (!(v > tol)) all_pos = false;
      if (!(v < -tol)) all_neg = false;
      if (std::abs(v) > tol) all_zero = false;
    }
  if (all_zero) return Monotonicity::DoubleConstant;
  if (all_pos) return Monotonicity::DoubleIncreasing;
  if (all_neg) return Monotonicity::DoubleDecreasing;
  return Monotonicity::Mixed;
}

enum class StationaryClass { DoubleMax, DoubleMin, Neither, Unknown };

inline const char* to_string(StationaryClass c) {
  switch (c) {
    case StationaryClass::DoubleMax: return "double_max";
    case StationaryClass::DoubleMin: return "double_min";
    case StationaryClass::Neither: return "neither";
    case StationaryClass::Unknown: return "unknown";
  }
  return "?";
}

struct CriticalPoint {
  Point2 location;
  enum class Kind { Stationary, Nondifferentiable } kind = Kind::Stationary;
  StationaryClass classification = StationaryClass::Unknown;
};

/// First-derivative-test sector sampling around a stationary point c.
/// Sector pattern (-,-,+,+) over ((a,c),(c,b),(lower-right),(upper-left))
/// means double maximum; (+,+,-,-) double minimum; a uniform sign is
/// clause (c) of the test ("neither").
inline StationaryClass classify_stationary(const ScalarField2& f, Point2 c,
                                           const Interval2& i,
                                           int sector_samples = 16,
                                           double tol = 1e-6) {
  if (!i.finite())
    throw UsageError("classify_stationary: interval not finite");
  const Point2 a = i.lower.as_point();
  const Point2 b = i.upper.as_point();
  // sectors: (a,c), (c,b), ((a1,c2),(c1,b2)), ((c1,a2),(b1,c2))
  struct Sector {
    double lo1, hi1, lo2, hi2;
  };
  const std::array<Sector, 4> sectors = {
      Sector{a.x1, c.x1, a.x2, c.x2}, Sector{c.x1, b.x1, c.x2, b.x2},
      Sector{a.x1, c.x1, c.x2, b.x2}, Sector{c.x1, b.x1, a.x2, c.x2}};
  // radial + angular sampling at 3 depths toward c
  const int per_radius = std::max(1, sector_samples / 3);
  std::array<int, 4> sgn{};  // +1 all positive, -1 all negative, 0 mixed
  for (int sidx = 0; sidx < 4; ++sidx) {
    const Sector& s = sectors[sidx];
    bool pos = true, neg = true;
    for (int r = 1; r <= 3; ++r)
      for (int k = 0; k < per_radius; ++k) {
        const double depth = r / 4.0;  // fraction of sector span toward c
        const double t = (k + 0.5) / per_radius;
        // points strictly inside the open sector
        const double x1 = s.lo1 + (s.hi1 - s.lo1) * (0.5 + (t - 0.5) * depth);
        const double x2 =
            s.lo2 + (s.hi2 - s.lo2) * (0.5 + (0.5 - t) * depth * 0.9);
        const double v = cross_slope_richardson(
            f, {x1, x2}, (s.hi1 - s.lo1) * 1e-4, (s.hi2 - s.lo2) * 1e-4);
        if (!std::isfinite(v)) return StationaryClass::Unknown;
        if (!(v > tol)) pos = false;
        if (!(v < -tol)) neg = false;
      }
    sgn[sidx] = pos ? 1 : neg ? -1 : 0;
  }
  if (sgn[0] == -1 && sgn[1] == -1 && sgn[2] == 1 && sgn[3] == 1)
    return StationaryClass::DoubleMax;
  if (sgn[0] == 1 && sgn[1] == 1 && sgn[2] == -1 && sgn[3] == -1)
    return StationaryClass::DoubleMin;
  if ((sgn[0] == 1 && sgn[1] == 1 && sgn[2] == 1 && sgn[3] == 1) ||
      (sgn[0] == -1 && sgn[1] == -1 && sgn[2] == -1 && sgn[3] == -1))
    return StationaryClass::Neither;
  return StationaryClass::Unknown;
}

/// Grid scan for stationary points: cells whose cross-difference
/// derivative changes sign along both axes are refined by per-axis
/// bisection at the cell midlines.
inline std::vector<CriticalPoint> critical_points(const ScalarField2& f,
                                                  const Interval2& i,
                                                  int grid = 9,
                                                  double tol = 1e-6) {
  if (!i.finite()) throw UsageError("critical_points: interval not finite");
  std::vector<CriticalPoint> found;
  const double h1 = i.span1() / (grid + 1);
  const double h2 = i.span2() / (grid + 1);
  const double fd1 = 1e-4 * i.span1(), fd2 = 1e-4 * i.span2();
  auto deriv = [&](double x1, double x2) {
    return cross_slope_richardson(f, {x1, x2}, fd1, fd2);
  };

  std::vector<std::vector<double>> d(grid, std::vector<double>(grid));
  std::vector<std::vector<bool>> ok(grid, std::vector<bool>(grid, true));
  for (int p = 0; p < grid; ++p)
    for (int q = 0; q < grid; ++q) {
      const double x1 = i.lower.x1 + h1 * (p + 1);
      const double x2 = i.lower.x2 + h2 * (q + 1);
      try {
        d[p][q] = deriv(x1, x2);
        if (!std::isfinite(d[p][q])) ok[p][q] = false;
      } catch (const DomainError&) {
        ok[p][q] = false;
      }
    }

  auto dedupe = [&](Point2 c) {
    for (const auto& cp : found)
      if (std::abs(cp.location.x1 - c.x1) < h1 &&
          std::abs(cp.location.x2 - c.x2) < h2)
        return true;
    return false;
  };

  for (int p = 0; p + 1 < grid; ++p)
    for (int q = 0; q + 1 < grid; ++q) {
      if (!(ok[p][q] && ok[p + 1][q] && ok[p][q + 1] && ok[p + 1][q + 1]))
        continue;
      const double d00 = d[p][q], d10 = d[p + 1][q];
      const double d01 = d[p][q + 1], d11 = d[p + 1][q + 1];
      const bool change_x1 = d00 * d10 < 0.0 || d01 * d11 < 0.0;
      const bool change_x2 = d00 * d01 < 0.0 || d10 * d11 < 0.0;
      if (!(change_x1 && change_x2)) continue;
      const double lo1 = i.lower.x1 + h1 * (p + 1);
      const double hi1 = lo1 + h1;
      const double lo2 = i.lower.x2 + h2 * (q + 1);
      const double hi2 = lo2 + h2;
      const double mid1 = 0.5 * (lo1 + hi1), mid2 = 0.5 * (lo2 + hi2);
      // c1 from the sign change along x1 at the x2 midline, c2 from the
      // sign change along x2 at the x1 midline
      auto bisect = [&](auto&& fn, double lo, double hi) {
        double flo = fn(lo);
        if (flo * fn(hi) > 0.0) return 0.5 * (lo + hi);
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = fn(mid);
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      };
      const double c1 =
          bisect([&](double t) { return deriv(t, mid2); }, lo1, hi1);
      const double c2 =
          bisect([&](double t) { return deriv(mid1, t); }, lo2, hi2);
      const Point2 c{c1, c2};
      if (dedupe(c)) continue;
      DerivEstimate de = double_derivative(f, c, std::nullopt, 48, tol);
      CriticalPoint cp;
      cp.location = c;
      if (de.report.verdict == Verdict::Converged &&
          std::abs(*de.report.value) <= tol) {
        cp.kind = CriticalPoint::Kind::Stationary;
        cp.classification = classify_stationary(f, c, i, 16, tol);
      } else if (de.report.verdict != Verdict::Converged) {
        cp.kind = CriticalPoint::Kind::Nondifferentiable;
        cp.classification = StationaryClass::Unknown;
      } else {
        continue;  // derivative converged but is not ~0: not critical
      }
      found.push_back(cp);
    }
  return found;
}

}  // namespace bicalc
