#pragma once

// Double Newton and Riemann integration, fundamental-theorem probes,
// improper integrals over open/unbounded intervals, and change of
// variables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bicalc/core.hpp"
#include "bicalc/derivative.hpp"
#include "bicalc/difference.hpp"

namespace bicalc {

/// Newton double integral of f over a closed finite interval, given a
/// primitive F with F' = f: the double difference of F over the corners.
inline double newton_integral(const ScalarField2& primitive,
                              const Interval2& i) {
  if (!i.finite()) throw UsageError("newton_integral: interval not finite");
  return delta2(primitive, i.lower.as_point(), i.upper.as_point());
}

/// Accumulation field G(x) = integral of f over [lower, x], from a
/// primitive F: G(x) = Delta_lower^x(F).
inline ScalarField2 accumulate_field(const ScalarField2& primitive,
                                     Point2 lower) {
  return ScalarField2(
      [primitive, lower](Point2 x) -> EvalOutcome {
        try {
          return EvalOutcome::ok(delta2(primitive, lower, x));
        } catch (const DomainError& e) {
          return EvalOutcome::fail(e.what());
        }
      },
      primitive.domain_hint);
}

enum class SampleRule { Midpoint, Corner, Random };

inline const char* to_string(SampleRule r) {
  switch (r) {
    case SampleRule::Midpoint: return "midpoint";
    case SampleRule::Corner: return "corner";
    case SampleRule::Random: return "random";
  }
  return "?";
}

struct RiemannConfig {
  int initial_m = 4;
  int initial_n = 4;
  int max_refinements = 12;
  SampleRule rule = SampleRule::Midpoint;
  std::uint64_t seed = 0;
  double tol = 1e-6;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit_uniform(std::uint64_t key) {
  return (splitmix64(key) >> 11) * 0x1.0p-53;
}

// Pairwise (tree) reduction; deterministic for a fixed input order.
inline double pairwise_sum(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) v[k] = v[2 * k] + v[2 * k + 1];
    if (n % 2) v[half] = v[n - 1], ++half;
    n = half;
  }
  return v[0];
}

}  // namespace detail

/// Riemann double sum over uniform m x n partitions, refined dyadically
/// until two successive refinements agree within cfg.tol. Cells are
/// visited row-major; each row is pairwise-reduced, then the row sums
/// are pairwise-reduced, so the summation order is fixed.
inline EstimateReport riemann_integral(const ScalarField2& f,
                                       const Interval2& i,
                                       const RiemannConfig& cfg = {}) {
  if (!i.finite()) throw UsageError("riemann_integral: interval not finite");
  EstimateReport rep;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= cfg.max_refinements; ++k) {
    const long m = static_cast<long>(cfg.initial_m) << k;
    const long n = static_cast<long>(cfg.initial_n) << k;
    const double h1 = i.span1() / static_cast<double>(m);
    const double h2 = i.span2() / static_cast<double>(n);
    std::vector<double> rows(static_cast<std::size_t>(m));
    std::vector<double> cells(static_cast<std::size_t>(n));
    for (long p = 0; p < m; ++p) {
      for (long q = 0; q < n; ++q) {
        double u, v;
        switch (cfg.rule) {
          case SampleRule::Midpoint:
            u = 0.5;
            v = 0.5;
            break;
          case SampleRule::Corner:
            u = 0.0;
            v = 0.0;
            break;
          default: {
            const std::uint64_t key =
                detail::splitmix64(cfg.seed ^ (static_cast<std::uint64_t>(k)
                                               << 48)) ^
                (static_cast<std::uint64_t>(p) << 24) ^
                static_cast<std::uint64_t>(q);
            u = detail::unit_uniform(key);
            v = detail::unit_uniform(~key);
            break;
          }
        }
        const Point2 x{i.lower.x1 + h1 * (static_cast<double>(p) + u),
                       i.lower.x2 + h2 * (static_cast<double>(q) + v)};
        EvalOutcome o = f(x);
        ++rep.evaluations;
        if (!o.has_value()) {
          rep.verdict = Verdict::Inconclusive;
          rep.diagnostic = "evaluation failed at (" + std::to_string(x.x1) +
                           ", " + std::to_string(x.x2) + "): " + o.error;
          return rep;
        }
        cells[static_cast<std::size_t>(q)] = *o;
      }
      rows[static_cast<std::size_t>(p)] = detail::pairwise_sum(cells);
      cells.resize(static_cast<std::size_t>(n));
    }
    const double value = detail::pairwise_sum(rows) * h1 * h2;
    rep.trace.emplace_back(static_cast<double>(m) * static_cast<double>(n),
                           value);
    if (k > 0) {
      rep.residual = std::abs(value - prev);
      if (rep.residual <= cfg.tol) {
        rep.value = value;
        rep.verdict = Verdict::Converged;
        return rep;
      }
    }
    prev = value;
  }
  rep.value = prev;
  rep.verdict = Verdict::Inconclusive;
  rep.diagnostic = "refinement budget exhausted";
  return rep;
}

/// Integral mean value point: c inside i with f(c) * area = integral,
/// found by the Lagrange MVT applied to the primitive.
inline MeanValueResult integral_mean_point(const ScalarField2& primitive,
                                           const ScalarField2& f,
                                           const Interval2& i,
                                           double tol = 1e-6) {
  if (!i.finite())
    throw UsageError("integral_mean_point: interval not finite");
  MeanValueResult r = mvt_solve(primitive, i, tol);
  MeanValueResult out;
  out.c = r.c;
  out.target = newton_integral(primitive, i) / (i.span1() * i.span2());
  out.achieved = f.at(out.c);
  out.residual = std::abs(out.achieved - out.target);
  return out;
}

struct Ftc1Report {
  struct Sample {
    Point2 point;
    double expected = 0.0;  // f at the point
    double estimate = 0.0;  // derivative of the accumulation map
    double error = 0.0;
    bool pass = false;
  };
  std::vector<Sample> samples;
  bool pass = false;
  double worst_error = 0.0;
};

/// Probes d/dx of G(x) = integral over [lower, x] against f at sampled
/// points. The derivative is estimated from sub-box Riemann integrals
/// over shrinking squares at the point (the sub-box over [b, b+d]
/// equals Delta_b^{b+d}(G) by additivity); at boundary points only the
/// inward-pointing quadrants are used.
inline Ftc1Report ftc1_check(const ScalarField2& f, const Interval2& i,
                             int sample_points = 5, double tol = 1e-4) {
  if (!i.finite()) throw UsageError("ftc1_check: interval not finite");
  Ftc1Report rep;

  std::vector<Point2> pts;
  const int g = std::max(1, sample_points);
  for (int p = 0; p < g; ++p)
    pts.push_back({i.lower.x1 + i.span1() * (p + 0.5) / g,
                   i.lower.x2 + i.span2() * ((g - p) - 0.5) / g});
  // boundary representatives: one point per edge plus the lower corner
  pts.push_back({i.lower.x1, i.lower.x2 + 0.4 * i.span2()});
  pts.push_back({i.upper.x1, i.lower.x2 + 0.6 * i.span2()});
  pts.push_back({i.lower.x1 + 0.4 * i.span1(), i.lower.x2});
  pts.push_back({i.lower.x1 + 0.6 * i.span1(), i.upper.x2});
  pts.push_back(i.lower.as_point());

  for (const Point2& b : pts) {
    Ftc1Report::Sample s;
    s.point = b;
    s.expected = f.at(b);
    double best = kInf;
    for (QuadrantSign qs : kAllSigns) {
      const double d1 = sign1(qs), d2 = sign2(qs);
      // skip quadrants that leave the interval
      if ((d1 > 0 && b.x1 >= i.upper.x1) || (d1 < 0 && b.x1 <= i.lower.x1) ||
          (d2 > 0 && b.x2 >= i.upper.x2) || (d2 < 0 && b.x2 <= i.lower.x2))
        continue;
      double reach1 = d1 > 0 ? i.upper.x1 - b.x1 : b.x1 - i.lower.x1;
      double reach2 = d2 > 0 ? i.upper.x2 - b.x2 : b.x2 - i.lower.x2;
      double del = 0.25 * std::min(reach1, reach2);
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (int k = 0; k < 14; ++k, del *= 0.5) {
        const double x1b = b.x1 + d1 * del, x2b = b.x2 + d2 * del;
        Interval2 box{{std::min(b.x1, x1b), std::min(b.x2, x2b)},
                      {std::max(b.x1, x1b), std::max(b.x2, x2b)}};
        RiemannConfig rc;
        rc.initial_m = rc.initial_n = 8;
        rc.max_refinements = 0;  // fixed 8x8 midpoint panel per box
        EstimateReport r = riemann_integral(f, box, rc);
        if (r.trace.empty()) break;
        const double m = r.trace.back().second / (del * del);
        if (k > 0 && std::isfinite(prev))
          best = std::min(best, std::abs(m - s.expected));
        prev = m;
      }
    }
    s.estimate = s.expected + (best == kInf ? kInf : best);  // for reporting
    s.error = best;
    s.pass = best <= tol;
    rep.worst_error = std::max(rep.worst_error, s.error);
    rep.samples.push_back(s);
  }
  rep.pass = std::all_of(rep.samples.begin(), rep.samples.end(),
                         [](const Ftc1Report::Sample& s) { return s.pass; });
  return rep;
}

struct Ftc2Report {
  double newton = 0.0;
  EstimateReport riemann;
  double error = 0.0;
  bool pass = false;
};

/// Compares the Newton integral (via a primitive) with the Riemann sum.
inline Ftc2Report ftc2_check(const ScalarField2& primitive,
                             const ScalarField2& f, const Interval2& i,
                             const RiemannConfig& cfg = {}) {
  Ftc2Report rep;
  rep.newton = newton_integral(primitive, i);
  rep.riemann = riemann_integral(f, i, cfg);
  if (rep.riemann.value) {
    rep.error = std::abs(*rep.riemann.value - rep.newton);
    rep.pass = rep.riemann.verdict == Verdict::Converged &&
               rep.error <= 10.0 * cfg.tol;
  }
  return rep;
}

struct ImproperResult {
  enum class Kind { Convergent, Divergent, Inconclusive } kind =
      Kind::Inconclusive;
  std::optional<double> value;
  // corner limits A (upper,upper), B (lower,lower), C ((u1,l2)),
  // D ((l1,u2)) when available
  std::array<std::optional<double>, 4> corners;
  // two path-profile limits witnessing divergence (or agreement)
  std::optional<double> witness_a, witness_b;
  std::string diagnostic;
  long evaluations = 0;
};

namespace detail {

// Limit of F at an interval corner, holding closed coordinates fixed
// and approaching open/unbounded ones from inside. dir is the approach
// direction for each open coordinate.
inline EstimateReport corner_limit(const ScalarField2& F, double t1, double t2,
                                   bool open1, bool open2, double dir1,
                                   double dir2, double scale, int steps,
                                   double tol) {
  EstimateReport rep;
  if (!open1 && !open2) {
    EvalOutcome o = F({t1, t2});
    ++rep.evaluations;
    if (o.has_value()) {
      rep.value = *o;
      rep.verdict = Verdict::Converged;
    } else {
      rep.verdict = Verdict::Inconclusive;
      rep.diagnostic = o.error;
    }
    return rep;
  }
  const int nfam = (open1 && open2) ? 3 : 2;
  static constexpr double kMults[3][2] = {{1, 1}, {1, 2}, {2, 1}};
  double best_score = kInf, min_spread = kInf, prev_est = kInf;
  bool any_step = false;
  double s = 1.0 / 8.0;
  for (int k = 0; k < steps; ++k, s *= 0.5) {
    std::vector<double> v;
    bool all_ok = true;
    for (int fam = 0; fam < nfam && all_ok; ++fam) {
      // with a single open coordinate the families differ by the
      // multiplier on that coordinate alone
      const double m1 =
          (open1 && open2) ? kMults[fam][0] : static_cast<double>(fam + 1);
      const double m2 =
          (open1 && open2) ? kMults[fam][1] : static_cast<double>(fam + 1);
      const double x1 = open1 ? net_coord(t1, dir1, m1, s, scale) : t1;
      const double x2 = open2 ? net_coord(t2, dir2, m2, s, scale) : t2;
      EvalOutcome o = F({x1, x2});
      ++rep.evaluations;
      if (!o.has_value()) {
        all_ok = false;
        rep.diagnostic = o.error;
        break;
      }
      v.push_back(*o);
    }
    if (!all_ok) {
      if (!any_step) continue;
      break;
    }
    // with one open coordinate, families 0 and 1 may coincide when the
    // multiplier hits the closed coordinate; keep whatever is distinct
    any_step = true;
    const double est = v[0];
    const double spread =
        *std::max_element(v.begin(), v.end()) -
        *std::min_element(v.begin(), v.end());
    rep.trace.emplace_back(s, est);
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
  } else if (best_score <= tol) {
    rep.verdict = Verdict::Converged;
  } else if (min_spread > 10.0 * tol) {
    rep.verdict = Verdict::Diverged;
    rep.value.reset();
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace detail

/// Improper double Newton integral of f over i from a primitive F.
/// First tries the four corner limits (A + B - C - D); when individual
/// corners fail to converge, falls back to joint double-difference nets
/// along two path profiles — agreement means the joint limit exists
/// even though corner limits do not, disagreement is a divergence
/// witness pair.
inline ImproperResult improper_newton_integral(const ScalarField2& F,
                                               const Interval2& i,
                                               int steps = 48,
                                               double tol = 1e-6) {
  ImproperResult out;
  const double scale =
      (i.finite()) ? 0.25 * std::min(i.span1(), i.span2()) : 1.0;

  const bool open_l1 = !i.left_closed || std::isinf(i.lower.x1);
  const bool open_u1 = !i.right_closed || std::isinf(i.upper.x1);
  const bool open_l2 = !i.bottom_closed || std::isinf(i.lower.x2);
  const bool open_u2 = !i.top_closed || std::isinf(i.upper.x2);

  // corner order: A=(u1,u2), B=(l1,l2), C=(u1,l2), D=(l1,u2)
  struct Corner {
    double t1, t2;
    bool o1, o2;
    double d1, d2;
  };
  const std::array<Corner, 4> corners = {
      Corner{i.upper.x1, i.upper.x2, open_u1, open_u2, -1, -1},
      Corner{i.lower.x1, i.lower.x2, open_l1, open_l2, +1, +1},
      Corner{i.upper.x1, i.lower.x2, open_u1, open_l2, -1, +1},
      Corner{i.lower.x1, i.upper.x2, open_l1, open_u2, +1, -1}};

  std::array<EstimateReport, 4> reps;
  bool all_converged = true;
  for (int k = 0; k < 4; ++k) {
    const Corner& c = corners[k];
    reps[k] = detail::corner_limit(F, c.t1, c.t2, c.o1, c.o2, c.d1, c.d2,
                                   scale, steps, tol);
    out.evaluations += reps[k].evaluations;
    if (reps[k].verdict == Verdict::Converged)
      out.corners[static_cast<std::size_t>(k)] = reps[k].value;
    else
      all_converged = false;
  }
  if (all_converged) {
    out.kind = ImproperResult::Kind::Convergent;
    out.value = (*out.corners[0] + *out.corners[1]) -
                (*out.corners[2] + *out.corners[3]);
    return out;
  }

  // Joint net: Delta_x^y(F) with x near the lower corner and y near the
  // upper corner, along a diagonal profile and a skewed profile.
  auto joint = [&](double m2scale) -> EstimateReport {
    EstimateReport rep;
    double best_score = kInf, prev = kInf;
    bool any = false;
    double s = 1.0 / 8.0;
    for (int k = 0; k < steps; ++k, s *= 0.5) {
      const double x1 =
          open_l1 ? detail::net_coord(i.lower.x1, +1, 1.0, s, scale)
                  : i.lower.x1;
      const double x2 =
          open_l2 ? detail::net_coord(i.lower.x2, +1, m2scale, s, scale)
                  : i.lower.x2;
      const double y1 =
          open_u1 ? detail::net_coord(i.upper.x1, -1, 1.0, s, scale)
                  : i.upper.x1;
      const double y2 =
          open_u2 ? detail::net_coord(i.upper.x2, -1, m2scale, s, scale)
                  : i.upper.x2;
      EvalOutcome obb = F({y1, y2}), oaa = F({x1, x2});
      EvalOutcome oba = F({y1, x2}), oab = F({x1, y2});
      rep.evaluations += 4;
      if (!(obb.has_value() && oaa.has_value() && oba.has_value() &&
            oab.has_value())) {
        if (!any) continue;
        break;
      }
      any = true;
      // Pair the subtractions so that terms sharing a blow-up coordinate
      // cancel first; summing a divergent corner value with a bounded one
      // rounds the bounded contribution away entirely.
      const double vbb = *obb, vaa = *oaa, vba = *oba, vab = *oab;
      const double c1 = std::max(std::abs(vbb), std::abs(vba)) +
                        std::max(std::abs(vaa), std::abs(vab));
      const double c2 = std::max(std::abs(vbb), std::abs(vab)) +
                        std::max(std::abs(vaa), std::abs(vba));
      const double t = c1 <= c2 ? (vbb - vba) + (vaa - vab)
                                : (vbb - vab) + (vaa - vba);
      rep.trace.emplace_back(s, t);
      const double score = prev == kInf ? kInf : std::abs(t - prev);
      if (score <= best_score) {
        best_score = score;
        rep.value = t;
        rep.residual = score;
      }
      prev = t;
    }
    if (!any || !rep.value) {
      rep.verdict = Verdict::Inconclusive;
      rep.value.reset();
    } else if (best_score <= tol) {
      rep.verdict = Verdict::Converged;
    } else {
      rep.verdict = Verdict::Inconclusive;
    }
    return rep;
  };

  EstimateReport diag = joint(1.0);
  EstimateReport skew = joint(2.0);
  out.evaluations += diag.evaluations + skew.evaluations;
  out.witness_a = diag.value;
  out.witness_b = skew.value;
  if (diag.verdict == Verdict::Converged && skew.verdict == Verdict::Converged) {
    if (std::abs(*diag.value - *skew.value) <= 10.0 * tol) {
      out.kind = ImproperResult::Kind::Convergent;
      out.value = diag.value;
      out.diagnostic = "corner limits incomplete; joint limit agreed on "
                       "both path profiles";
    } else {
      out.kind = ImproperResult::Kind::Divergent;
      out.diagnostic = "path profiles reach different limits";
    }
    return out;
  }
  out.kind = ImproperResult::Kind::Inconclusive;
  out.diagnostic = "joint net did not settle";
  return out;
}

struct CovSpec {
  // substitution map (u,v) -> (x1,x2)
  ScalarField2 map1;  // x1 = h1(u,v)
  ScalarField2 map2;  // x2 = h2(u,v)
  std::optional<ScalarField2> jacobian;  // |det Dh|; numeric if absent
  Interval2 param_interval;              // (u,v)-domain
};

namespace detail {

inline double partial(const ScalarField2& g, Point2 p, int axis, double h) {
  const Point2 lo = axis == 0 ? Point2{p.x1 - h, p.x2}
                              : Point2{p.x1, p.x2 - h};
  const Point2 hi = axis == 0 ? Point2{p.x1 + h, p.x2}
                              : Point2{p.x1, p.x2 + h};
  return (g.at(hi) - g.at(lo)) / (2.0 * h);
}

inline ScalarField2 cov_integrand(const ScalarField2& f, const CovSpec& spec) {
  return ScalarField2(
      [f, spec](Point2 uv) -> EvalOutcome {
        EvalOutcome o1 = spec.map1(uv);
        if (!o1.has_value()) return o1;
        EvalOutcome o2 = spec.map2(uv);
        if (!o2.has_value()) return o2;
        EvalOutcome fv = f({*o1, *o2});
        if (!fv.has_value()) return fv;
        double jac;
        if (spec.jacobian) {
          EvalOutcome j = (*spec.jacobian)(uv);
          if (!j.has_value()) return j;
          jac = std::abs(*j);
        } else {
          const double h1 = 1e-5 * std::max(1.0, std::abs(uv.x1));
          const double h2 = 1e-5 * std::max(1.0, std::abs(uv.x2));
          try {
            const double a = partial(spec.map1, uv, 0, h1);
            const double b = partial(spec.map1, uv, 1, h2);
            const double c = partial(spec.map2, uv, 0, h1);
            const double d = partial(spec.map2, uv, 1, h2);
            jac = std::abs(a * d - b * c);
          } catch (const DomainError& e) {
            return EvalOutcome::fail(e.what());
          }
        }
        return EvalOutcome::ok(*fv * jac);
      },
      spec.param_interval);
}

}  // namespace detail

/// Change of variables: integrates f over the image of the parameter
/// interval as the integral of f(h(u,v)) |det Dh| in (u,v). With a
/// primitive of the transformed integrand the improper Newton machinery
/// is used; otherwise Riemann sums over an exhausting sequence of
/// compact sub-intervals.
inline ImproperResult change_of_variables_integral(
    const ScalarField2& f, const CovSpec& spec,
    std::optional<ScalarField2> primitive = std::nullopt, int steps = 48,
    double tol = 1e-6) {
  if (primitive)
    return improper_newton_integral(*primitive, spec.param_interval, steps,
                                    tol);

  const ScalarField2 g = detail::cov_integrand(f, spec);
  const Interval2& pi = spec.param_interval;
  ImproperResult out;
  double prev = std::numeric_limits<double>::quiet_NaN();
  const int stages = std::min(steps, 20);
  for (int k = 1; k <= stages; ++k) {
    auto shrink = [&](double lo, double hi, bool open_lo, bool open_hi,
                      double& slo, double& shi) {
      const double margin = std::ldexp(1.0, -k);
      if (std::isinf(lo))
        slo = -std::ldexp(1.0, k);
      else
        slo = open_lo ? lo + margin * (std::isinf(hi) ? 1.0 : (hi - lo)) : lo;
      if (std::isinf(hi))
        shi = std::ldexp(1.0, k);
      else
        shi = open_hi ? hi - margin * (std::isinf(lo) ? 1.0 : (hi - lo)) : hi;
    };
    double l1, u1, l2, u2;
    shrink(pi.lower.x1, pi.upper.x1, !pi.left_closed, !pi.right_closed, l1,
           u1);
    shrink(pi.lower.x2, pi.upper.x2, !pi.bottom_closed, !pi.top_closed, l2,
           u2);
    if (!(l1 < u1 && l2 < u2)) continue;
    Interval2 compact{{l1, l2}, {u1, u2}};
    RiemannConfig rc;
    rc.tol = tol * 0.25;
    rc.max_refinements = 14;
    EstimateReport r = riemann_integral(g, compact, rc);
    out.evaluations += r.evaluations;
    if (!r.value) {
      out.kind = ImproperResult::Kind::Inconclusive;
      out.diagnostic = "stage integral failed: " + r.diagnostic;
      return out;
    }
    if (k > 1 && std::isfinite(prev) &&
        std::abs(*r.value - prev) <= tol) {
      out.kind = ImproperResult::Kind::Convergent;
      out.value = *r.value;
      return out;
    }
    prev = *r.value;
  }
  out.kind = ImproperResult::Kind::Inconclusive;
  out.value = std::isfinite(prev) ? std::optional<double>(prev) : std::nullopt;
  out.diagnostic = "exhausting sequence did not settle";
  return out;
}

}  // namespace bicalc
