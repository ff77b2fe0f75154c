#pragma once

// The double difference operator
//
//   delta2(f, a, b) = f(b1,b2) - f(b1,a2) - f(a1,b2) + f(a1,a2)
//
// with its n-dimensional generalization, double-constant detection and
// the separable split, and sampling-based double continuity probes.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "bicalc/core.hpp"

namespace bicalc {

/// Four-corner alternating sum. Corners are summed positives first
/// (f(b1,b2) + f(a1,a2)) so that delta_n with n = 2 agrees bit for bit.
inline double delta2(const ScalarField2& f, Point2 a, Point2 b) {
  const double pbb = f.at({b.x1, b.x2});
  const double paa = f.at({a.x1, a.x2});
  const double pba = f.at({b.x1, a.x2});
  const double pab = f.at({a.x1, b.x2});
  return (pbb + paa) - (pba + pab);
}

/// n-dimensional difference: sum over s in {0,1}^n of (-1)^s f(corner),
/// where s_i picks a_i over b_i.
inline double delta_n(const ScalarFieldN& f, const std::vector<double>& a,
                      const std::vector<double>& b) {
  const int n = f.arity;
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw UsageError("delta_n: point size does not match field arity");
  if (n > 30) throw UsageError("delta_n: arity too large");
  std::vector<double> corner(n);
  double pos = 0.0, neg = 0.0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    int parity = 0;
    for (int i = 0; i < n; ++i) {
      const bool take_a = (s >> i) & 1u;
      corner[i] = take_a ? a[i] : b[i];
      parity ^= take_a ? 1 : 0;
    }
    (parity == 0 ? pos : neg) += f.at(corner);
  }
  return pos - neg;
}

/// Double mean slope m_a^b(f) = delta2 / ((b1-a1)(b2-a2)). Requires
/// a and b to differ in both coordinates.
inline double mean_slope(const ScalarField2& f, Point2 a, Point2 b) {
  if (!nsim(a, b))
    throw UsageError("mean_slope: points share a coordinate (a ~ b)");
  return delta2(f, a, b) / ((b.x1 - a.x1) * (b.x2 - a.x2));
}

/// Lattice surrogate for "delta2(f,a,b) = 0 for all a,b in i".
inline bool is_double_constant(const ScalarField2& f, const Interval2& i,
                               int grid, double tol) {
  if (!i.finite()) throw UsageError("is_double_constant: interval not finite");
  if (grid < 2) throw UsageError("is_double_constant: grid must be >= 2");
  std::vector<double> xs(grid), ys(grid);
  for (int k = 0; k < grid; ++k) {
    const double t = static_cast<double>(k) / (grid - 1);
    xs[k] = i.lower.x1 + t * i.span1();
    ys[k] = i.lower.x2 + t * i.span2();
  }
  // delta2 over [x_0, x_p] x [y_0, y_q] spans every lattice pair by the
  // subdivision identities, but we check all pairs as defined.
  for (int p = 0; p < grid; ++p)
    for (int q = 0; q < grid; ++q)
      for (int r = p + 1; r < grid; ++r)
        for (int s = q + 1; s < grid; ++s)
          if (std::abs(delta2(f, {xs[p], ys[q]}, {xs[r], ys[s]})) > tol)
            return false;
  return true;
}

/// Separable decomposition f(x) = g(x1) + h(x2) anchored at a point;
/// g(s) = f(s, a2), h(t) = f(a1, t) - f(a1, a2).
struct SplitDecomposition {
  Point2 base;
  std::function<double(double)> g;
  std::function<double(double)> h;
};

inline SplitDecomposition split_double_constant(const ScalarField2& f,
                                                const Interval2& i,
                                                Point2 anchor) {
  if (!contains(i, anchor))
    throw UsageError("split_double_constant: anchor outside interval");
  const double f_aa = f.at(anchor);
  SplitDecomposition d;
  d.base = anchor;
  d.g = [f, a2 = anchor.x2](double s) { return f.at({s, a2}); };
  d.h = [f, a1 = anchor.x1, f_aa](double t) { return f.at({a1, t}) - f_aa; };
  return d;
}

struct ContinuityReport {
  Point2 point;
  std::optional<QuadrantSign> sign;
  enum class Verdict { Pass, Fail, Inconclusive } verdict =
      Verdict::Inconclusive;
  enum class Axis { X1Sweep, X2Sweep } worst_axis = Axis::X1Sweep;
  double worst_deviation = 0.0;
  long samples = 0;
  std::string diagnostic;
};

inline const char* to_string(ContinuityReport::Verdict v) {
  switch (v) {
    case ContinuityReport::Verdict::Pass: return "pass";
    case ContinuityReport::Verdict::Fail: return "fail";
    case ContinuityReport::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace detail {

inline Interval2 probe_window(const ScalarField2& f, Point2 a) {
  if (f.domain_hint && f.domain_hint->finite()) return *f.domain_hint;
  return Interval2({a.x1 - 1.0, a.x2 - 1.0}, {a.x1 + 1.0, a.x2 + 1.0});
}

struct SweepOutcome {
  double final_dev = 0.0;
  bool monotone = true;
  long samples = 0;
};

// For each fixed value of one coordinate, drives the other toward the
// target through geometrically shrinking offsets, recording |delta2|.
template <typename DeltaAt>
SweepOutcome axis_sweep(DeltaAt&& delta_at, const std::vector<double>& fixed,
                        double move_reach, double move_dir, int shrink_steps) {
  SweepOutcome out;
  for (double fx : fixed) {
    double off = move_reach / 8.0;
    std::vector<double> seq;
    seq.reserve(shrink_steps);
    for (int j = 0; j < shrink_steps; ++j) {
      seq.push_back(std::abs(delta_at(fx, move_dir * off)));
      ++out.samples;
      off *= 0.5;
    }
    for (std::size_t j = seq.size() >= 3 ? seq.size() - 3 : 0;
         j + 1 < seq.size(); ++j)
      if (seq[j + 1] > seq[j] * (1.0 + 1e-12) + 1e-300) out.monotone = false;
    out.final_dev = std::max(out.final_dev, seq.back());
  }
  return out;
}

// Lattice of nonzero fixed offsets from `base` toward `dir` (signed) or
// symmetric around base (unsigned, dir = 0).
inline std::vector<double> fixed_lattice(double base, double reach_pos,
                                         double reach_neg, double dir,
                                         int sweep) {
  std::vector<double> out;
  for (int k = 1; k <= sweep; ++k) {
    const double t = static_cast<double>(k) / sweep;
    if (dir >= 0.0) out.push_back(base + t * reach_pos);
    if (dir <= 0.0) out.push_back(base - t * reach_neg);
  }
  return out;
}

}  // namespace detail

/// Sampling probe for the definition of double continuity at a point:
/// for fixed x1 the family Delta_a^x(f) must vanish as x2 -> a2, and
/// symmetrically. A quadrant sign restricts both sweeps to that side.
inline ContinuityReport continuity_probe(const ScalarField2& f, Point2 a,
                                         std::optional<QuadrantSign> sign =
                                             std::nullopt,
                                         int sweep = 8, int shrink_steps = 20,
                                         double tol = 1e-6) {
  ContinuityReport rep;
  rep.point = a;
  rep.sign = sign;
  const Interval2 w = detail::probe_window(f, a);
  const double d1 = sign ? sign1(*sign) : 1.0;
  const double d2 = sign ? sign2(*sign) : 1.0;

  try {
    const double r1p = w.upper.x1 - a.x1, r1m = a.x1 - w.lower.x1;
    const double r2p = w.upper.x2 - a.x2, r2m = a.x2 - w.lower.x2;
    const double r1 = d1 > 0 ? r1p : r1m;
    const double r2 = d2 > 0 ? r2p : r2m;

    // Sweep 1: x1 fixed on the allowed side, x2 -> a2.
    auto fixed1 =
        detail::fixed_lattice(a.x1, r1p, r1m, sign ? d1 : 0.0, sweep);
    auto delta_x2 = [&](double x1_fixed, double off2) {
      return delta2(f, a, {x1_fixed, a.x2 + off2});
    };
    auto s1 = detail::axis_sweep(delta_x2, fixed1, r2, d2, shrink_steps);
    if (!sign) {
      auto s1m = detail::axis_sweep(delta_x2, fixed1, r2m, -1.0, shrink_steps);
      s1.final_dev = std::max(s1.final_dev, s1m.final_dev);
      s1.monotone = s1.monotone && s1m.monotone;
      s1.samples += s1m.samples;
    }

    // Sweep 2: x2 fixed, x1 -> a1.
    auto fixed2 =
        detail::fixed_lattice(a.x2, r2p, r2m, sign ? d2 : 0.0, sweep);
    auto delta_x1 = [&](double x2_fixed, double off1) {
      return delta2(f, a, {a.x1 + off1, x2_fixed});
    };
    auto s2 = detail::axis_sweep(delta_x1, fixed2, r1, d1, shrink_steps);
    if (!sign) {
      auto s2m = detail::axis_sweep(delta_x1, fixed2, r1m, -1.0, shrink_steps);
      s2.final_dev = std::max(s2.final_dev, s2m.final_dev);
      s2.monotone = s2.monotone && s2m.monotone;
      s2.samples += s2m.samples;
    }

    rep.samples = s1.samples + s2.samples;
    if (s1.final_dev >= s2.final_dev) {
      rep.worst_axis = ContinuityReport::Axis::X1Sweep;
      rep.worst_deviation = s1.final_dev;
    } else {
      rep.worst_axis = ContinuityReport::Axis::X2Sweep;
      rep.worst_deviation = s2.final_dev;
    }
    // deviations already deep below tolerance are rounding noise; the
    // shrinking trend is only required near the threshold
    const bool monotone = (s1.monotone && s2.monotone) ||
                          rep.worst_deviation <= 0.1 * tol;
    if (rep.worst_deviation <= tol && monotone)
      rep.verdict = ContinuityReport::Verdict::Pass;
    else if (rep.worst_deviation <= 10.0 * tol)
      rep.verdict = ContinuityReport::Verdict::Inconclusive;
    else
      rep.verdict = ContinuityReport::Verdict::Fail;
  } catch (const DomainError& e) {
    rep.verdict = ContinuityReport::Verdict::Fail;
    rep.diagnostic = e.what();
  }
  return rep;
}

/// Probe for global double continuity on a finite interval: the
/// cross-anchored limits Delta_{(d,e)}^{(c,x2)} -> 0 as x2 -> e, over a
/// lattice of anchors c, d, e (and symmetrically in the other axis).
inline ContinuityReport global_continuity_probe(const ScalarField2& f,
                                                const Interval2& i, int grid = 5,
                                                int shrink_steps = 20,
                                                double tol = 1e-6) {
  if (!i.finite())
    throw UsageError("global_continuity_probe: interval not finite");
  ContinuityReport rep;
  rep.point = {i.lower.x1 + 0.5 * i.span1(), i.lower.x2 + 0.5 * i.span2()};
  auto coord = [&](double lo, double span, int k) {
    return lo + span * (k + 0.5) / grid;
  };
  double worst = 0.0;
  bool monotone = true;
  long samples = 0;
  try {
    for (int kc = 0; kc < grid; ++kc)
      for (int kd = 0; kd < grid; ++kd)
        for (int ke = 0; ke < grid; ++ke) {
          const double c = coord(i.lower.x1, i.span1(), kc);
          const double d = coord(i.lower.x1, i.span1(), kd);
          const double e = coord(i.lower.x2, i.span2(), ke);
          // x1-anchored family
          {
            double off = i.span2() / 8.0;
            double prev = kInf;
            for (int j = 0; j < shrink_steps; ++j) {
              const double x2 = e + (e + off <= i.upper.x2 ? off : -off);
              const double dev =
                  std::abs(delta2(f, {d, e}, {c, x2}));
              if (j >= shrink_steps - 3 && dev > prev * (1.0 + 1e-12) + 1e-300)
                monotone = false;
              prev = dev;
              ++samples;
              if (j == shrink_steps - 1) worst = std::max(worst, dev);
              off *= 0.5;
            }
          }
          // x2-anchored family (symmetric clause)
          {
            const double c2 = coord(i.lower.x2, i.span2(), kc);
            const double d2v = coord(i.lower.x2, i.span2(), kd);
            const double e1 = coord(i.lower.x1, i.span1(), ke);
            double off = i.span1() / 8.0;
            double prev = kInf;
            for (int j = 0; j < shrink_steps; ++j) {
              const double x1 = e1 + (e1 + off <= i.upper.x1 ? off : -off);
              const double dev =
                  std::abs(delta2(f, {e1, d2v}, {x1, c2}));
              if (j >= shrink_steps - 3 && dev > prev * (1.0 + 1e-12) + 1e-300)
                monotone = false;
              prev = dev;
              ++samples;
              if (j == shrink_steps - 1) worst = std::max(worst, dev);
              off *= 0.5;
            }
          }
        }
    rep.samples = samples;
    rep.worst_deviation = worst;
    if (worst <= 0.1 * tol) monotone = true;  // noise floor
    if (worst <= tol && monotone)
      rep.verdict = ContinuityReport::Verdict::Pass;
    else if (worst <= 10.0 * tol)
      rep.verdict = ContinuityReport::Verdict::Inconclusive;
    else
      rep.verdict = ContinuityReport::Verdict::Fail;
  } catch (const DomainError& e) {
    rep.verdict = ContinuityReport::Verdict::Fail;
    rep.diagnostic = e.what();
  }
  return rep;
}

/// The field x -> delta2(f, x, x+h); its continuity (for double
/// continuous f) is what makes the Rolle bisection sound.
inline ScalarField2 delta_map_field(const ScalarField2& f, Point2 h) {
  if (h.x1 == 0.0 || h.x2 == 0.0)
    throw UsageError("delta_map_field: h must be nonzero in both coordinates");
  std::optional<Interval2> hint;
  if (f.domain_hint && f.domain_hint->finite()) {
    const Interval2& d = *f.domain_hint;
    const double lo1 = d.lower.x1 - std::min(0.0, h.x1);
    const double hi1 = d.upper.x1 - std::max(0.0, h.x1);
    const double lo2 = d.lower.x2 - std::min(0.0, h.x2);
    const double hi2 = d.upper.x2 - std::max(0.0, h.x2);
    if (lo1 < hi1 && lo2 < hi2) hint = Interval2({lo1, lo2}, {hi1, hi2});
  }
  return ScalarField2(
      [f, h](Point2 x) -> EvalOutcome {
        try {
          return EvalOutcome::ok(delta2(f, x, {x.x1 + h.x1, x.x2 + h.x2}));
        } catch (const DomainError& e) {
          return EvalOutcome::fail(e.what());
        }
      },
      hint);
}

}  // namespace bicalc
