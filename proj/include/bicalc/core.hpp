#pragma once

// Shared domain types for the double-calculus library: points of the
// plane, double intervals with per-edge closure, quadrant signs for
// signed limits, evaluatable scalar fields, and estimate reports.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bicalc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when a field evaluation fails inside an operation that
/// returns a plain real (e.g. a corner of a double difference).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// Usage errors: violated preconditions, malformed arguments.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(std::string msg)
      : std::invalid_argument(std::move(msg)) {}
};

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  Point2() = default;
  Point2(double a, double b) : x1(a), x2(b) {
    if (std::isnan(x1) || std::isnan(x2))
      throw UsageError("Point2: NaN component");
    if (std::isinf(x1) || std::isinf(x2))
      throw UsageError("Point2: infinite component (use ExtendedPoint2)");
  }

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// a differs from b in both coordinates.
inline bool nsim(const Point2& a, const Point2& b) {
  return a.x1 != b.x1 && a.x2 != b.x2;
}

/// Point of the extended plane; components may be +-infinity.
struct ExtendedPoint2 {
  double x1 = 0.0;
  double x2 = 0.0;

  ExtendedPoint2() = default;
  ExtendedPoint2(double a, double b) : x1(a), x2(b) {
    if (std::isnan(x1) || std::isnan(x2))
      throw UsageError("ExtendedPoint2: NaN component");
  }
  ExtendedPoint2(const Point2& p) : x1(p.x1), x2(p.x2) {}  // NOLINT

  bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
  Point2 as_point() const {
    if (!finite()) throw UsageError("ExtendedPoint2: not finite");
    return {x1, x2};
  }

  friend bool operator==(const ExtendedPoint2&, const ExtendedPoint2&) =
      default;
};

enum class QuadrantSign { PP, PM, MP, MM };

inline double sign1(QuadrantSign s) {
  return (s == QuadrantSign::PP || s == QuadrantSign::PM) ? 1.0 : -1.0;
}
inline double sign2(QuadrantSign s) {
  return (s == QuadrantSign::PP || s == QuadrantSign::MP) ? 1.0 : -1.0;
}

inline const char* to_string(QuadrantSign s) {
  switch (s) {
    case QuadrantSign::PP: return "++";
    case QuadrantSign::PM: return "+-";
    case QuadrantSign::MP: return "-+";
    case QuadrantSign::MM: return "--";
  }
  return "?";
}

inline constexpr QuadrantSign kAllSigns[4] = {
    QuadrantSign::PP, QuadrantSign::PM, QuadrantSign::MP, QuadrantSign::MM};

/// Double interval [lower, upper] = [l1,u1] x [l2,u2] with per-edge
/// closure flags. Edges at +-infinity are necessarily open.
struct Interval2 {
  ExtendedPoint2 lower;
  ExtendedPoint2 upper;
  bool left_closed = true;
  bool right_closed = true;
  bool bottom_closed = true;
  bool top_closed = true;

  Interval2() = default;
  Interval2(ExtendedPoint2 lo, ExtendedPoint2 hi, bool lc = true,
            bool rc = true, bool bc = true, bool tc = true)
      : lower(lo),
        upper(hi),
        left_closed(lc),
        right_closed(rc),
        bottom_closed(bc),
        top_closed(tc) {
    if (!(lower.x1 < upper.x1 && lower.x2 < upper.x2))
      throw UsageError("Interval2: lower must be strictly below upper");
    if (std::isinf(lower.x1) && left_closed)
      throw UsageError("Interval2: infinite left edge must be open");
    if (std::isinf(upper.x1) && right_closed)
      throw UsageError("Interval2: infinite right edge must be open");
    if (std::isinf(lower.x2) && bottom_closed)
      throw UsageError("Interval2: infinite bottom edge must be open");
    if (std::isinf(upper.x2) && top_closed)
      throw UsageError("Interval2: infinite top edge must be open");
  }

  bool finite() const { return lower.finite() && upper.finite(); }
  double span1() const { return upper.x1 - lower.x1; }
  double span2() const { return upper.x2 - lower.x2; }
};

inline bool contains(const Interval2& i, const Point2& p) {
  const bool in1 = (i.left_closed ? p.x1 >= i.lower.x1 : p.x1 > i.lower.x1) &&
                   (i.right_closed ? p.x1 <= i.upper.x1 : p.x1 < i.upper.x1);
  const bool in2 = (i.bottom_closed ? p.x2 >= i.lower.x2 : p.x2 > i.lower.x2) &&
                   (i.top_closed ? p.x2 <= i.upper.x2 : p.x2 < i.upper.x2);
  return in1 && in2;
}

/// Result of evaluating a field at one point: a finite value or a
/// domain failure. NaN and non-finite intermediates are mapped to
/// failures by every evaluator in this library, never propagated.
struct EvalOutcome {
  std::optional<double> value;
  std::string error;

  static EvalOutcome ok(double v) {
    if (!std::isfinite(v)) return fail("non-finite value");
    EvalOutcome o;
    o.value = v;
    return o;
  }
  static EvalOutcome fail(std::string msg) {
    EvalOutcome o;
    o.error = std::move(msg);
    return o;
  }
  bool has_value() const { return value.has_value(); }
  double operator*() const { return *value; }
};

/// Real function of two real variables. Evaluation must be
/// deterministic; the optional domain hint bounds where probes sample.
struct ScalarField2 {
  std::function<EvalOutcome(Point2)> eval;
  std::optional<Interval2> domain_hint;

  ScalarField2() = default;
  explicit ScalarField2(std::function<EvalOutcome(Point2)> f,
                        std::optional<Interval2> hint = std::nullopt)
      : eval(std::move(f)), domain_hint(std::move(hint)) {}

  /// Wraps a plain callable; NaN/inf results become DomainError outcomes.
  static ScalarField2 from(std::function<double(double, double)> f,
                           std::optional<Interval2> hint = std::nullopt) {
    return ScalarField2(
        [f = std::move(f)](Point2 p) { return EvalOutcome::ok(f(p.x1, p.x2)); },
        std::move(hint));
  }

  EvalOutcome operator()(Point2 p) const { return eval(p); }

  /// Evaluates, converting failure into a DomainError throw.
  double at(Point2 p) const {
    EvalOutcome o = eval(p);
    if (!o.has_value())
      throw DomainError("field evaluation failed at (" +
                        std::to_string(p.x1) + "," + std::to_string(p.x2) +
                        "): " + o.error);
    return *o;
  }
};

/// Real function of n real variables.
struct ScalarFieldN {
  int arity = 0;
  std::function<EvalOutcome(const std::vector<double>&)> eval;

  ScalarFieldN() = default;
  ScalarFieldN(int n, std::function<EvalOutcome(const std::vector<double>&)> f)
      : arity(n), eval(std::move(f)) {
    if (arity < 1) throw UsageError("ScalarFieldN: arity must be >= 1");
  }

  double at(const std::vector<double>& x) const {
    EvalOutcome o = eval(x);
    if (!o.has_value()) throw DomainError("field evaluation failed: " + o.error);
    return *o;
  }
};

enum class Verdict { Converged, Diverged, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Numeric result with its convergence trace; shared by derivative,
/// limit, and integral estimators.
struct EstimateReport {
  std::optional<double> value;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<double, double>> trace;  // (step parameter, estimate)
  double residual = 0.0;
  long evaluations = 0;
  std::string diagnostic;
};

}  // namespace bicalc
