#pragma once

// Input grammar for the CLI: points as "r1,r2" (inf allowed where an
// extended point is legal), intervals as "[a1,b1]x[a2,b2]" with ( / )
// marking open edges, quadrant signs as PP/PM/MP/MM or ++/+-/-+/--.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicalc/core.hpp"
#include "bicalc/exprlang.hpp"

namespace bicalc::cli {

struct CliError {
  int code;
  std::string kind;
  std::string message;
  std::optional<long> position;
};

inline double parse_real(const std::string& tok) {
  std::string t = tok;
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw CliError{1, "usage", "bad real literal: " + tok, std::nullopt};
  }
  if (used != t.size())
    throw CliError{1, "usage", "bad real literal: " + tok, std::nullopt};
  return v;
}

inline std::pair<double, double> parse_point_raw(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw CliError{1, "usage", "point must be \"r1,r2\": " + s, std::nullopt};
  return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
}

inline Point2 parse_point(const std::string& s) {
  auto [x1, x2] = parse_point_raw(s);
  if (!std::isfinite(x1) || !std::isfinite(x2))
    throw CliError{1, "usage", "point must be finite: " + s, std::nullopt};
  return {x1, x2};
}

inline std::vector<double> parse_tuple(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok =
        comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
    out.push_back(parse_real(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// "[a1,b1]x[a2,b2]" with '(' / ')' marking open edges; first bracket
// group is the x1 range.
inline Interval2 parse_interval(const std::string& s) {
  const auto bad = [&s]() -> CliError {
    return {1, "usage",
            "interval must be \"[a1,b1]x[a2,b2]\" with ( ) for open edges: " +
                s,
            std::nullopt};
  };
  struct Range {
    double lo, hi;
    bool lo_closed, hi_closed;
  };
  auto parse_range = [&](const std::string& r) -> Range {
    if (r.size() < 5) throw bad();
    const char open = r.front(), close = r.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')'))
      throw bad();
    auto [lo, hi] = parse_point_raw(r.substr(1, r.size() - 2));
    return {lo, hi, open == '[', close == ']'};
  };
  // split on the 'x' between a closing bracket and an opening one
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k + 1 < s.size(); ++k)
    if (s[k] == 'x' && (s[k - 1] == ']' || s[k - 1] == ')') &&
        (s[k + 1] == '[' || s[k + 1] == '('))
      split = k;
  if (split == std::string::npos) throw bad();
  const Range r1 = parse_range(s.substr(0, split));
  const Range r2 = parse_range(s.substr(split + 1));
  try {
    return Interval2({r1.lo, r2.lo}, {r1.hi, r2.hi}, r1.lo_closed,
                     r1.hi_closed, r2.lo_closed, r2.hi_closed);
  } catch (const UsageError& e) {
    throw CliError{1, "usage", e.what(), std::nullopt};
  }
}

inline QuadrantSign parse_sign(const std::string& s) {
  if (s == "PP" || s == "++") return QuadrantSign::PP;
  if (s == "PM" || s == "+-") return QuadrantSign::PM;
  if (s == "MP" || s == "-+") return QuadrantSign::MP;
  if (s == "MM" || s == "--") return QuadrantSign::MM;
  throw CliError{1, "usage", "sign must be one of PP, PM, MP, MM",
                 std::nullopt};
}

inline ScalarField2 make_field(const std::string& src,
                        std::optional<Interval2> hint = std::nullopt) {
  try {
    return expr::field2(src, std::move(hint));
  } catch (const expr::ParseException& e) {
    throw CliError{2, "parse", e.what(),
                   static_cast<long>(e.error().position)};
  }
}

inline ScalarFieldN make_fieldn(const std::string& src, int arity) {
  try {
    return expr::fieldn(src, arity);
  } catch (const expr::ParseException& e) {
    throw CliError{2, "parse", e.what(),
                   static_cast<long>(e.error().position)};
  }
}

}  // namespace bicalc::cli
