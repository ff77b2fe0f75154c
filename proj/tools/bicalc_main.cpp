// bicalc: command-line surface for the double-calculus engine.
// One command per process; JSON on stdout, diagnostics on stderr.
// Exit codes: 0 computed verdict, 1 usage error, 2 expression parse
// error, 3 non-convergence under --strict.

#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>
#include <optional>
#include <string>

#include "bicalc/bicalc.hpp"
#include "bicalc/cli_parse.hpp"

using json = nlohmann::ordered_json;
using namespace bicalc;

namespace {

using namespace bicalc::cli;

json point_json(Point2 p) { return json::array({p.x1, p.x2}); }

json report_json(const EstimateReport& r, bool with_trace) {
  json j;
  j["verdict"] = r.verdict == Verdict::Converged
                     ? "converged"
                     : r.verdict == Verdict::Diverged ? "diverged"
                                                      : "inconclusive";
  if (r.value)
    j["value"] = *r.value;
  else
    j["value"] = nullptr;
  j["residual"] = r.residual;
  j["evaluations"] = r.evaluations;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  if (with_trace) {
    json t = json::array();
    for (const auto& [s, v] : r.trace) t.push_back(json::array({s, v}));
    j["trace"] = t;
  }
  return j;
}

const char* improper_kind(ImproperResult::Kind k) {
  switch (k) {
    case ImproperResult::Kind::Convergent: return "convergent";
    case ImproperResult::Kind::Divergent: return "divergent";
    default: return "inconclusive";
  }
}

json improper_json(const ImproperResult& r) {
  json j;
  j["verdict"] = improper_kind(r.kind);
  j["value"] = r.value ? json(*r.value) : json(nullptr);
  json corners = json::array();
  for (const auto& c : r.corners)
    corners.push_back(c ? json(*c) : json(nullptr));
  j["corners"] = corners;
  j["witnesses"] =
      json::array({r.witness_a ? json(*r.witness_a) : json(nullptr),
                   r.witness_b ? json(*r.witness_b) : json(nullptr)});
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  j["evaluations"] = r.evaluations;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"double-calculus engine: difference, derivative and integral "
               "operators for two-variable functions"};
  app.require_subcommand(1);

  // shared option storage
  std::string f_src, g_src, F_src, a_str, b_str, x_str, interval_str;
  std::string sign_str, rule_str = "midpoint", suite = "all";
  std::string map1_src, map2_src, jac_src, param_interval_str, prim_src;
  int steps = 48, sweep = 8, shrink_steps = 20, grid = 9, arity = 2;
  int max_halvings = 40, max_refinements = 12, init_m = 4, init_n = 4;
  int samples = 5;
  long trials = 0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool strict = false, with_trace = false, monotone = false;
  bool global_probe = false;
  std::string anchor_str;

  app.add_flag("--strict", strict,
               "exit 3 when an iterative net fails to converge");
  app.add_flag("--trace", with_trace, "include refinement traces in JSON");

  auto add_tol = [&](CLI::App* c) { c->add_option("--tol", tol, "convergence tolerance"); };
  auto add_steps = [&](CLI::App* c) { c->add_option("--steps", steps, "net refinement steps"); };

  auto* c_eval = app.add_subcommand("eval", "evaluate an expression");
  c_eval->add_option("-f", f_src, "expression in x1, x2")->required();
  c_eval->add_option("-x", x_str, "evaluation point x1,x2")->required();

  auto* c_delta = app.add_subcommand("delta", "double difference over corners");
  c_delta->add_option("-f", f_src, "expression in x1, x2")->required();
  c_delta->add_option("-a", a_str, "point a1,a2")->required();
  c_delta->add_option("-b", b_str, "point b1,b2")->required();

  auto* c_deltan =
      app.add_subcommand("delta-n", "n-fold alternating difference");
  c_deltan->add_option("-f", f_src, "expression in x1, x2")->required();
  c_deltan->add_option("-n", arity, "number of variables")->required();
  c_deltan->add_option("-a", a_str, "point a1,a2")->required();
  c_deltan->add_option("-b", b_str, "point b1,b2")->required();

  auto* c_slope = app.add_subcommand("slope", "double mean slope");
  c_slope->add_option("-f", f_src, "expression in x1, x2")->required();
  c_slope->add_option("-a", a_str, "point a1,a2")->required();
  c_slope->add_option("-b", b_str, "point b1,b2")->required();

  auto* c_deriv = app.add_subcommand("deriv", "double derivative estimate");
  c_deriv->add_option("-f", f_src, "expression in x1, x2")->required();
  c_deriv->add_option("-a", a_str, "point a1,a2")->required();
  c_deriv->add_option("--sign", sign_str, "quadrant sign: ++, +-, -+ or --");
  add_steps(c_deriv);
  add_tol(c_deriv);

  auto* c_cont = app.add_subcommand("continuity", "double continuity probe");
  c_cont->add_option("-f", f_src, "expression in x1, x2")->required();
  c_cont->add_option("-a", a_str, "point a1,a2");
  c_cont->add_option("--sign", sign_str, "quadrant sign: ++, +-, -+ or --");
  c_cont->add_option("--sweep", sweep, "lattice points per axis");
  c_cont->add_option("--shrink-steps", shrink_steps, "halvings of the probe offsets");
  c_cont->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed");
  c_cont->add_flag("--global", global_probe);
  c_cont->add_option("--grid", grid, "sample grid size per axis");
  add_tol(c_cont);

  auto* c_split =
      app.add_subcommand("split", "double-constant test and decomposition");
  c_split->add_option("-f", f_src, "expression in x1, x2")->required();
  c_split->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_split->add_option("--anchor", anchor_str, "decomposition anchor point");
  c_split->add_option("--grid", grid, "sample grid size per axis");
  add_tol(c_split);

  auto* c_rolle = app.add_subcommand("rolle", "double Rolle point");
  c_rolle->add_option("-f", f_src, "expression in x1, x2")->required();
  c_rolle->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_rolle->add_option("--max-halvings", max_halvings, "cap on interval halvings");
  add_tol(c_rolle);

  auto* c_mvt = app.add_subcommand("mvt", "double mean value point");
  c_mvt->add_option("-f", f_src, "expression in x1, x2")->required();
  c_mvt->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_mvt->add_option("--max-halvings", max_halvings, "cap on interval halvings");
  add_tol(c_mvt);

  auto* c_cauchy = app.add_subcommand("cauchy-mvt", "double Cauchy MVT point");
  c_cauchy->add_option("-f", f_src, "expression in x1, x2")->required();
  c_cauchy->add_option("-g", g_src, "second expression in x1, x2")->required();
  c_cauchy->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_cauchy->add_option("--max-halvings", max_halvings, "cap on interval halvings");
  add_tol(c_cauchy);

  auto* c_classify =
      app.add_subcommand("classify", "critical points / monotonicity");
  c_classify->add_option("-f", f_src, "expression in x1, x2")->required();
  c_classify->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_classify->add_option("--at", x_str, "classify a single point instead of searching");
  c_classify->add_option("--grid", grid, "sample grid size per axis");
  c_classify->add_flag("--monotone", monotone);
  add_tol(c_classify);

  auto* c_newton = app.add_subcommand("newton-int", "double Newton integral");
  c_newton->add_option("-F", F_src, "primitive expression in x1, x2")->required();
  c_newton->add_option("-a", a_str, "point a1,a2")->required();
  c_newton->add_option("-b", b_str, "point b1,b2")->required();

  auto* c_riemann = app.add_subcommand("riemann-int", "double Riemann sum");
  c_riemann->add_option("-f", f_src, "expression in x1, x2")->required();
  c_riemann->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_riemann->add_option("--rule", rule_str, "sample rule: midpoint, corner or random");
  c_riemann->add_option("--seed", seed, "seed for the random sample rule");
  c_riemann->add_option("--max-refinements", max_refinements, "cap on dyadic refinements");
  c_riemann->add_option("-m", init_m, "initial panels along x1");
  c_riemann->add_option("-n", init_n, "initial panels along x2");
  add_tol(c_riemann);

  auto* c_ftc1 = app.add_subcommand("ftc1", "accumulation-derivative check");
  c_ftc1->add_option("-f", f_src, "expression in x1, x2")->required();
  c_ftc1->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  c_ftc1->add_option("--samples", samples, "interior points to check");
  add_tol(c_ftc1);

  auto* c_ftc2 = app.add_subcommand("ftc2", "Newton vs Riemann check");
  c_ftc2->add_option("-F", F_src, "primitive expression in x1, x2")->required();
  c_ftc2->add_option("-f", f_src, "expression in x1, x2")->required();
  c_ftc2->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  add_tol(c_ftc2);

  auto* c_improper =
      app.add_subcommand("improper", "improper double Newton integral");
  c_improper->add_option("-F", F_src, "primitive expression in x1, x2")->required();
  c_improper->add_option("--interval", interval_str, "interval [a1,b1]x[a2,b2]; ( ) mark open ends, inf allowed")->required();
  add_steps(c_improper);
  add_tol(c_improper);

  auto* c_cov = app.add_subcommand("cov", "change-of-variables integral");
  c_cov->add_option("-f", f_src, "expression in x1, x2")->required();
  c_cov->add_option("--map1", map1_src, "x1 = map1(u, v) (write u, v as x1, x2)")->required();
  c_cov->add_option("--map2", map2_src, "x2 = map2(u, v)")->required();
  c_cov->add_option("--jac", jac_src, "analytic Jacobian determinant (optional)");
  c_cov->add_option("--param-interval", param_interval_str, "parameter interval [u1,u2]x[v1,v2]")->required();
  c_cov->add_option("-G", prim_src, "primitive in the parameters (optional)");
  add_steps(c_cov);
  add_tol(c_cov);

  auto* c_verify = app.add_subcommand("verify", "property suites");
  c_verify->add_option("--suite", suite, "which property suite to run")
      ->check(CLI::IsMember({"all", "difference", "derivative", "integral"}));
  c_verify->add_option("--seed", seed, "suite RNG seed");
  c_verify->add_option("--trials", trials, "trials per property");
  add_tol(c_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    json out;
    out["command"] = argc > 1 ? argv[1] : "";
    out["error"] = {{"kind", "usage"}, {"message", e.what()}};
    std::printf("%s\n", out.dump(2).c_str());
    (void)app.exit(e, std::cerr, std::cerr);
    return 1;
  }

  json out;
  json inputs;
  int exit_code = 0;
  std::string verdict = "computed";

  try {
    if (c_eval->parsed()) {
      out["command"] = "eval";
      const Point2 x = parse_point(x_str);
      inputs = {{"f", f_src}, {"x", point_json(x)}};
      out["inputs"] = inputs;
      out["result"] = {{"value", make_field(f_src).at(x)}};
    } else if (c_delta->parsed()) {
      out["command"] = "delta";
      const Point2 a = parse_point(a_str), b = parse_point(b_str);
      inputs = {{"f", f_src}, {"a", point_json(a)}, {"b", point_json(b)}};
      out["inputs"] = inputs;
      out["result"] = {{"value", delta2(make_field(f_src), a, b)}};
    } else if (c_deltan->parsed()) {
      out["command"] = "delta-n";
      const auto a = parse_tuple(a_str), b = parse_tuple(b_str);
      inputs = {{"f", f_src}, {"n", arity}, {"a", a}, {"b", b}};
      out["inputs"] = inputs;
      out["result"] = {{"value", delta_n(make_fieldn(f_src, arity), a, b)}};
    } else if (c_slope->parsed()) {
      out["command"] = "slope";
      const Point2 a = parse_point(a_str), b = parse_point(b_str);
      inputs = {{"f", f_src}, {"a", point_json(a)}, {"b", point_json(b)}};
      out["inputs"] = inputs;
      out["result"] = {{"value", mean_slope(make_field(f_src), a, b)}};
    } else if (c_deriv->parsed()) {
      out["command"] = "deriv";
      const Point2 a = parse_point(a_str);
      std::optional<QuadrantSign> sign;
      if (!sign_str.empty()) sign = parse_sign(sign_str);
      inputs = {{"f", f_src},
                {"a", point_json(a)},
                {"sign", sign ? json(to_string(*sign)) : json(nullptr)},
                {"steps", steps},
                {"tol", tol}};
      out["inputs"] = inputs;
      const DerivEstimate d =
          double_derivative(make_field(f_src), a, sign, steps, tol);
      json r = report_json(d.report, with_trace);
      r["first_order_residual"] = d.first_order_residual;
      out["result"] = r;
      verdict = r["verdict"];
      if (strict && d.report.verdict != Verdict::Converged) exit_code = 3;
    } else if (c_cont->parsed()) {
      out["command"] = "continuity";
      std::optional<QuadrantSign> sign;
      if (!sign_str.empty()) sign = parse_sign(sign_str);
      if (global_probe) {
        if (interval_str.empty())
          throw CliError{1, "usage", "--global requires --interval",
                         std::nullopt};
        const Interval2 box = parse_interval(interval_str);
        inputs = {{"f", f_src}, {"interval", interval_str}, {"grid", grid},
                  {"shrink_steps", shrink_steps}, {"tol", tol}};
        out["inputs"] = inputs;
        const ContinuityReport rep = global_continuity_probe(
            make_field(f_src), box, grid, shrink_steps, tol);
        out["result"] = {{"verdict", to_string(rep.verdict)},
                         {"worst_deviation", rep.worst_deviation},
                         {"samples", rep.samples}};
        verdict = to_string(rep.verdict);
        if (strict && rep.verdict == ContinuityReport::Verdict::Inconclusive)
          exit_code = 3;
      } else {
        if (a_str.empty())
          throw CliError{1, "usage", "continuity requires -a (or --global)",
                         std::nullopt};
        const Point2 a = parse_point(a_str);
        std::optional<Interval2> hint;
        if (!interval_str.empty()) hint = parse_interval(interval_str);
        inputs = {{"f", f_src},
                  {"a", point_json(a)},
                  {"sign", sign ? json(to_string(*sign)) : json(nullptr)},
                  {"sweep", sweep},
                  {"shrink_steps", shrink_steps},
                  {"tol", tol}};
        out["inputs"] = inputs;
        const ContinuityReport rep = continuity_probe(
            make_field(f_src, hint), a, sign, sweep, shrink_steps, tol);
        out["result"] = {{"verdict", to_string(rep.verdict)},
                         {"worst_deviation", rep.worst_deviation},
                         {"samples", rep.samples}};
        if (!rep.diagnostic.empty())
          out["result"]["diagnostic"] = rep.diagnostic;
        verdict = to_string(rep.verdict);
        if (strict && rep.verdict == ContinuityReport::Verdict::Inconclusive)
          exit_code = 3;
      }
    } else if (c_split->parsed()) {
      out["command"] = "split";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"f", f_src}, {"interval", interval_str}, {"grid", grid},
                {"tol", tol}};
      out["inputs"] = inputs;
      const ScalarField2 f = make_field(f_src, box);
      const bool dc = is_double_constant(f, box, grid, tol);
      json r = {{"double_constant", dc}};
      if (dc) {
        const Point2 anchor = anchor_str.empty()
                                  ? box.lower.as_point()
                                  : parse_point(anchor_str);
        const SplitDecomposition d = split_double_constant(f, box, anchor);
        double worst = 0.0;
        for (int p = 0; p < grid; ++p)
          for (int q = 0; q < grid; ++q) {
            const Point2 x{
                box.lower.x1 + box.span1() * p / (grid - 1.0),
                box.lower.x2 + box.span2() * q / (grid - 1.0)};
            worst = std::max(worst,
                             std::abs(f.at(x) - (d.g(x.x1) + d.h(x.x2))));
          }
        r["anchor"] = point_json(d.base);
        r["reconstruction_error"] = worst;
      }
      out["result"] = r;
      verdict = dc ? "double_constant" : "not_double_constant";
    } else if (c_rolle->parsed() || c_mvt->parsed()) {
      const bool is_mvt = c_mvt->parsed();
      out["command"] = is_mvt ? "mvt" : "rolle";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"f", f_src}, {"interval", interval_str}, {"tol", tol},
                {"max_halvings", max_halvings}};
      out["inputs"] = inputs;
      const ScalarField2 f = make_field(f_src, box);
      const MeanValueResult r = is_mvt
                                    ? mvt_solve(f, box, tol, max_halvings)
                                    : rolle_solve(f, box, tol, max_halvings);
      out["result"] = {{"c", point_json(r.c)},
                       {"target", r.target},
                       {"achieved", r.achieved},
                       {"residual", r.residual}};
    } else if (c_cauchy->parsed()) {
      out["command"] = "cauchy-mvt";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"f", f_src}, {"g", g_src}, {"interval", interval_str},
                {"tol", tol}};
      out["inputs"] = inputs;
      const CauchyResult r =
          cauchy_mvt_solve(make_field(f_src, box), make_field(g_src, box),
                           box, tol, max_halvings);
      out["result"] = {{"c", point_json(r.c)},
                       {"lhs", r.lhs},
                       {"rhs", r.rhs},
                       {"gap", std::abs(r.lhs - r.rhs)}};
    } else if (c_classify->parsed()) {
      out["command"] = "classify";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"f", f_src}, {"interval", interval_str}, {"grid", grid},
                {"tol", tol}};
      out["inputs"] = inputs;
      const ScalarField2 f = make_field(f_src, box);
      if (monotone) {
        const Monotonicity m = monotonicity_classify(f, box, 5, tol);
        out["result"] = {{"monotonicity", to_string(m)}};
        verdict = to_string(m);
      } else if (!x_str.empty()) {
        const Point2 at = parse_point(x_str);
        const StationaryClass c = classify_stationary(f, at, box, 16, tol);
        out["result"] = {{"at", point_json(at)},
                         {"classification", to_string(c)}};
        verdict = to_string(c);
      } else {
        const auto pts = critical_points(f, box, grid, tol);
        json list = json::array();
        for (const auto& cp : pts)
          list.push_back(
              {{"location", point_json(cp.location)},
               {"kind", cp.kind == CriticalPoint::Kind::Stationary
                            ? "stationary"
                            : "nondifferentiable"},
               {"classification", to_string(cp.classification)}});
        out["result"] = {{"critical_points", list},
                         {"count", pts.size()}};
      }
    } else if (c_newton->parsed()) {
      out["command"] = "newton-int";
      const Point2 a = parse_point(a_str), b = parse_point(b_str);
      inputs = {{"F", F_src}, {"a", point_json(a)}, {"b", point_json(b)}};
      out["inputs"] = inputs;
      out["result"] = {
          {"value", newton_integral(make_field(F_src), Interval2{a, b})}};
    } else if (c_riemann->parsed()) {
      out["command"] = "riemann-int";
      const Interval2 box = parse_interval(interval_str);
      RiemannConfig cfg;
      cfg.initial_m = init_m;
      cfg.initial_n = init_n;
      cfg.max_refinements = max_refinements;
      cfg.seed = seed;
      cfg.tol = tol;
      if (rule_str == "midpoint")
        cfg.rule = SampleRule::Midpoint;
      else if (rule_str == "corner")
        cfg.rule = SampleRule::Corner;
      else if (rule_str == "random")
        cfg.rule = SampleRule::Random;
      else
        throw CliError{1, "usage", "rule must be midpoint, corner or random",
                       std::nullopt};
      inputs = {{"f", f_src}, {"interval", interval_str},
                {"rule", rule_str}, {"seed", seed}, {"tol", tol}};
      out["inputs"] = inputs;
      const EstimateReport r = riemann_integral(make_field(f_src, box), box,
                                                cfg);
      out["result"] = report_json(r, with_trace);
      out["result"]["refinements"] =
          r.trace.empty() ? 0 : r.trace.size() - 1;
      verdict = out["result"]["verdict"];
      if (strict && r.verdict != Verdict::Converged) exit_code = 3;
    } else if (c_ftc1->parsed()) {
      out["command"] = "ftc1";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"f", f_src}, {"interval", interval_str},
                {"samples", samples}, {"tol", tol}};
      out["inputs"] = inputs;
      const Ftc1Report r =
          ftc1_check(make_field(f_src, box), box, samples, tol);
      json sampled = json::array();
      for (const auto& s : r.samples)
        sampled.push_back({{"point", point_json(s.point)},
                           {"expected", s.expected},
                           {"error", s.error},
                           {"pass", s.pass}});
      out["result"] = {{"pass", r.pass},
                       {"worst_error", r.worst_error},
                       {"samples", sampled}};
      verdict = r.pass ? "pass" : "fail";
    } else if (c_ftc2->parsed()) {
      out["command"] = "ftc2";
      const Interval2 box = parse_interval(interval_str);
      RiemannConfig cfg;
      cfg.tol = tol;
      inputs = {{"F", F_src}, {"f", f_src}, {"interval", interval_str},
                {"tol", tol}};
      out["inputs"] = inputs;
      const Ftc2Report r = ftc2_check(make_field(F_src, box),
                                      make_field(f_src, box), box, cfg);
      out["result"] = {{"newton", r.newton},
                       {"riemann", r.riemann.value
                                       ? json(*r.riemann.value)
                                       : json(nullptr)},
                       {"error", r.error},
                       {"pass", r.pass}};
      verdict = r.pass ? "pass" : "fail";
      if (strict && r.riemann.verdict != Verdict::Converged) exit_code = 3;
    } else if (c_improper->parsed()) {
      out["command"] = "improper";
      const Interval2 box = parse_interval(interval_str);
      inputs = {{"F", F_src}, {"interval", interval_str}, {"steps", steps},
                {"tol", tol}};
      out["inputs"] = inputs;
      const ImproperResult r =
          improper_newton_integral(make_field(F_src), box, steps, tol);
      out["result"] = improper_json(r);
      verdict = improper_kind(r.kind);
      if (strict && r.kind == ImproperResult::Kind::Inconclusive)
        exit_code = 3;
    } else if (c_cov->parsed()) {
      out["command"] = "cov";
      const Interval2 pbox = parse_interval(param_interval_str);
      CovSpec spec{make_field(map1_src), make_field(map2_src),
                   jac_src.empty()
                       ? std::nullopt
                       : std::optional<ScalarField2>(make_field(jac_src)),
                   pbox};
      std::optional<ScalarField2> prim;
      if (!prim_src.empty()) prim = make_field(prim_src);
      inputs = {{"f", f_src}, {"map1", map1_src}, {"map2", map2_src},
                {"param_interval", param_interval_str}, {"tol", tol}};
      out["inputs"] = inputs;
      const ImproperResult r = change_of_variables_integral(
          make_field(f_src), spec, prim, steps, tol);
      out["result"] = improper_json(r);
      verdict = improper_kind(r.kind);
      if (strict && r.kind == ImproperResult::Kind::Inconclusive)
        exit_code = 3;
    } else if (c_verify->parsed()) {
      out["command"] = "verify";
      inputs = {{"suite", suite}, {"seed", seed}};
      out["inputs"] = inputs;
      std::vector<verify::SuiteResult> results;
      if (suite == "all")
        results = verify::run_all(seed);
      else if (suite == "difference")
        results = {verify::difference_suite(seed,
                                            trials > 0 ? trials : 1000)};
      else if (suite == "derivative")
        results = {verify::derivative_suite(seed, trials > 0 ? trials : 20)};
      else
        results = {verify::integral_suite(seed, trials > 0 ? trials : 50)};
      json suites = json::array();
      bool all_pass = true;
      for (const auto& sr : results) {
        json checks = json::array();
        for (const auto& c : sr.checks)
          checks.push_back({{"name", c.name},
                            {"trials", c.trials},
                            {"failures", c.failures},
                            {"worst", c.worst}});
        suites.push_back({{"suite", sr.suite},
                          {"pass", sr.pass()},
                          {"checks", checks}});
        all_pass = all_pass && sr.pass();
      }
      out["result"] = {{"suites", suites}, {"pass", all_pass}};
      verdict = all_pass ? "pass" : "fail";
      if (!all_pass) exit_code = 1;
    }
  } catch (const CliError& e) {
    out["error"] = {{"kind", e.kind}, {"message", e.message}};
    if (e.position) out["error"]["position"] = *e.position;
    std::printf("%s\n", out.dump(2).c_str());
    std::fprintf(stderr, "bicalc: %s\n", e.message.c_str());
    return e.code;
  } catch (const expr::ParseException& e) {
    out["error"] = {{"kind", "parse"},
                    {"message", e.what()},
                    {"position", e.error().position}};
    std::printf("%s\n", out.dump(2).c_str());
    std::fprintf(stderr, "bicalc: %s\n", e.what());
    return 2;
  } catch (const UsageError& e) {
    out["error"] = {{"kind", "usage"}, {"message", e.what()}};
    std::printf("%s\n", out.dump(2).c_str());
    std::fprintf(stderr, "bicalc: %s\n", e.what());
    return 1;
  } catch (const DomainError& e) {
    out["error"] = {{"kind", "domain"}, {"message", e.what()}};
    std::printf("%s\n", out.dump(2).c_str());
    std::fprintf(stderr, "bicalc: %s\n", e.what());
    return 1;
  }

  out["verdict"] = verdict;
  std::printf("%s\n", out.dump(2).c_str());
  return exit_code;
}
