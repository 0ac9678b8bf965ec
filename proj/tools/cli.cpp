#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gnlab/control.hpp"
#include "gnlab/corpus.hpp"
#include "gnlab/covering.hpp"
#include "gnlab/csv.hpp"
#include "gnlab/error.hpp"
#include "gnlab/extremal.hpp"
#include "gnlab/funcspace_json.hpp"
#include "gnlab/gn.hpp"
#include "gnlab/parallel.hpp"

namespace gnlab::cli {

using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  bool deterministic = false;
  std::string report;
  std::string csv;
};

struct ParamOpts {
  std::string preset;
  int k = 1;
  std::string p, q, r, ks, theta;
  int j = -1;
  int m = -1;
  std::string json_text;
};

struct FunctionOpts {
  std::string name = "bumpchi";
  std::string json_text;
};

struct Outcome {
  json result = json::object();
  json tolerances = json::object();
  std::size_t n = 0;
  std::optional<CsvTable> csv;
  bool ok = true;
  std::string summary;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("GNLAB_SEED");
  if (!s || !*s) return 0;
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used == std::string(s).size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kParameter, std::string("GNLAB_SEED is not an unsigned integer: '") + s + "'");
}

std::string read_text(const std::string& spec) {
  if (spec.empty() || spec[0] != '@') return spec;
  std::ifstream f(spec.substr(1));
  require(static_cast<bool>(f), ErrorKind::kParameter, "cannot read " + spec.substr(1));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(read_text(text));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParameter, std::string("malformed JSON: ") + e.what());
  }
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      require(used == item.size(), ErrorKind::kParameter, "malformed integer list '" + text + "'");
    } catch (const std::logic_error&) {
      fail(ErrorKind::kParameter, "malformed integer list '" + text + "'");
    }
  }
  require(!out.empty(), ErrorKind::kParameter, "empty integer list");
  return out;
}

Interval parse_interval(const std::string& text) {
  auto comma = text.find(',');
  require(comma != std::string::npos, ErrorKind::kParameter, "interval must be 'lo,hi'");
  try {
    Interval out{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    require(out.lo < out.hi, ErrorKind::kParameter, "interval must satisfy lo < hi");
    return out;
  } catch (const std::logic_error&) {
    fail(ErrorKind::kParameter, "malformed interval '" + text + "'");
  }
}

void add_param_options(CLI::App* app, ParamOpts& o) {
  app->add_option("--preset", o.preset, "cor7 | cor6");
  app->add_option("--k", o.k, "order k for the cor6 preset");
  app->add_option("--p", o.p, "exponent p (inf allowed)");
  app->add_option("--q", o.q, "exponent q (inf allowed)");
  app->add_option("--r", o.r, "exponent r (inf allowed)");
  app->add_option("--ks", o.ks, "orders k_1,...,k_kappa");
  app->add_option("--j", o.j, "order j");
  app->add_option("--m", o.m, "order m");
  app->add_option("--theta", o.theta, "interpolation weight (e.g. 1/2)");
  app->add_option("--params-json", o.json_text, "GNParams JSON (or @file)");
}

struct BuiltParams {
  GNParams params;
  bool has_p = false, has_q = false, has_theta = false;
};

BuiltParams build_params(const ParamOpts& o, const std::string& default_preset) {
  BuiltParams b;
  std::string preset = o.preset;
  const bool explicit_tuple = !o.ks.empty() || o.j >= 0 || o.m >= 0;
  if (preset.empty() && o.json_text.empty() && !explicit_tuple) preset = default_preset;
  if (!o.json_text.empty()) {
    b.params = params_from_json(parse_json(o.json_text));
    b.has_p = b.has_q = b.has_theta = true;
  }
  if (preset == "cor7") {
    b.params = GNParams::cor7();
    b.has_p = b.has_q = b.has_theta = true;
  } else if (preset == "cor6") {
    b.params = GNParams::cor6(o.k);
    b.has_p = b.has_q = b.has_theta = true;
  } else if (!preset.empty()) {
    fail(ErrorKind::kParameter, "unknown preset '" + preset + "' (expected cor7 or cor6)");
  }
  if (!o.p.empty()) {
    b.params.p = Exponent::parse(o.p);
    b.has_p = true;
  }
  if (!o.q.empty()) {
    b.params.q = Exponent::parse(o.q);
    b.has_q = true;
  }
  if (!o.r.empty()) b.params.r = Exponent::parse(o.r);
  if (!o.ks.empty()) b.params.ks = parse_ints(o.ks);
  if (o.j >= 0) b.params.j = o.j;
  if (o.m >= 0) b.params.m = o.m;
  if (!o.theta.empty()) {
    b.params.theta = Scalar::parse(o.theta);
    b.has_theta = true;
  }
  validate_orders(b.params);
  return b;
}

AnalyticFunction build_function(const FunctionOpts& o) {
  if (!o.json_text.empty()) return function_from_json(parse_json(o.json_text));
  if (o.name == "bumpchi") return AnalyticFunction::bump_chi();
  return corpus_function(o.name);
}

void add_function_options(CLI::App* app, FunctionOpts& o) {
  app->add_option("--function", o.name, "corpus id (see 'corpus list')");
  app->add_option("--function-json", o.json_text, "function descriptor JSON (or @file)");
}

json collect_options(const CLI::App* app) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt == app->get_help_ptr()) continue;
    std::string name = opt->get_single_name();
    if (opt->get_expected_min() == 0) {
      out[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      out[name] = joined;
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDivergence:
    case ErrorKind::kSearchFailure:
      return kExitAssertion;
    default:
      return kExitUsage;
  }
}

// ------------------------------------------------------------------ params

Outcome run_params(const ParamOpts& po, const std::string& solve) {
  BuiltParams b = build_params(po, "");
  std::optional<Unknown> unknown;
  if (!solve.empty()) {
    if (solve == "p") unknown = Unknown::kP;
    else if (solve == "q") unknown = Unknown::kQ;
    else if (solve == "theta") unknown = Unknown::kTheta;
    else fail(ErrorKind::kParameter, "--solve expects p, q or theta");
  } else {
    int missing = (!b.has_p) + (!b.has_q) + (!b.has_theta);
    require(missing <= 1, ErrorKind::kParameter, "at most one of p, q, theta may be left unknown");
    if (!b.has_p) unknown = Unknown::kP;
    if (!b.has_q) unknown = Unknown::kQ;
    if (!b.has_theta) unknown = Unknown::kTheta;
  }
  GNParams params = unknown ? solve_exponent(b.params, *unknown) : b.params;
  auto res = relation_residual(params);
  Outcome out;
  out.result = to_json(params);
  out.result["kappa"] = params.kappa();
  out.result["kbar"] = to_json(params.kbar());
  out.result["theta_star"] = to_json(theta_star(params));
  out.result["residual"] = to_json(res.general);
  out.result["critical_residual"] = res.critical ? to_json(*res.critical) : json(nullptr);
  out.result["consistent"] = res.consistent;
  out.result["relation_holds"] = res.holds();
  if (unknown)
    out.result["solved"] = *unknown == Unknown::kP ? "p" : (*unknown == Unknown::kQ ? "q" : "theta");
  out.tolerances = {{"residual", 1e-12}};
  out.ok = res.consistent;
  out.summary = "p=" + params.p.to_string() + " q=" + params.q.to_string() + " theta=" + params.theta.to_string() +
                " theta*=" + theta_star(params).to_string() + " residual=" + res.general.to_string();
  return out;
}

// ------------------------------------------------------------------- check

struct CheckOpts {
  ParamOpts params;
  FunctionOpts function;
  std::size_t n = 4097;
  int k0 = 0;
  std::string s = "1";
  std::string omega;
  std::string ks = "0,2";
  std::string q = "2";
};

json special_rows_json(const std::vector<SpecialRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"id", r.id},
                   {"skipped", r.skipped},
                   {"note", r.note},
                   {"ratio4", json_number(r.ratio4)},
                   {"ratio6", json_number(r.ratio6)},
                   {"ratio_half", json_number(r.ratio_half)}});
  return out;
}

std::vector<CorpusEntry> selected_corpus(const FunctionOpts& fo, bool function_given) {
  if (!function_given) return standard_corpus();
  std::string id = fo.json_text.empty() ? fo.name : "custom";
  return {{id, build_function(fo)}};
}

Outcome run_check(const std::string& mode, const CheckOpts& co, bool function_given) {
  Outcome out;
  out.n = co.n;
  if (mode == "generalized") {
    GNParams params = build_params(co.params, "cor7").params;
    AnalyticFunction f = build_function(co.function);
    auto rep = evaluate_generalized(sample(f, f.support(), co.n, params.m), params);
    out.result = rep.to_json();
    out.result["function"] = to_json(f);
    out.tolerances = {{"relation", 1e-10}, {"support_edge", 1e-10}};
    out.ok = !rep.violation_candidate;
    out.summary = "ratio=" + format_number(rep.ratio);
    return out;
  }
  if (mode == "bounded" || mode == "localized") {
    GNParams params = build_params(co.params, "cor7").params;
    AnalyticFunction f = build_function(co.function);
    GridFunction g = sample(f, {0.0, 1.0}, co.n, std::max(params.m, co.k0));
    InequalityReport rep;
    if (mode == "bounded") {
      BoundedExtras extras{co.k0, Exponent::parse(co.s), std::nullopt};
      if (!co.omega.empty()) extras.omega = parse_interval(co.omega);
      rep = evaluate_bounded(g, params, extras);
    } else {
      require(!co.omega.empty(), ErrorKind::kParameter, "localized check needs --omega lo,hi");
      rep = evaluate_localized(g, params, parse_interval(co.omega));
    }
    out.result = rep.to_json();
    out.result["function"] = to_json(f);
    out.tolerances = {{"relation", 1e-10}};
    out.ok = !rep.violation_candidate;
    out.summary = "ratio=" + format_number(rep.ratio);
    return out;
  }
  if (mode == "special") {
    auto rows = special_constants(selected_corpus(co.function, function_given), co.n);
    const double tol = 1e-3;
    CsvTable t({"function_id", "ratio4", "ratio6", "ratio_half", "N", "status"});
    double worst4 = 0.0, worst6 = 0.0;
    for (const auto& r : rows) {
      t.add_row({r.id, format_number(r.ratio4), format_number(r.ratio6), format_number(r.ratio_half),
                 std::to_string(co.n), r.skipped ? "skipped: " + r.note : "ok"});
      if (r.skipped) continue;
      worst4 = std::max(worst4, r.ratio4);
      worst6 = std::max(worst6, r.ratio6);
    }
    out.result = {{"rows", special_rows_json(rows)},
                  {"ceiling4", ratio4_ceiling()},
                  {"ceiling6", ratio6_ceiling()},
                  {"max_ratio4", worst4},
                  {"max_ratio6", worst6}};
    out.tolerances = {{"ceiling", tol}};
    out.ok = worst4 <= ratio4_ceiling() + tol && worst6 <= ratio6_ceiling() + tol;
    out.csv = t;
    out.summary = "max ratio4=" + format_number(worst4) + " max ratio6=" + format_number(worst6);
    return out;
  }
  if (mode == "open-problem") {
    auto ks = parse_ints(co.ks);
    auto rows = open_problem_probe(selected_corpus(co.function, function_given), Exponent::parse(co.q), ks, co.n);
    json arr = json::array();
    CsvTable t({"function_id", "lhs", "rhs", "ratio", "N", "status"});
    for (const auto& r : rows) {
      arr.push_back({{"id", r.id},
                     {"skipped", r.skipped},
                     {"note", r.note},
                     {"lhs", json_number(r.lhs)},
                     {"rhs", json_number(r.rhs)},
                     {"ratio", json_number(r.ratio)}});
      t.add_row({r.id, format_number(r.lhs), format_number(r.rhs), format_number(r.ratio), std::to_string(co.n),
                 r.skipped ? "skipped: " + r.note : "ok"});
    }
    out.result = {{"ks", ks}, {"q", co.q}, {"rows", arr}};
    out.csv = t;
    out.summary = std::to_string(rows.size()) + " rows";
    return out;
  }
  fail(ErrorKind::kParameter, "unknown check mode '" + mode + "'");
}

// ------------------------------------------------------------------- cover

struct CoverOpts {
  ParamOpts params;
  FunctionOpts function;
  std::size_t n = 8193;
  std::string mode = "real-line";
  std::size_t e_resolution = 0;
  std::size_t probes = 10000;
  double balance_tol = 1e-6;
};

Outcome run_cover(const CoverOpts& co) {
  GNParams params = build_params(co.params, "cor7").params;
  DomainMode mode = DomainMode::kRealLine;
  if (co.mode == "bounded") mode = DomainMode::kBounded;
  else require(co.mode == "real-line", ErrorKind::kParameter, "--mode expects real-line or bounded");
  AnalyticFunction f = build_function(co.function);
  GridFunction g = sample(f, {0.0, 1.0}, co.n, params.m);
  BalanceProfile profile(g, BalanceSpec::from_params(params, mode));
  CoverOptions opts;
  opts.e_resolution = co.e_resolution;
  opts.probes = co.probes;
  opts.balance_tol = co.balance_tol;
  auto rep = build_cover(profile, opts);
  Outcome out;
  out.n = co.n;
  out.result = rep.to_json();
  out.result["function"] = to_json(f);
  out.tolerances = {{"balance", co.balance_tol},
                    {"eps_u", opts.radius.eps_u},
                    {"eps_v", opts.radius.eps_v},
                    {"scan_factor", opts.radius.scan_factor},
                    {"bisection_steps", opts.radius.bisection_steps},
                    {"overlap_bound", 4}};
  out.csv = rep.to_csv();
  out.ok = rep.max_overlap_probe <= 4 && rep.balanced;
  out.summary = "intervals=" + std::to_string(rep.centers.size()) +
                " overlap=" + std::to_string(rep.max_overlap_probe) +
                " uncovered_cells=" + std::to_string(rep.uncovered) +
                " max_residual=" + format_number(rep.max_residual);
  return out;
}

// ---------------------------------------------------------------- estimate

struct EstimateOpts {
  ParamOpts params;
  std::string target = "eq17";
  int restarts = 4;
  int budget = 300;
  std::size_t search_n = 4097;
  std::size_t report_n = 65537;
  int dim = 8;
  double knot_gap = 0.05;
  bool trace = false;
  std::string sweep;
};

Outcome run_estimate(const EstimateOpts& eo, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.restarts = eo.restarts;
  cfg.budget = eo.budget;
  cfg.seed = seed;
  cfg.search_n = eo.search_n;
  cfg.report_n = eo.report_n;
  cfg.space.dim = eo.dim;
  cfg.space.knot_gap = eo.knot_gap;
  Outcome out;
  out.n = eo.report_n;
  out.tolerances = {{"nelder_mead", cfg.tolerance}, {"ceiling", 1e-3}};
  if (!eo.sweep.empty()) {
    json list = parse_json(eo.sweep);
    require(list.is_array(), ErrorKind::kParameter, "--sweep expects a JSON array of parameter objects");
    std::vector<GNParams> tuples;
    for (const auto& item : list) tuples.push_back(params_from_json(item));
    CsvTable t = sweep_constants(tuples, cfg);
    json rows = json::array();
    for (const auto& r : t.rows()) {
      json row;
      for (std::size_t i = 0; i < r.size(); ++i) row[t.header()[i]] = r[i];
      rows.push_back(row);
    }
    out.result = {{"rows", rows}};
    out.csv = t;
    out.summary = std::to_string(t.size()) + " sweep rows";
    return out;
  }
  Target target = eo.target == "generalized" ? Target::generalized(build_params(eo.params, "cor7").params)
                                             : Target::parse(eo.target);
  auto res = estimate_constant(target, cfg);
  out.result = res.to_json(eo.trace);
  out.ok = res.best_ratio <= target.ceiling() + 1e-3;
  out.summary = target.name() + " best_ratio=" + format_number(res.best_ratio);
  return out;
}

// ----------------------------------------------------------------- control

struct ControlOpts {
  int p = 3;
  double T = 1.0;
  std::size_t steps = 4096;
  std::string law = "bump";
  double eps = 1e-2;
  double a = 0.0;
  int sign = 1;
  std::string eps_range = "1e-2:1e-4:5";
  std::size_t trials = 100;
  double eta = 1.0;
  double constraint_tol = 1e-8;
};

ControlLaw build_law(const ControlOpts& co) {
  if (co.law == "zero") return law::Zero{};
  if (co.law == "bump") return law::ScaledBumpTriple{co.eps, co.a, co.sign};
  fail(ErrorKind::kParameter, "--law expects zero or bump");
}

Outcome run_control(const std::string& mode, const ControlOpts& co, std::uint64_t seed) {
  Outcome out;
  out.n = co.steps;
  if (mode == "integrate") {
    auto tr = integrate(ControlSystem{co.p, co.T}, build_law(co), co.steps);
    auto x = tr.terminal();
    out.result = {{"law", law_name(build_law(co))}, {"terminal", {x[0], x[1], x[2], x[3]}}, {"steps", co.steps}};
    CsvTable t({"t", "x1", "x2", "x3", "x4", "w"});
    for (std::size_t i = 0; i < tr.t.size(); ++i)
      t.add_row({format_number(tr.t[i]), format_number(tr.x[0][i]), format_number(tr.x[1][i]),
                 format_number(tr.x[2][i]), format_number(tr.x[3][i]), format_number(tr.w[i])});
    out.csv = t;
    out.summary = "x4(T)=" + format_number(x[3]);
    return out;
  }
  if (mode == "formula") {
    auto fc = terminal_formula_check(ControlSystem{co.p, co.T}, build_law(co), co.steps, co.constraint_tol);
    out.result = {{"law", law_name(build_law(co))}, {"x4", fc.x4}, {"formula", fc.formula}, {"residual", fc.residual}};
    out.tolerances = {{"constraint", co.constraint_tol}};
    out.summary = "residual=" + format_number(fc.residual);
    return out;
  }
  if (mode == "scaling") {
    auto eps = parse_geometric_range(co.eps_range);
    auto sc = scaling_experiment(co.p, co.a, eps, co.sign, co.T, co.steps);
    out.result = sc.to_json();
    out.csv = sc.to_csv();
    out.summary = "slope=" + (sc.slope ? format_number(*sc.slope) : std::string("n/a")) +
                  " expected=" + format_number(sc.expected_slope);
    return out;
  }
  if (mode == "obstruction") {
    auto ob = obstruction_check(co.p, co.T, co.eta, co.trials, seed, co.steps);
    out.result = ob.to_json();
    out.tolerances = {{"normalized_x4", ob.tolerance}};
    out.ok = ob.pass;
    out.summary = std::string(ob.pass ? "pass" : "FAIL") + " worst=" + format_number(ob.worst);
    return out;
  }
  if (mode == "p1") {
    std::vector<ControlLaw> laws{law::Zero{}, law::ScaledBumpTriple{0.1, 0.0, 1}};
    for (std::size_t i = 0; i < co.trials; ++i) {
      auto w = random_control(co.T, co.steps, seed, i);
      double sup = 0.0;
      for (double v : w.values) sup = std::max(sup, std::fabs(v));
      if (sup > 0.0)
        for (double& v : w.values) v *= co.eta / sup;
      laws.push_back(w);
    }
    auto mc = monotone_check_p1(co.T, laws, co.steps);
    out.result = mc.to_json();
    out.tolerances = {{"ulp_slack", 64}};
    out.ok = mc.pass;
    out.summary = mc.pass ? "pass" : "FAIL";
    return out;
  }
  fail(ErrorKind::kParameter, "unknown control mode '" + mode + "'");
}

// ------------------------------------------------------------------ corpus

Outcome run_corpus(const std::string& mode, const std::string& id, std::size_t n, int m) {
  Outcome out;
  if (mode == "list") {
    json arr = json::array();
    for (const auto& e : standard_corpus()) arr.push_back({{"id", e.id}, {"function", to_json(e.function)}});
    out.result = {{"functions", arr}};
    out.summary = std::to_string(arr.size()) + " functions";
    return out;
  }
  if (mode == "emit") {
    AnalyticFunction f = id == "bumpchi" ? AnalyticFunction::bump_chi() : corpus_function(id);
    out.result = to_json(f);
    out.n = n;
    GridFunction g = sample(f, f.support(), n, m);
    std::vector<std::string> header{"x"};
    for (int k = 0; k <= m; ++k) header.push_back("d" + std::to_string(k));
    CsvTable t(header);
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::vector<std::string> row{format_number(g.node(i))};
      for (int k = 0; k <= m; ++k) row.push_back(format_number(g.derivative(k)[i]));
      t.add_row(row);
    }
    out.csv = t;
    out.summary = id;
    return out;
  }
  fail(ErrorKind::kParameter, "unknown corpus mode '" + mode + "'");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gnlab: Gagliardo-Nirenberg laboratory", "gnlab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::string seed_text;
  app.add_option("--seed", seed_text, "random seed (default: $GNLAB_SEED or 0)");
  app.add_option("--jobs", g.jobs, "worker cap (0 = all cores)");
  app.add_flag("--deterministic", g.deterministic, "omit timestamps from reports");
  app.add_option("--report", g.report, "write the JSON report to this path");
  app.add_option("--csv", g.csv, "write the CSV table to this path");

  ParamOpts params_opts;
  std::string solve;
  auto* params_cmd = app.add_subcommand("params", "theta*, relation residual, solve for one exponent");
  add_param_options(params_cmd, params_opts);
  params_cmd->add_option("--solve", solve, "p | q | theta");

  CheckOpts check_opts;
  std::string check_mode;
  auto* check_cmd = app.add_subcommand("check", "evaluate an inequality");
  check_cmd->add_option("mode", check_mode, "generalized | bounded | localized | special | open-problem")->required();
  add_param_options(check_cmd, check_opts.params);
  add_function_options(check_cmd, check_opts.function);
  check_cmd->add_option("--N", check_opts.n, "grid size");
  check_cmd->add_option("--k0", check_opts.k0, "low-order derivative (bounded)");
  check_cmd->add_option("--s", check_opts.s, "low-order exponent (bounded)");
  check_cmd->add_option("--omega", check_opts.omega, "window lo,hi");
  check_cmd->add_option("--probe-ks", check_opts.ks, "orders for open-problem");
  check_cmd->add_option("--probe-q", check_opts.q, "exponent q for open-problem");

  CoverOpts cover_opts;
  auto* cover_cmd = app.add_subcommand("cover", "balance-function covering");
  add_param_options(cover_cmd, cover_opts.params);
  add_function_options(cover_cmd, cover_opts.function);
  cover_cmd->add_option("--N", cover_opts.n, "grid size");
  cover_cmd->add_option("--mode", cover_opts.mode, "real-line | bounded");
  cover_cmd->add_option("--e-resolution", cover_opts.e_resolution, "candidate grid size (0 = N)");
  cover_cmd->add_option("--probes", cover_opts.probes, "overlap probe count");
  cover_cmd->add_option("--balance-tol", cover_opts.balance_tol, "balance residual tolerance");

  EstimateOpts est_opts;
  auto* est_cmd = app.add_subcommand("estimate", "empirical best constant");
  add_param_options(est_cmd, est_opts.params);
  est_cmd->add_option("--target", est_opts.target, "eq16 | eq17 | eq18 | generalized");
  est_cmd->add_option("--restarts", est_opts.restarts, "restart count");
  est_cmd->add_option("--budget", est_opts.budget, "evaluations per restart");
  est_cmd->add_option("--search-N", est_opts.search_n, "grid size during search");
  est_cmd->add_option("--report-N", est_opts.report_n, "grid size for the reported ratio");
  est_cmd->add_option("--dim", est_opts.dim, "spline coefficients");
  est_cmd->add_option("--knot-gap", est_opts.knot_gap, "interior knot clustering");
  est_cmd->add_flag("--trace", est_opts.trace, "include best-so-far traces");
  est_cmd->add_option("--sweep", est_opts.sweep, "JSON array of parameter objects (or @file)");

  ControlOpts ctl_opts;
  std::string ctl_mode;
  auto* ctl_cmd = app.add_subcommand("control", "four-state control system");
  ctl_cmd->add_option("mode", ctl_mode, "integrate | formula | scaling | obstruction | p1")->required();
  ctl_cmd->add_option("--p", ctl_opts.p, "exponent p");
  ctl_cmd->add_option("--T", ctl_opts.T, "horizon");
  ctl_cmd->add_option("--steps", ctl_opts.steps, "RK4 steps");
  ctl_cmd->add_option("--law", ctl_opts.law, "zero | bump");
  ctl_cmd->add_option("--eps", ctl_opts.eps_range, "eps (bump law) or hi:lo:count (scaling)");
  ctl_cmd->add_option("--a", ctl_opts.a, "time dilation exponent a");
  ctl_cmd->add_option("--sign", ctl_opts.sign, "+1 or -1 bump orientation");
  ctl_cmd->add_option("--trials", ctl_opts.trials, "random trials");
  ctl_cmd->add_option("--eta", ctl_opts.eta, "sup bound of random controls");
  ctl_cmd->add_option("--constraint-tol", ctl_opts.constraint_tol, "terminal constraint tolerance");

  std::string corpus_mode, corpus_id = "bumpchi";
  std::size_t corpus_n = 1025;
  int corpus_m = 2;
  auto* corpus_cmd = app.add_subcommand("corpus", "standard test functions");
  corpus_cmd->add_option("mode", corpus_mode, "list | emit")->required();
  corpus_cmd->add_option("--id", corpus_id, "function id for emit");
  corpus_cmd->add_option("--N", corpus_n, "samples for emit");
  corpus_cmd->add_option("--m", corpus_m, "derivative orders for emit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    g.seed = seed_text.empty() ? env_seed() : [&] {
      try {
        std::size_t used = 0;
        auto v = std::stoull(seed_text, &used);
        if (used == seed_text.size()) return static_cast<std::uint64_t>(v);
      } catch (const std::exception&) {
      }
      fail(ErrorKind::kParameter, "--seed must be an unsigned integer");
    }();
    set_max_jobs(g.jobs);

    Outcome outcome;
    std::string command;
    const CLI::App* sub = nullptr;
    if (params_cmd->parsed()) {
      command = "params";
      sub = params_cmd;
      outcome = run_params(params_opts, solve);
    } else if (check_cmd->parsed()) {
      command = "check " + check_mode;
      sub = check_cmd;
      bool function_given = check_cmd->count("--function") + check_cmd->count("--function-json") > 0;
      if ((check_mode == "special") && !check_cmd->count("--N")) check_opts.n = 65537;
      outcome = run_check(check_mode, check_opts, function_given);
    } else if (cover_cmd->parsed()) {
      command = "cover";
      sub = cover_cmd;
      outcome = run_cover(cover_opts);
    } else if (est_cmd->parsed()) {
      command = "estimate";
      sub = est_cmd;
      outcome = run_estimate(est_opts, g.seed);
    } else if (ctl_cmd->parsed()) {
      command = "control " + ctl_mode;
      sub = ctl_cmd;
      if (ctl_mode == "integrate" || ctl_mode == "formula") {
        try {
          ctl_opts.eps = std::stod(ctl_opts.eps_range);
        } catch (const std::logic_error&) {
          fail(ErrorKind::kParameter, "--eps must be a number for the " + ctl_mode + " mode");
        }
      }
      if (ctl_mode == "scaling" && !ctl_cmd->count("--steps")) ctl_opts.steps = 1u << 16;
      if (ctl_mode == "scaling" && !ctl_cmd->count("--p")) ctl_opts.p = 7;
      if (ctl_mode == "obstruction" && !ctl_cmd->count("--p")) ctl_opts.p = 12;
      outcome = run_control(ctl_mode, ctl_opts, g.seed);
    } else if (corpus_cmd->parsed()) {
      command = "corpus " + corpus_mode;
      sub = corpus_cmd;
      outcome = run_corpus(corpus_mode, corpus_id, corpus_n, corpus_m);
    }

    json report;
    report["tool"] = "gnlab";
    report["version"] = GNLAB_VERSION;
    report["command"] = command;
    report["config"] = {{"global", collect_options(&app)}, {"command", collect_options(sub)}};
    report["N"] = outcome.n;
    report["seed"] = g.seed;
    report["tolerances"] = outcome.tolerances;
    report["status"] = outcome.ok ? "ok" : "assertion-failed";
    report["result"] = outcome.result;
    if (!g.deterministic) report["generated_at"] = utc_now();
    const std::string text = report.dump(2) + "\n";

    if (!g.report.empty()) {
      std::ofstream f(g.report, std::ios::binary);
      require(static_cast<bool>(f), ErrorKind::kParameter, "cannot open " + g.report + " for writing");
      f << text;
      out << command << ": " << outcome.summary << "\n";
    } else {
      out << text;
    }
    if (!g.csv.empty()) {
      if (outcome.csv) {
        outcome.csv->write(g.csv);
      } else {
        err << "note: '" << command << "' produces no table; --csv ignored\n";
      }
    }
    if (!outcome.ok) {
      err << "assertion failed: " << command << ": " << outcome.summary << "\n";
      return kExitAssertion;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gnlab::cli
