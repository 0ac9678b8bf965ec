#include "gnlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gnlab/error.hpp"
#include "gnlab/nelder_mead.hpp"
#include "gnlab/parallel.hpp"

namespace gnlab {

using nlohmann::json;

namespace {
// the seminorm is a double sum; larger grids cost too much per evaluation
constexpr std::size_t kSeminormCap = 4097;
}  // namespace

std::vector<double> CandidateSpace::knots() const {
  require(degree >= 1 && dim >= degree + 1, ErrorKind::kParameter, "candidate needs dim >= degree + 1");
  const int interior = dim - degree - 1;
  std::vector<double> inner;
  if (knot_gap <= 0.0) {
    for (int i = 1; i <= interior; ++i) inner.push_back(static_cast<double>(i) / (interior + 1));
  } else {
    require(knot_gap < 0.5, ErrorKind::kParameter, "knot gap must be below 1/2");
    double offset = knot_gap;
    for (int i = 0; i < interior / 2; ++i) {
      inner.push_back(0.5 - offset);
      inner.push_back(0.5 + offset);
      offset *= knot_gap;
    }
    if (interior % 2 == 1) inner.push_back(0.5);
    std::sort(inner.begin(), inner.end());
  }
  std::vector<double> out(static_cast<std::size_t>(degree + 1), 0.0);
  out.insert(out.end(), inner.begin(), inner.end());
  out.insert(out.end(), static_cast<std::size_t>(degree + 1), 1.0);
  return out;
}

AnalyticFunction CandidateSpace::make(std::vector<double> coeffs) const {
  require(static_cast<int>(coeffs.size()) == dim, ErrorKind::kParameter, "coefficient count differs from dim");
  double norm = 0.0;
  for (double c : coeffs) norm += c * c;
  norm = std::sqrt(norm);
  require(norm > 0.0 && std::isfinite(norm), ErrorKind::kParameter, "zero coefficient vector");
  for (double& c : coeffs) c /= norm;
  return AnalyticFunction::spline_bump(std::move(coeffs), knots());
}

Target Target::parse(const std::string& name) {
  if (name == "eq16") return eq16();
  if (name == "eq17") return eq17();
  if (name == "eq18") return eq18();
  fail(ErrorKind::kParameter, "unknown target '" + name + "' (expected eq16, eq17 or eq18)");
}

std::string Target::name() const {
  switch (kind) {
    case TargetKind::kEq16: return "eq16";
    case TargetKind::kEq17: return "eq17";
    case TargetKind::kEq18: return "eq18";
    case TargetKind::kParams: return "generalized";
  }
  return "";
}

int Target::max_derivative() const {
  switch (kind) {
    case TargetKind::kEq16: return 1;
    case TargetKind::kEq17:
    case TargetKind::kEq18: return 2;
    case TargetKind::kParams: return params.m;
  }
  return 0;
}

double Target::ceiling() const {
  if (kind == TargetKind::kEq17) return ratio4_ceiling();
  if (kind == TargetKind::kEq18) return ratio6_ceiling();
  return std::numeric_limits<double>::infinity();
}

double target_ratio(const Target& target, const GridFunction& u) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double r = 0.0;
  switch (target.kind) {
    case TargetKind::kEq16: r = ratio_half(u); break;
    case TargetKind::kEq17: r = ratio4(u); break;
    case TargetKind::kEq18: r = ratio6(u); break;
    case TargetKind::kParams: {
      auto rep = evaluate_generalized(u, target.params);
      if (rep.degenerate || rep.violation_candidate) return nan;
      return rep.ratio;
    }
  }
  return std::isfinite(r) && r > 0.0 ? r : nan;
}

double target_ratio(const Target& target, const AnalyticFunction& f, std::size_t n) {
  if (target.kind == TargetKind::kEq16) n = std::min(n, kSeminormCap);
  return target_ratio(target, sample(f, {0.0, 1.0}, n, target.max_derivative()));
}

std::vector<double> restart_start(const SearchConfig& config, int restart) {
  const auto dim = static_cast<std::size_t>(config.space.dim);
  if (restart == 0) return std::vector<double>(dim, 1.0);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(dim);
  for (double& v : x) v = normal(rng);
  return x;
}

EstimateResult estimate_constant(const Target& target, const SearchConfig& config) {
  require(config.restarts >= 1 && config.budget >= 1, ErrorKind::kParameter, "restarts and budget must be >= 1");
  require(config.search_n >= 5 && config.report_n >= 5, ErrorKind::kParameter, "grids need at least 5 nodes");
  if (target.kind == TargetKind::kParams) {
    validate(target.params);
    require(relation_residual(target.params).holds(1e-10), ErrorKind::kPrecondition,
            "target tuple violates the scaling relation");
  }
  (void)config.space.knots();

  const auto restarts = static_cast<std::size_t>(config.restarts);
  std::vector<RestartTrace> traces(restarts);
  std::vector<std::vector<double>> best_x(restarts);
  std::vector<int> degenerate(restarts, 0);
  parallel_tasks(restarts, [&](std::size_t i) {
    const int idx = static_cast<int>(i);
    auto objective = [&](const std::vector<double>& c) {
      double norm = 0.0;
      for (double v : c) norm += v * v;
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        ++degenerate[i];
        return std::numeric_limits<double>::infinity();
      }
      double r = target_ratio(target, config.space.make(c), config.search_n);
      if (std::isnan(r)) {
        ++degenerate[i];
        return std::numeric_limits<double>::infinity();
      }
      return -r;
    };
    RestartTrace& t = traces[i];
    t.index = idx;
    t.start = restart_start(config, idx);
    NelderMeadOptions opts;
    opts.max_evaluations = config.budget;
    opts.tolerance = config.tolerance;
    opts.initial_step = config.initial_step;
    auto res = nelder_mead(objective, t.start, opts);
    t.evaluations = res.evaluations;
    t.converged = res.converged;
    t.best_ratio = std::isfinite(res.value) ? -res.value : 0.0;
    for (double v : res.best_trace) t.best_so_far.push_back(std::isfinite(v) ? -v : 0.0);
    best_x[i] = res.x;
  });

  EstimateResult out;
  out.target = target;
  out.config = config;
  out.restarts = traces;
  for (int d : degenerate) out.degenerate_evaluations += d;
  int best = -1;
  for (std::size_t i = 0; i < restarts; ++i)
    if (!best_x[i].empty() && traces[i].best_ratio > 0.0 &&
        (best < 0 || traces[i].best_ratio > traces[static_cast<std::size_t>(best)].best_ratio))
      best = static_cast<int>(i);
  require(best >= 0, ErrorKind::kSearchFailure,
          "every candidate was degenerate (" + std::to_string(out.degenerate_evaluations) + " evaluations)");
  out.best_restart = best;
  out.search_ratio = traces[static_cast<std::size_t>(best)].best_ratio;
  std::vector<double> c = best_x[static_cast<std::size_t>(best)];
  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;
  out.coeffs = c;
  out.report_n = target.kind == TargetKind::kEq16 ? std::min(config.report_n, kSeminormCap) : config.report_n;
  out.best_ratio = target_ratio(target, config.space.make(c), out.report_n);
  return out;
}

json EstimateResult::to_json(bool with_trace) const {
  json restarts_json = json::array();
  for (const auto& t : restarts) {
    json r = {{"index", t.index},
              {"best_ratio", t.best_ratio},
              {"evaluations", t.evaluations},
              {"converged", t.converged},
              {"start", t.start}};
    if (with_trace) r["best_so_far"] = t.best_so_far;
    restarts_json.push_back(r);
  }
  json tgt = {{"name", target.name()}, {"ceiling", json_number(target.ceiling())}};
  if (target.kind == TargetKind::kParams) tgt["params"] = gnlab::to_json(target.params);
  return {{"target", tgt},
          {"best_ratio", json_number(best_ratio)},
          {"search_ratio", json_number(search_ratio)},
          {"report_N", report_n},
          {"search_N", config.search_n},
          {"coefficients", coeffs},
          {"knots", config.space.knots()},
          {"best_restart", best_restart},
          {"degenerate_evaluations", degenerate_evaluations},
          {"config",
           {{"restarts", config.restarts},
            {"budget", config.budget},
            {"tolerance", config.tolerance},
            {"initial_step", config.initial_step},
            {"seed", config.seed},
            {"dim", config.space.dim},
            {"degree", config.space.degree},
            {"knot_gap", config.space.knot_gap}}},
          {"restarts", restarts_json}};
}

CsvTable sweep_constants(const std::vector<GNParams>& tuples, const SearchConfig& config) {
  CsvTable table({"params_hash", "target", "best_ratio", "search_ratio", "N", "seed", "status"});
  for (const auto& params : tuples) {
    const std::string hash = params_hash(params);
    try {
      auto res = estimate_constant(Target::generalized(params), config);
      table.add_row({hash, "generalized", format_number(res.best_ratio), format_number(res.search_ratio),
                     std::to_string(res.report_n), std::to_string(config.seed), "ok"});
    } catch (const Error& e) {
      table.add_row({hash, "generalized", "", "", std::to_string(config.report_n), std::to_string(config.seed),
                     std::string("skipped: ") + to_string(e.kind())});
    }
  }
  return table;
}

}  // namespace gnlab
