// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gnlab/control.hpp"
#include "gnlab/corpus.hpp"
#include "gnlab/covering.hpp"
#include "gnlab/error.hpp"
#include "gnlab/extremal.hpp"
#include "gnlab/gn.hpp"
#include "fd_order.hpp"
#include "oracles.hpp"

using namespace gnlab;

namespace {

struct Log {
  std::vector<std::string> lines;
  template <class... Args>
  void operator()(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.emplace_back(buf);
  }
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<bool(Log&)> body;
};

bool within_budget(double seconds, double budget, Log& log) {
  if (seconds <= budget) return true;
  log("runtime %.1f s exceeds the %.0f s budget", seconds, budget);
  return false;
}

// ---------------------------------------------------------------- 1

bool exponent_algebra(Log& log) {
  bool ok = true;
  auto c7 = GNParams::cor7();
  auto t7 = theta_star(c7);
  ok &= t7.is_exact() && *t7.exact() == Rational(1, 2);
  auto unknown_p = c7;
  unknown_p.p = Exponent(1);
  auto solved = solve_exponent(unknown_p, Unknown::kP);
  ok &= solved.p == Exponent(12);
  auto r7 = relation_residual(c7);
  ok &= r7.general.is_exact() && r7.general.exact()->is_zero();
  ok &= r7.critical && r7.critical->is_exact() && r7.critical->exact()->is_zero() && r7.consistent;
  ok &= std::fabs(r7.general.value()) < 1e-12;
  log("cor7: theta* = %s, solved p = %s, residual = %s, critical residual = %s", t7.to_string().c_str(),
      solved.p.to_string().c_str(), r7.general.to_string().c_str(),
      r7.critical ? r7.critical->to_string().c_str() : "n/a");
  for (int k = 1; k <= 3; ++k) {
    auto c6 = GNParams::cor6(k);
    auto t6 = theta_star(c6);
    auto r6 = relation_residual(c6);
    bool good = t6.is_exact() && *t6.exact() == Rational(1, 3) && r6.general.is_exact() &&
                r6.general.exact()->is_zero() && r6.critical && r6.critical->exact()->is_zero() && r6.consistent;
    ok &= good;
    log("cor6 k=%d: theta* = %s, residual = %s", k, t6.to_string().c_str(), r6.general.to_string().c_str());
  }
  return ok;
}

// ---------------------------------------------------------------- 2

bool ibp_identities_hold(Log& log) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& e : standard_corpus()) {
    auto u = sample(e.function, e.function.support(), 1u << 16, 2);
    double r4 = std::fabs(ibp_identities(u, IbpCase::kL4).normalized);
    double r6 = std::fabs(ibp_identities(u, IbpCase::kL6).normalized);
    worst = std::max({worst, r4, r6});
    ok &= r4 <= 1e-6 && r6 <= 1e-6;
    log("%-24s L4 %.3e  L6 %.3e", e.id.c_str(), r4, r6);
  }
  log("worst normalized residual %.3e (bound 1e-6, N = 2^16)", worst);
  return ok;
}

// ---------------------------------------------------------------- 3

bool proof_ceilings(Log& log) {
  bool ok = true;
  const double c4 = std::sqrt(3.0) + 1e-3, c6 = std::cbrt(5.0) + 1e-3;
  for (const auto& r : special_constants(standard_corpus(), (1u << 16) + 1)) {
    ok &= !r.skipped && r.ratio4 <= c4 && r.ratio6 <= c6;
    log("corpus %-24s eq17 %.6f  eq18 %.6f", r.id.c_str(), r.ratio4, r.ratio6);
  }

  // library evaluation of every candidate; the quadrature oracle re-evaluates
  // every tenth one
  CandidateSpace space;
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  double max17 = 0.0, max18 = 0.0, oracle_max = 0.0, worst_gap = 0.0;
  std::size_t evaluated = 0, checked = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> c(static_cast<std::size_t>(space.dim));
    for (double& v : c) v = normal(rng);
    auto g = sample(space.make(c), {0.0, 1.0}, 1025, 2);
    double r17 = target_ratio(Target::eq17(), g), r18 = target_ratio(Target::eq18(), g);
    if (std::isnan(r17) || std::isnan(r18)) continue;
    ++evaluated;
    max17 = std::max(max17, r17);
    max18 = std::max(max18, r18);
    if (i % 10 == 0) {
      double o = oracle::eq17_ratio(c, space.knots());
      oracle_max = std::max(oracle_max, o);
      worst_gap = std::max(worst_gap, std::fabs(r17 / o - 1.0));
      ++checked;
    }
  }
  ok &= evaluated == 10000 && max17 <= c4 && max18 <= c6 && oracle_max <= c4 && worst_gap <= 1e-3;
  log("10^4 random candidates (N = 1025): max eq17 %.6f, max eq18 %.6f, evaluated %zu", max17, max18, evaluated);
  log("oracle on %zu of them: max eq17 %.6f, worst relative gap to the library %.2e (bound 1e-3)", checked,
      oracle_max, worst_gap);

  auto e17 = estimate_constant(Target::eq17(), SearchConfig{});
  ok &= e17.best_ratio <= c4 && e17.best_ratio >= 1.2 && e17.best_ratio >= max17;
  log("optimizer eq17 %.6f (needs >= 1.2, <= %.6f, >= random search %.6f)", e17.best_ratio, c4, max17);
  auto e18 = estimate_constant(Target::eq18(), SearchConfig{});
  ok &= e18.best_ratio <= c6;
  log("optimizer eq18 %.6f (<= %.6f)", e18.best_ratio, c6);
  return ok;
}

// ---------------------------------------------------------------- 4

bool scale_invariance(Log& log) {
  bool ok = true;
  auto params = GNParams::cor7();
  double worst_dil = 0.0, worst_amp = 0.0;
  for (const auto& e : standard_corpus()) {
    double base = evaluate_generalized(sample(e.function, {0.0, 1.0}, 8193, 3), params).ratio;
    for (double lambda : {0.25, 0.5, 2.0, 4.0}) {
      auto f = e.function.dilated(lambda);
      double r = evaluate_generalized(sample(f, f.support(), 8193, 3), params).ratio;
      worst_dil = std::max(worst_dil, std::fabs(r / base - 1.0));
    }
    for (double c : {1e-3, 3.0, 1e3}) {
      double r = evaluate_generalized(sample(e.function.scaled(c), {0.0, 1.0}, 8193, 3), params).ratio;
      worst_amp = std::max(worst_amp, std::fabs(r / base - 1.0));
    }
  }
  ok = worst_dil <= 1e-2 && worst_amp <= 1e-12;
  log("dilation lambda in {1/4,1/2,2,4}: worst relative change %.3e (bound 1e-2)", worst_dil);
  log("amplitude c in {1e-3,3,1e3}: worst relative change %.3e (bound 1e-12)", worst_amp);
  return ok;
}

// ---------------------------------------------------------------- 5

bool covering_guarantees(Log& log) {
  bool ok = true;
  auto spec = BalanceSpec::from_params(GNParams::cor7());
  for (const auto& e : standard_corpus()) {
    BalanceProfile prof(sample(e.function, {0.0, 1.0}, 8193, 3), spec);
    std::vector<std::size_t> deficits;
    CoverReport full;
    for (std::size_t res : {2049u, 4097u, 8193u}) {
      CoverOptions opts;
      opts.e_resolution = res;
      auto rep = build_cover(prof, opts);
      deficits.push_back(rep.uncovered);
      if (res == 8193u) full = rep;
    }
    bool monotone = deficits[0] >= deficits[1] && deficits[1] >= deficits[2];
    bool good = full.max_overlap_probe <= 4 && full.max_residual <= 1e-6 && full.uncovered <= 2 && monotone;
    ok &= good;
    log("%-24s intervals %3zu  overlap %d  max residual %.2e  deficit cells %zu/%zu/%zu", e.id.c_str(),
        full.centers.size(), full.max_overlap_probe, full.max_residual, deficits[0], deficits[1], deficits[2]);
  }
  return ok;
}

// ---------------------------------------------------------------- 6

bool control_scaling(Log& log) {
  auto eps = parse_geometric_range("1e-2:1e-4:5");
  // the standard bump as stated: w = eps chi'''(t eps^{-a})
  auto a3 = scaling_experiment(7, 0.3, eps, 1);
  bool neg = std::all_of(a3.rows.begin(), a3.rows.end(), [](const ScalingRow& r) { return r.sign < 0; });
  bool ok3 = a3.slope && std::fabs(*a3.slope - 10.1) <= 0.05 && neg;
  log("p=7 a=0.3: slope %.4f (target 10.1 +- 0.05), all signs negative: %s -> %s", a3.slope.value_or(NAN),
      neg ? "yes" : "no", ok3 ? "ok" : "miss");
  for (const auto& r : a3.rows) log("    eps %.3e  x4 %+.6e", r.eps, r.x4);

  auto a0 = scaling_experiment(7, 0.0, eps, 1);
  bool pos = std::all_of(a0.rows.begin(), a0.rows.end(), [](const ScalingRow& r) { return r.sign > 0; });
  bool ok0 = a0.slope && std::fabs(*a0.slope - 6.0) <= 0.05 && pos;
  log("p=7 a=0:   slope %.4f (target 6 +- 0.05), all signs positive: %s -> %s", a0.slope.value_or(NAN),
      pos ? "yes" : "no", ok0 ? "ok" : "miss");

  // diagnostics, not part of the verdict
  log("diagnostic: int (chi chi' chi'')^2 = %.6e, int (chi'')^7 = %.6e", a3.product_integral, a3.power_integral);
  log("diagnostic: chain exponents give min(6+13a, p(1+a)+a) = %.2f at a=0.3 and %.2f at a=0", a3.expected_slope,
      a0.expected_slope);
  auto flipped = scaling_experiment(7, 0.3, eps, -1);
  log("diagnostic: -chi base, a=0.3: slope %.4f, expected sign %+d", flipped.slope.value_or(NAN),
      flipped.expected_sign);
  auto far = scaling_experiment(7, 0.0, parse_geometric_range("1e-6:1e-8:5"), 1);
  log("diagnostic: a=0 over [1e-8, 1e-6]: slope %.4f", far.slope.value_or(NAN));
  return ok3 && ok0;
}

// ---------------------------------------------------------------- 7

bool obstruction(Log& log) {
  auto r12 = obstruction_check(12, 1.0, 1.0, 100, 7);
  log("p=12 T=1 eta=1: 100 trials, worst normalized x4 %.3e -> %s", r12.worst, r12.pass ? "pass" : "fail");
  auto r13 = obstruction_check(13, 2.0, std::pow(0.5, 1.0 / 7.0), 100, 7);
  log("p=13 T=2 eta=2^{-1/7}: condition %.6f, worst normalized x4 %.3e -> %s", r13.condition, r13.worst,
      r13.pass ? "pass" : "fail");
  std::size_t skipped = 0;
  for (const auto& t : r12.trials) skipped += t.skipped;
  for (const auto& t : r13.trials) skipped += t.skipped;
  std::vector<ControlLaw> laws{law::Zero{}, law::ScaledBumpTriple{0.1, 0.0, 1}, law::ScaledBumpTriple{0.3, 0.5, -1}};
  for (std::size_t i = 0; i < 100; ++i) laws.push_back(random_control(1.0, 4096, 7, i));
  auto mono = monotone_check_p1(1.0, laws, 4096);
  double worst = 0.0;
  for (const auto& l : mono.laws) worst = std::min(worst, l.worst_step);
  log("p=1 monotonicity over %zu laws: most negative step %.3e -> %s", laws.size(), worst,
      mono.pass ? "pass" : "fail");
  log("skipped trials: %zu", skipped);
  return r12.pass && r13.pass && mono.pass && skipped == 0;
}

// ---------------------------------------------------------------- 8

bool numerics_hygiene(Log& log) {
  std::vector<CorpusEntry> fams = standard_corpus();
  fams.push_back({"scaled_bump", AnalyticFunction::scaled_bump(0.2, 0.7)});
  fams.push_back({"plateau", AnalyticFunction::plateau(0.1, 0.9, 0.2)});
  double min_order = 1e9;
  std::string where;
  std::size_t measured = 0;
  for (const auto& e : fams) {
    Interval s = e.function.support();
    auto eval = [&](int i, double x) { return evaluate(e.function, i, x, kOrderCeiling); };
    for (int i = 0; i < kDefaultMaxOrder; ++i) {
      auto r = oracle::fd_convergence_order(eval, i, s.lo, s.hi, 4e-3 * s.length());
      if (!r) {
        min_order = 0.0;
        where = e.id + " D^" + std::to_string(i) + " (no step above roundoff)";
        continue;
      }
      ++measured;
      if (r->order < min_order) {
        min_order = r->order;
        where = e.id + " D^" + std::to_string(i);
      }
    }
  }
  log("finite-difference convergence over %zu (function, order) pairs: minimum order %.3f at %s (bound 1.9)", measured,
      min_order, where.c_str());

  const double t_end = 1.0;
  auto ex = oracle::chain_state(1.0, 3, t_end);
  double prev = 0.0, min_factor = 1e9;
  for (std::size_t steps : {64u, 128u, 256u, 512u}) {
    auto x = integrate({3, t_end}, law::ScaledBumpTriple{1.0, 0.0, 1}, steps).terminal();
    double err = 0.0;
    for (int k = 0; k < 4; ++k) err = std::max(err, std::fabs(x[k] - ex[k]));
    if (prev > 0.0) {
      min_factor = std::min(min_factor, prev / err);
      log("RK4 steps %4zu: error %.3e, reduction %.2f", steps, err, prev / err);
    } else {
      log("RK4 steps %4zu: error %.3e", steps, err);
    }
    prev = err;
  }
  return min_order >= 1.9 && min_factor >= 12.0;
}

// ---------------------------------------------------------------- 9

bool determinism(Log& log) {
  std::vector<std::vector<std::string>> commands{
      {"params", "--j", "2", "--m", "3", "--ks", "0,1,2", "--q", "2", "--r", "inf", "--theta", "0.5"},
      {"check", "generalized", "--function", "bumpchi", "--preset", "cor7", "--N", "4097"},
      {"check", "bounded", "--function", "sine_bump_3", "--N", "2049", "--omega", "0.2,0.8"},
      {"check", "localized", "--function", "spline_bump", "--omega", "0.4,0.6"},
      {"check", "special", "--N", "4097"},
      {"check", "open-problem", "--probe-ks", "0,1"},
      {"cover", "--function", "perturbed_plateau", "--N", "4097"},
      {"--seed", "11", "estimate", "--target", "eq17", "--restarts", "3", "--budget", "40", "--search-N", "513",
       "--report-N", "2049", "--trace"},
      {"control", "integrate", "--p", "3", "--steps", "2048"},
      {"control", "formula", "--p", "12", "--steps", "8192"},
      {"control", "scaling", "--p", "7", "--a", "0.3", "--eps", "1e-2:1e-4:5"},
      {"--seed", "7", "control", "obstruction", "--trials", "20"},
      {"--seed", "7", "control", "p1", "--trials", "10"},
      {"corpus", "list"},
      {"corpus", "emit", "--id", "perturbed_poly_plateau"},
  };
  bool ok = true;
  for (auto args : commands) {
    args.insert(args.begin(), "--deterministic");
    std::ostringstream o1, e1, o2, e2;
    int c1 = cli::dispatch(args, o1, e1);
    int c2 = cli::dispatch(args, o2, e2);
    bool same = c1 == 0 && c2 == 0 && o1.str() == o2.str() && !o1.str().empty();
    ok &= same;
    std::string name;
    for (const auto& a : args) name += (name.empty() ? "" : " ") + a;
    log("%s  %s (%zu bytes)", same ? "identical" : "DIFFERENT", name.c_str(), o1.str().size());
  }
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "exponent algebra", 1.0, exponent_algebra},
      {2, "integration-by-parts identities", 10.0, ibp_identities_hold},
      {3, "proof-constant ceilings", 120.0, proof_ceilings},
      {4, "scale and dilation invariance", 10.0, scale_invariance},
      {5, "covering guarantees", 60.0, covering_guarantees},
      {6, "control scaling exponents", 30.0, control_scaling},
      {7, "obstruction and p=1 monotonicity", 60.0, obstruction},
      {8, "numerics hygiene", 30.0, numerics_hygiene},
      {9, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Log log;
    bool pass = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      pass = c.body(log);
    } catch (const std::exception& e) {
      log("error: %s", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = within_budget(secs, c.budget_seconds, log) && pass;
    failed += !pass;
    std::printf("criterion %d: %s  %s (%.2f s)\n", c.id, pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& l : log.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %zu passed, %d failed\n", criteria.size(), criteria.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
