#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnlab/csv.hpp"
#include "gnlab/funcspace.hpp"
#include "gnlab/gn.hpp"

namespace gnlab {

/// chi(t) S(t) with S a clamped B-spline on [0,1]. Interior knots sit at
/// 0.5 -+ gap^k (k = 1, 2, ...), plus 0.5 when their count is odd; gap <= 0
/// gives uniform knots.
struct CandidateSpace {
  int dim = 8;
  int degree = 3;
  double knot_gap = 0.05;

  std::vector<double> knots() const;
  /// Coefficients normalized to unit Euclidean length; parameter error for
  /// the zero vector.
  AnalyticFunction make(std::vector<double> coeffs) const;
};

enum class TargetKind { kEq16, kEq17, kEq18, kParams };

struct Target {
  TargetKind kind = TargetKind::kEq17;
  GNParams params;

  static Target eq16() { return {TargetKind::kEq16, {}}; }
  static Target eq17() { return {TargetKind::kEq17, {}}; }
  static Target eq18() { return {TargetKind::kEq18, {}}; }
  static Target generalized(const GNParams& p) { return {TargetKind::kParams, p}; }
  static Target parse(const std::string& name);  // "eq16" | "eq17" | "eq18"

  std::string name() const;
  int max_derivative() const;
  /// sqrt(3) for eq17, 5^{1/3} for eq18, infinity otherwise.
  double ceiling() const;
};

/// lhs/rhs of the target on a sampled candidate; NaN when the rhs vanishes.
double target_ratio(const Target& target, const GridFunction& u);
/// Samples f on [0,1] with the derivatives the target needs.
double target_ratio(const Target& target, const AnalyticFunction& f, std::size_t n);

struct SearchConfig {
  int restarts = 4;
  int budget = 300;  // evaluations per restart
  double tolerance = 1e-10;
  double initial_step = 0.3;
  std::uint64_t seed = 0;
  std::size_t search_n = 4097;
  std::size_t report_n = 65537;
  CandidateSpace space;
};

struct RestartTrace {
  int index = 0;
  std::vector<double> start;
  double best_ratio = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_so_far;  // non-decreasing
};

struct EstimateResult {
  Target target;
  double best_ratio = 0.0;    // at report_n
  double search_ratio = 0.0;  // at search_n
  std::size_t report_n = 0;
  std::vector<double> coeffs;  // unit length
  int best_restart = 0;
  int degenerate_evaluations = 0;
  std::vector<RestartTrace> restarts;
  SearchConfig config;

  nlohmann::json to_json(bool with_trace) const;
};

/// Nelder-Mead with restarts over unit-normalized spline coefficients. Restart
/// i draws its start from a stream seeded by (seed, i); restart 0 starts at
/// the constant spline (chi itself).
EstimateResult estimate_constant(const Target& target, const SearchConfig& config);

/// Deterministic start point of a restart.
std::vector<double> restart_start(const SearchConfig& config, int restart);

/// One row per tuple: params_hash,target,best_ratio,search_ratio,N,seed,status.
/// Infeasible tuples become skipped rows.
CsvTable sweep_constants(const std::vector<GNParams>& tuples, const SearchConfig& config);

}  // namespace gnlab
