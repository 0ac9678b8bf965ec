#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnlab/csv.hpp"

namespace gnlab {

/// x1' = w, x2' = x1, x3' = x2, x4' = x1^2 x2^2 x3^2 - x1^p, x(0) = 0.
struct ControlSystem {
  int p = 1;
  double T = 1.0;
};

void validate(const ControlSystem& sys);

namespace law {
struct Zero {};
/// w(t) = sign * eps * chi'''(t eps^{-a}); the scaled support is [0, eps^a].
struct ScaledBumpTriple {
  double eps = 1e-2;
  double a = 0.0;
  int sign = 1;
};
/// Linear interpolation of samples at uniform nodes of [0, T].
struct GridSamples {
  double T = 1.0;
  std::vector<double> values;
};
}  // namespace law

using ControlLaw = std::variant<law::Zero, law::ScaledBumpTriple, law::GridSamples>;

double control_value(const ControlLaw& w, double t);
std::string law_name(const ControlLaw& w);

struct Trajectory {
  std::vector<double> t;
  std::array<std::vector<double>, 4> x;
  std::vector<double> w;  // control at the nodes

  std::array<double, 4> terminal() const {
    return {x[0].back(), x[1].back(), x[2].back(), x[3].back()};
  }
};

/// Classical fixed-step RK4. Divergence error on a non-finite state.
Trajectory integrate(const ControlSystem& sys, const ControlLaw& w, std::size_t steps);

struct FormulaCheck {
  double x4 = 0.0;
  double formula = 0.0;  // int (u u' u'')^2 - int (u'')^p with u = x3
  double residual = 0.0;
};

/// Precondition error unless |x_i(T)| <= constraint_tol for i = 1, 2, 3.
FormulaCheck terminal_formula_check(const ControlSystem& sys, const ControlLaw& w, std::size_t steps,
                                    double constraint_tol = 1e-8);

struct ScalingRow {
  double eps = 0.0;
  double x4 = 0.0;
  int sign = 0;
};

struct ScalingResult {
  int p = 0;
  double a = 0.0;
  int base_sign = 1;
  double T = 0.0;
  std::size_t steps = 0;
  std::vector<ScalingRow> rows;
  std::optional<double> slope;  // needs two non-zero rows
  double stated_slope = 0.0;    // min(7 + 12a, p(1+a) + 1)
  double expected_slope = 0.0;  // min(6 + 13a, p(1+a) + a)
  int expected_sign = 0;        // sign of the dominant term for this base
  double product_integral = 0.0;  // int (chi chi' chi'')^2 of the base
  double power_integral = 0.0;    // int (chi'')^p of the base

  nlohmann::json to_json() const;
  CsvTable to_csv() const;
};

/// Parses "hi:lo:count" into a geometric list; parameter error when malformed.
std::vector<double> parse_geometric_range(const std::string& text);

ScalingResult scaling_experiment(int p, double a, const std::vector<double>& eps, int base_sign = 1,
                                 double T = 1.0, std::size_t steps = 1u << 16);

/// Random smooth control: Fourier modes k = 1..8 with amplitudes ~ N(0, 1/k),
/// sampled at 2 * steps + 1 nodes. Stream seeded by (seed, trial).
law::GridSamples random_control(double T, std::size_t steps, std::uint64_t seed, std::size_t trial);

/// Subtracts the (1, t, t^2) control component that cancels x1(T), x2(T),
/// x3(T), then rescales to sup |w| = eta. nullopt when the 3x3 system is
/// singular or the corrected control vanishes.
std::optional<law::GridSamples> project_control(const law::GridSamples& w, std::size_t steps, double eta);

struct ObstructionTrial {
  std::size_t index = 0;
  bool skipped = false;
  std::string note;
  double x4 = 0.0;
  double normalizer = 0.0;  // int (u u' u'')^2 + int |u''|^p
  double normalized = 0.0;
  double constraint = 0.0;  // max |x_i(T)|, i <= 3
};

struct ObstructionResult {
  int p = 0;
  double T = 0.0;
  double eta = 0.0;
  double condition = 0.0;  // T^{p-12} eta^{p-6}
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double tolerance = 1e-10;
  bool pass = true;
  double worst = 0.0;  // smallest normalized x4
  std::vector<ObstructionTrial> trials;

  nlohmann::json to_json() const;
};

ObstructionResult obstruction_check(int p, double T, double eta, std::size_t trials, std::uint64_t seed,
                                    std::size_t steps = 4096);

struct MonotoneLawResult {
  std::string name;
  double worst_step = 0.0;  // most negative increment of x2 + x4
  bool pass = true;
};

struct MonotoneResult {
  bool pass = true;
  std::vector<MonotoneLawResult> laws;
  nlohmann::json to_json() const;
};

/// p = 1: x2 + x4 must be non-decreasing along every trajectory.
MonotoneResult monotone_check_p1(double T, const std::vector<ControlLaw>& laws, std::size_t steps);

}  // namespace gnlab
