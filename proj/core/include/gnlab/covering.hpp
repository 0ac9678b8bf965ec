#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnlab/csv.hpp"
#include "gnlab/exact.hpp"
#include "gnlab/funcspace.hpp"
#include "gnlab/gn.hpp"
#include "gnlab/quadrature.hpp"

namespace gnlab {

enum class DomainMode { kRealLine, kBounded };

struct BalanceSpec {
  std::vector<int> ks{0};
  Exponent q = Exponent(1);
  int m = 1;
  Exponent r = Exponent(1);
  DomainMode mode = DomainMode::kRealLine;

  static BalanceSpec from_params(const GNParams& params, DomainMode mode = DomainMode::kRealLine);
  int kappa() const noexcept { return static_cast<int>(ks.size()); }
  double kbar() const;
};

/// Real-line mode needs kbar < m - 1.
void validate(const BalanceSpec& spec);

/// Window norms of v = D^{k_1}u ... D^{k_kappa}u and D^m u, precomputed so
/// that alpha and beta cost O(1) and are continuous in h.
///   alpha_x(h) = w^{kbar - 1/(q kappa)} ||v||_{L^q(window)}^{1/kappa}
///   beta_x(h)  = w^{m - 1/r} ||D^m u||_{L^r(window)}
/// Real line: window (x-h, x+h), w = h. Bounded: window (x-h, x+h) cut to
/// (0,1), w its length.
class BalanceProfile {
 public:
  BalanceProfile(const GridFunction& u, BalanceSpec spec);

  const BalanceSpec& spec() const noexcept { return spec_; }
  const GridFunction& grid() const noexcept { return u_; }

  double alpha(double x, double h) const;
  double beta(double x, double h) const;
  double v_at(double x) const;
  double u_at(double x) const;
  double u_sup() const noexcept { return u_sup_; }
  double v_sup() const noexcept { return v_sup_; }

 private:
  struct WindowNorm {
    WindowNorm(std::span<const double> f, const Interval& grid, const Exponent& p);
    double operator()(double a, double b) const;

    Exponent p;
    double scale = 0.0;
    std::vector<double> powered;
    quadrature::CumulativeIntegral cumulative;
    quadrature::RangeMax range_max;
  };

  struct Window {
    double a, b, weight;
  };
  Window window(double x, double h) const;

  GridFunction u_;
  BalanceSpec spec_;
  std::vector<double> v_;
  double u_sup_ = 0.0;
  double v_sup_ = 0.0;
  WindowNorm v_norm_;
  WindowNorm top_norm_;
};

double balance_alpha(const BalanceProfile& profile, double x, double h);
double balance_beta(const BalanceProfile& profile, double x, double h);

struct RadiusOptions {
  double scan_factor = 1.05;
  int bisection_steps = 60;
  double eps_u = 1e-9;  // relative to sup |u|
  double eps_v = 1e-9;  // relative to sup |v|
  double h_max_factor = 10.0;
};

struct CriticalRadius {
  double radius = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // |alpha - beta| / max(alpha, beta)
};

bool in_E(const BalanceProfile& profile, double x, const RadiusOptions& opts = {});

/// First sign change of alpha - beta on a geometric scan from twice the grid
/// spacing, refined by bisection. Domain error when x is not in E; no-crossing
/// error when alpha > beta up to h_max.
CriticalRadius critical_radius(const BalanceProfile& profile, double x, const RadiusOptions& opts = {});

/// Indices of the selected sub-collection: greedy by descending radius,
/// skipping centres inside an already selected open interval, then a sweep
/// adding any input point left uncovered. Output sorted by centre.
std::vector<std::size_t> besicovitch_select(const std::vector<double>& centers, const std::vector<double>& radii);

/// Max number of open intervals (c - r, c + r) containing one of `probes`
/// uniform points of [lo, hi].
int overlap_at_probes(const std::vector<double>& centers, const std::vector<double>& radii, const Interval& span,
                      std::size_t probes);
/// Exact maximum of the overlap function over R.
int overlap_exact(const std::vector<double>& centers, const std::vector<double>& radii);

struct CoverOptions {
  std::size_t e_resolution = 0;  // E candidate grid size; 0 = every grid node
  std::size_t probes = 10000;
  double balance_tol = 1e-6;
  RadiusOptions radius;
};

struct CoverReport {
  std::vector<double> centers;
  std::vector<double> radii;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> residuals;
  std::size_t candidates = 0;   // E points at the candidate resolution
  std::size_t e_points = 0;     // E points on the full grid
  std::size_t uncovered = 0;    // full-grid E points outside every interval
  double deficit = 0.0;         // uncovered * spacing
  int max_overlap_probe = 0;
  int max_overlap_exact = 0;
  double max_residual = 0.0;
  bool balanced = true;         // every residual <= balance_tol
  BalanceSpec spec;
  std::size_t n = 0;
  std::size_t e_resolution = 0;
  Interval grid;
  double balance_tol = 0.0;

  nlohmann::json to_json() const;
  CsvTable to_csv() const;
};

CoverReport build_cover(const BalanceProfile& profile, const CoverOptions& opts = {});

nlohmann::json to_json(const BalanceSpec& spec);

}  // namespace gnlab
