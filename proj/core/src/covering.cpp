#include "gnlab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>

#include "gnlab/error.hpp"
#include "gnlab/funcspace_json.hpp"
#include "gnlab/norms.hpp"
#include "gnlab/parallel.hpp"

namespace gnlab {

using nlohmann::json;

BalanceSpec BalanceSpec::from_params(const GNParams& params, DomainMode mode) {
  return BalanceSpec{params.ks, params.q, params.m, params.r, mode};
}

double BalanceSpec::kbar() const {
  double sum = 0.0;
  for (int k : ks) sum += k;
  return sum / static_cast<double>(ks.size());
}

void validate(const BalanceSpec& spec) {
  require(!spec.ks.empty() && std::is_sorted(spec.ks.begin(), spec.ks.end()) && spec.ks.front() >= 0,
          ErrorKind::kParameter, "orders must be non-empty, sorted and >= 0");
  require(spec.ks.back() < spec.m, ErrorKind::kParameter, "orders must stay below m");
  require(spec.q.is_infinite() || spec.q.value() >= 1.0, ErrorKind::kParameter, "q must lie in [1, inf]");
  require(spec.r.is_infinite() || spec.r.value() >= 1.0, ErrorKind::kParameter, "r must lie in [1, inf]");
  if (spec.mode == DomainMode::kRealLine)
    require(spec.kbar() < spec.m - 1, ErrorKind::kParameter,
            "real-line covering needs kbar < m - 1 (kbar = " + format_number(spec.kbar()) +
                ", m = " + std::to_string(spec.m) + ")");
}

// ------------------------------------------------------------------ profile

BalanceProfile::WindowNorm::WindowNorm(std::span<const double> f, const Interval& grid, const Exponent& p_)
    : p(p_),
      scale([&] {
        double s = 0.0;
        for (double v : f) s = std::max(s, std::fabs(v));
        return s;
      }()),
      powered([&] {
        std::vector<double> out(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
          double a = scale > 0.0 ? std::fabs(f[i]) / scale : 0.0;
          out[i] = p_.is_infinite() ? a : std::pow(a, p_.value());
        }
        return out;
      }()),
      cumulative(powered, grid),
      range_max(powered, grid) {}

double BalanceProfile::WindowNorm::operator()(double a, double b) const {
  if (scale == 0.0) return 0.0;
  if (p.is_infinite()) return scale * range_max(a, b);
  double integral = cumulative.over(a, b);
  if (integral <= 0.0) return 0.0;
  return scale * std::pow(integral, 1.0 / p.value());
}

namespace {

std::vector<double> product_row(const GridFunction& u, const std::vector<int>& ks) {
  return derivative_product(u, ks);
}

double sup_abs(std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s = std::max(s, std::fabs(v));
  return s;
}

}  // namespace

BalanceProfile::BalanceProfile(const GridFunction& u, BalanceSpec spec)
    : u_(u),
      spec_((validate(spec), std::move(spec))),
      v_(product_row(u_, spec_.ks)),
      u_sup_(sup_abs(u_.values())),
      v_sup_(sup_abs(v_)),
      v_norm_(v_, u_.interval(), spec_.q),
      top_norm_(u_.derivative(spec_.m), u_.interval(), spec_.r) {
  require(u_.max_derivative() >= spec_.m, ErrorKind::kParameter, "grid function lacks order m");
}

BalanceProfile::Window BalanceProfile::window(double x, double h) const {
  require(h > 0.0 && std::isfinite(h), ErrorKind::kParameter, "window radius must be > 0");
  if (spec_.mode == DomainMode::kRealLine) return {x - h, x + h, h};
  double a = std::max(x - h, 0.0);
  double b = std::min(x + h, 1.0);
  return {a, b, std::max(b - a, 0.0)};
}

double BalanceProfile::alpha(double x, double h) const {
  Window w = window(x, h);
  if (w.weight <= 0.0) return 0.0;
  double norm = v_norm_(w.a, w.b);
  if (norm == 0.0) return 0.0;
  double expo = spec_.kbar() - spec_.q.reciprocal().value() / spec_.kappa();
  return std::pow(w.weight, expo) * std::pow(norm, 1.0 / spec_.kappa());
}

double BalanceProfile::beta(double x, double h) const {
  Window w = window(x, h);
  if (w.weight <= 0.0) return 0.0;
  double norm = top_norm_(w.a, w.b);
  if (norm == 0.0) return 0.0;
  double expo = spec_.m - spec_.r.reciprocal().value();
  return std::pow(w.weight, expo) * norm;
}

double BalanceProfile::v_at(double x) const {
  const Interval& g = u_.interval();
  if (x < g.lo || x > g.hi) return 0.0;
  double s = (x - g.lo) / u_.spacing();
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= v_.size()) return v_.back();
  double frac = s - static_cast<double>(i);
  return v_[i] + frac * (v_[i + 1] - v_[i]);
}

double BalanceProfile::u_at(double x) const { return u_.interpolate(0, x); }

double balance_alpha(const BalanceProfile& profile, double x, double h) { return profile.alpha(x, h); }
double balance_beta(const BalanceProfile& profile, double x, double h) { return profile.beta(x, h); }

// ------------------------------------------------------------ critical radius

bool in_E(const BalanceProfile& profile, double x, const RadiusOptions& opts) {
  if (profile.u_sup() == 0.0 || profile.v_sup() == 0.0) return false;
  return std::fabs(profile.u_at(x)) > opts.eps_u * profile.u_sup() &&
         std::fabs(profile.v_at(x)) > opts.eps_v * profile.v_sup();
}

namespace {

CriticalRadius settle(const BalanceProfile& profile, double x, double h) {
  CriticalRadius out;
  out.radius = h;
  out.alpha = profile.alpha(x, h);
  out.beta = profile.beta(x, h);
  double top = std::max(out.alpha, out.beta);
  out.residual = top > 0.0 ? std::fabs(out.alpha - out.beta) / top : 0.0;
  return out;
}

}  // namespace

CriticalRadius critical_radius(const BalanceProfile& profile, double x, const RadiusOptions& opts) {
  require(opts.scan_factor > 1.0, ErrorKind::kParameter, "scan factor must exceed 1");
  require(in_E(profile, x, opts), ErrorKind::kDomain,
          "x = " + format_number(x) + " is outside E (u(x) = 0 or v(x) = 0 up to thresholds)");
  const double h0 = 2.0 * profile.grid().spacing();
  const double h_max = opts.h_max_factor * profile.grid().interval().length();
  auto gap = [&](double h) { return profile.alpha(x, h) - profile.beta(x, h); };

  double lo = 0.0, hi = 0.0;
  if (gap(h0) > 0.0) {
    lo = h0;
    hi = h0;
    while (true) {
      hi = lo * opts.scan_factor;
      if (hi > h_max)
        fail(ErrorKind::kNoCrossing, "no crossing of alpha and beta below h_max = " + format_number(h_max) +
                                         " at x = " + format_number(x));
      if (gap(hi) <= 0.0) break;
      lo = hi;
    }
  } else {
    // already balanced at the scan floor: walk down until alpha > beta
    hi = h0;
    lo = h0;
    int steps = 0;
    while (gap(lo) <= 0.0) {
      hi = lo;
      lo /= opts.scan_factor;
      if (++steps > 2000)
        fail(ErrorKind::kNoCrossing, "alpha never exceeds beta near h = 0 at x = " + format_number(x));
    }
  }
  for (int i = 0; i < opts.bisection_steps; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // hi is the smallest bracketed h with alpha <= beta
  return settle(profile, x, hi);
}

// ---------------------------------------------------------------- selection

std::vector<std::size_t> besicovitch_select(const std::vector<double>& centers, const std::vector<double>& radii) {
  require(centers.size() == radii.size(), ErrorKind::kParameter, "centers and radii differ in length");
  for (double r : radii) require(r > 0.0, ErrorKind::kParameter, "radii must be > 0");
  const std::size_t n = centers.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });

  std::vector<std::size_t> chosen;
  auto covered = [&](std::size_t i) {
    for (std::size_t s : chosen)
      if (std::fabs(centers[i] - centers[s]) < radii[s]) return true;
    return false;
  };
  for (std::size_t i : order)
    if (!covered(i)) chosen.push_back(i);
  // completion sweep
  for (std::size_t i = 0; i < n; ++i)
    if (!covered(i)) chosen.push_back(i);

  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return centers[a] < centers[b] || (centers[a] == centers[b] && a < b);
  });
  return chosen;
}

int overlap_at_probes(const std::vector<double>& centers, const std::vector<double>& radii, const Interval& span,
                      std::size_t probes) {
  require(probes >= 2, ErrorKind::kParameter, "need at least two probe points");
  int best = 0;
  for (std::size_t k = 0; k < probes; ++k) {
    double x = span.lo + span.length() * static_cast<double>(k) / static_cast<double>(probes - 1);
    int count = 0;
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (std::fabs(x - centers[i]) < radii[i]) ++count;
    best = std::max(best, count);
  }
  return best;
}

int overlap_exact(const std::vector<double>& centers, const std::vector<double>& radii) {
  // open intervals: at equal coordinates, closings are processed first
  std::vector<std::pair<double, int>> events;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    events.emplace_back(centers[i] - radii[i], +1);
    events.emplace_back(centers[i] + radii[i], -1);
  }
  std::sort(events.begin(), events.end());
  int active = 0, best = 0;
  for (const auto& [x, d] : events) {
    active += d;
    best = std::max(best, active);
  }
  return best;
}

// -------------------------------------------------------------------- cover

CoverReport build_cover(const BalanceProfile& profile, const CoverOptions& opts) {
  const GridFunction& g = profile.grid();
  const std::size_t n = g.size();
  std::size_t stride = 1;
  if (opts.e_resolution != 0) {
    require(opts.e_resolution >= 2 && opts.e_resolution <= n, ErrorKind::kParameter,
            "E resolution must lie in [2, N]");
    require((n - 1) % (opts.e_resolution - 1) == 0, ErrorKind::kParameter,
            "E resolution must subdivide the grid: (N-1) divisible by (resolution-1)");
    stride = (n - 1) / (opts.e_resolution - 1);
  }

  std::vector<char> member(n, 0);
  for (std::size_t i = 0; i < n; ++i) member[i] = in_E(profile, g.node(i), opts.radius) ? 1 : 0;

  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; i += stride)
    if (member[i]) cand.push_back(i);

  std::vector<CriticalRadius> radius(cand.size());
  std::vector<std::exception_ptr> errors(cand.size());
  parallel_for(cand.size(), [&](std::size_t k) {
    try {
      radius[k] = critical_radius(profile, g.node(cand[k]), opts.radius);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> centers(cand.size()), radii(cand.size());
  for (std::size_t k = 0; k < cand.size(); ++k) {
    centers[k] = g.node(cand[k]);
    radii[k] = radius[k].radius;
  }
  auto chosen = besicovitch_select(centers, radii);

  CoverReport rep;
  rep.spec = profile.spec();
  rep.n = n;
  rep.e_resolution = opts.e_resolution == 0 ? n : opts.e_resolution;
  rep.grid = g.interval();
  rep.balance_tol = opts.balance_tol;
  rep.candidates = cand.size();
  for (std::size_t s : chosen) {
    rep.centers.push_back(centers[s]);
    rep.radii.push_back(radii[s]);
    rep.alpha.push_back(radius[s].alpha);
    rep.beta.push_back(radius[s].beta);
    rep.residuals.push_back(radius[s].residual);
    rep.max_residual = std::max(rep.max_residual, radius[s].residual);
  }
  rep.balanced = rep.max_residual <= opts.balance_tol;

  // coverage of the full-grid E; centres are sorted, so only those within the
  // largest radius of x need checking
  double reach = 0.0;
  for (double r : rep.radii) reach = std::max(reach, r);
  for (std::size_t i = 0; i < n; ++i) {
    if (!member[i]) continue;
    ++rep.e_points;
    const double x = g.node(i);
    auto first = std::lower_bound(rep.centers.begin(), rep.centers.end(), x - reach);
    bool hit = false;
    for (auto it = first; it != rep.centers.end() && *it < x + reach && !hit; ++it)
      hit = std::fabs(x - *it) < rep.radii[static_cast<std::size_t>(it - rep.centers.begin())];
    if (!hit) ++rep.uncovered;
  }
  rep.deficit = static_cast<double>(rep.uncovered) * g.spacing();
  rep.max_overlap_probe = rep.centers.empty() ? 0 : overlap_at_probes(rep.centers, rep.radii, g.interval(), opts.probes);
  rep.max_overlap_exact = overlap_exact(rep.centers, rep.radii);
  return rep;
}

json to_json(const BalanceSpec& spec) {
  return {{"ks", spec.ks},
          {"q", to_json(spec.q)},
          {"m", spec.m},
          {"r", to_json(spec.r)},
          {"mode", spec.mode == DomainMode::kRealLine ? "real-line" : "bounded"}};
}

json CoverReport::to_json() const {
  json intervals = json::array();
  for (std::size_t i = 0; i < centers.size(); ++i)
    intervals.push_back({{"center", centers[i]},
                         {"radius", radii[i]},
                         {"alpha", alpha[i]},
                         {"beta", beta[i]},
                         {"residual", residuals[i]}});
  return {{"spec", gnlab::to_json(spec)},
          {"grid", {{"N", n}, {"interval", gnlab::to_json(grid)}, {"e_resolution", e_resolution}}},
          {"balance_tol", balance_tol},
          {"candidates", candidates},
          {"e_points", e_points},
          {"selected", centers.size()},
          {"uncovered_cells", uncovered},
          {"coverage_deficit", deficit},
          {"max_overlap_probe", max_overlap_probe},
          {"max_overlap_exact", max_overlap_exact},
          {"max_balance_residual", max_residual},
          {"balanced", balanced},
          {"intervals", intervals}};
}

CsvTable CoverReport::to_csv() const {
  CsvTable t({"center", "radius", "alpha", "beta", "residual"});
  for (std::size_t i = 0; i < centers.size(); ++i)
    t.add_row({format_number(centers[i]), format_number(radii[i]), format_number(alpha[i]), format_number(beta[i]),
               format_number(residuals[i])});
  return t;
}

}  // namespace gnlab
