#include "gnlab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gnlab/error.hpp"

namespace gnlab {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  require(!x0.empty(), ErrorKind::kParameter, "Nelder-Mead needs a non-empty start point");
  require(options.max_evaluations >= 1, ErrorKind::kParameter, "evaluation budget must be >= 1");
  const std::size_t d = x0.size();

  NelderMeadResult res;
  double best = std::numeric_limits<double>::infinity();
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    ++res.evaluations;
    if (v < best) {
      best = v;
      res.x = x;
      res.value = v;
    }
    res.best_trace.push_back(best);
    return v;
  };
  auto budget_left = [&] { return res.evaluations < options.max_evaluations; };

  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> values{eval(x0)};
  for (std::size_t i = 0; i < d && budget_left(); ++i) {
    auto x = x0;
    x[i] += x[i] != 0.0 ? options.initial_step * std::fabs(x[i]) + options.initial_step : options.initial_step;
    simplex.push_back(x);
    values.push_back(eval(x));
  }
  if (simplex.size() < d + 1) return res;

  std::vector<std::size_t> order(d + 1);
  auto combine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = c[k] + t * (w[k] - c[k]);
    return out;
  };

  while (budget_left()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[d - 1];
    if (std::fabs(values[hi] - values[lo]) <= options.tolerance * (std::fabs(values[lo]) + 1e-300)) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i : order)
      if (i != hi)
        for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);

    auto xr = combine(centroid, simplex[hi], -kReflect);
    double fr = eval(xr);
    if (fr < values[lo]) {
      if (!budget_left()) break;
      auto xe = combine(centroid, simplex[hi], -kExpand);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[hi] = xe;
        values[hi] = fe;
      } else {
        simplex[hi] = xr;
        values[hi] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[hi] = xr;
      values[hi] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < values[hi];
    auto xc = outside ? combine(centroid, xr, kContract) : combine(centroid, simplex[hi], kContract);
    double fc = eval(xc);
    if (fc < std::min(fr, values[hi])) {
      simplex[hi] = xc;
      values[hi] = fc;
      continue;
    }
    for (std::size_t i : order) {
      if (i == lo || !budget_left()) continue;
      simplex[i] = combine(simplex[lo], simplex[i], kShrink);
      values[i] = eval(simplex[i]);
    }
  }
  return res;
}

}  // namespace gnlab
