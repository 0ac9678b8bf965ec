#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

namespace oracle {

Jet chi(double t, int order) {
  if (t <= 0.0 || t >= 1.0) return Jet(order);
  // exp(-1/(t(1-t))) underflows well before the derivative series misbehave
  if (1.0 / (t * (1.0 - t)) > 740.0) return Jet(order);
  Jet x = Jet::variable(order, t);
  Jet one(order, 1.0);
  Jet g = x * (one - x);
  return exp(-1.0 * reciprocal(g));
}

namespace {

std::vector<double> derivatives_of(const Jet& j) {
  std::vector<double> out(j.c.size());
  for (int k = 0; k <= j.order(); ++k) out[static_cast<std::size_t>(k)] = j.derivative(k);
  return out;
}

}  // namespace

std::vector<double> chi_derivatives(double t, int order) { return derivatives_of(chi(t, order)); }

std::vector<double> sine_bump_derivatives(double frequency, double t, int order) {
  Jet x = Jet::variable(order, t);
  auto [s, c] = sincos(2.0 * std::numbers::pi * frequency * x);
  return derivatives_of(s * chi(t, order));
}

Jet spline(const std::vector<double>& coeffs, const std::vector<double>& knots, double t, int order) {
  const int n = static_cast<int>(coeffs.size());
  const int degree = static_cast<int>(knots.size()) - n - 1;
  // span index with knots[span] <= t < knots[span + 1]; t = right end uses the last real span
  int span = -1;
  for (int i = 0; i + 1 < static_cast<int>(knots.size()); ++i)
    if (knots[i] <= t && t < knots[i + 1]) span = i;
  if (span < 0 && t == knots.back())
    for (int i = static_cast<int>(knots.size()) - 2; i >= 0; --i)
      if (knots[i] < knots[i + 1]) {
        span = i;
        break;
      }
  if (span < 0) return Jet(order);

  Jet x = Jet::variable(order, t);
  const int m = static_cast<int>(knots.size()) - 1;
  std::vector<Jet> basis(static_cast<std::size_t>(m), Jet(order));
  basis[static_cast<std::size_t>(span)] = Jet(order, 1.0);
  for (int k = 1; k <= degree; ++k) {
    std::vector<Jet> next(static_cast<std::size_t>(m - k), Jet(order));
    for (int i = 0; i < m - k; ++i) {
      Jet term(order);
      const double d1 = knots[i + k] - knots[i];
      const double d2 = knots[i + k + 1] - knots[i + 1];
      if (d1 > 0.0) term = term + (1.0 / d1) * ((x - Jet(order, knots[i])) * basis[i]);
      if (d2 > 0.0) term = term + (1.0 / d2) * ((Jet(order, knots[i + k + 1]) - x) * basis[i + 1]);
      next[static_cast<std::size_t>(i)] = term;
    }
    basis = std::move(next);
  }
  Jet out(order);
  for (int i = 0; i < n; ++i) out = out + coeffs[i] * basis[i];
  return out;
}

std::vector<double> spline_bump_derivatives(const std::vector<double>& coeffs, const std::vector<double>& knots,
                                            double t, int order) {
  return derivatives_of(chi(t, order) * spline(coeffs, knots, t, order));
}

double integrate(const Fn& f, const std::vector<double>& breaks, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    if (!(hi > lo)) continue;
    const double w = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) total += Rule::integrate(f, lo + k * w, lo + (k + 1) * w);
  }
  return total;
}

double gagliardo(const Fn& u, double lo, double hi, double s, double p) {
  const double len = hi - lo;
  const double sp = s * p;
  auto inner = [&](double h) {
    std::vector<double> xs{lo - h, lo, hi - h, hi};
    std::sort(xs.begin(), xs.end());
    double v = integrate([&](double x) { return std::pow(std::fabs(u(x + h) - u(x)), p); }, xs, 16);
    return v * std::pow(h, -1.0 - sp);
  };
  std::vector<double> hb{0.0, 1e-4 * len, 1e-3 * len, 1e-2 * len, 0.1 * len, 0.3 * len, len};
  double near = 2.0 * integrate(inner, hb, 8);
  double lp = integrate([&](double x) { return std::pow(std::fabs(u(x)), p); }, {lo, hi}, 64);
  double far = 4.0 * lp * std::pow(len, -sp) / sp;
  return std::pow(near + far, 1.0 / p);
}

std::vector<double> chain_state(double eps, int p, double t) {
  auto d = chi_derivatives(t, 2);
  double x4 = integrate(
      [&](double s) {
        auto c = chi_derivatives(s, 2);
        double prod = eps * eps * eps * c[0] * c[1] * c[2];
        return prod * prod - std::pow(eps * c[2], p);
      },
      {0.0, t}, 64);
  return {eps * d[2], eps * d[1], eps * d[0], x4};
}

double eq17_ratio(const std::vector<double>& coeffs, const std::vector<double>& knots) {
  std::vector<double> breaks;
  for (double k : knots)
    if (k > 0.0 && k < 1.0 && (breaks.empty() || k > breaks.back())) breaks.push_back(k);
  breaks.insert(breaks.begin(), 0.0);
  breaks.push_back(1.0);
  auto jet = [&](double t) { return chi(t, 2) * spline(coeffs, knots, t, 2); };
  double top = integrate(
      [&](double t) {
        double d1 = jet(t).derivative(1);
        return d1 * d1 * d1 * d1;
      },
      breaks, 8);
  double bottom = integrate(
      [&](double t) {
        Jet j = jet(t);
        double v = j.derivative(0) * j.derivative(2);
        return v * v;
      },
      breaks, 8);
  return std::pow(top, 0.25) / std::pow(bottom, 0.25);
}

std::vector<double> eq17_random_search(const std::vector<double>& knots, int dim, std::size_t samples,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out;
  out.reserve(samples);
  std::vector<double> c(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < samples; ++i) {
    for (double& v : c) v = normal(rng);
    out.push_back(eq17_ratio(c, knots));
  }
  return out;
}

}  // namespace oracle
