#include "gnlab/norms.hpp"

#include <algorithm>
#include <cmath>

#include "gnlab/error.hpp"
#include "gnlab/parallel.hpp"
#include "gnlab/quadrature.hpp"

namespace gnlab {

namespace {

void check_domain(const GridFunction& g, const Interval& domain) {
  const Interval& grid = g.interval();
  double slack = 1e-12 * std::max(1.0, grid.length());
  require(domain.hi >= domain.lo, ErrorKind::kDomain, "norm domain is empty");
  require(grid.contains(domain, slack), ErrorKind::kDomain, "norm domain is not inside the grid interval");
}

void check_exponent(const Exponent& p) {
  require(p.is_infinite() || p.value() >= 1.0, ErrorKind::kParameter,
          "Lebesgue exponent must be >= 1, got " + p.to_string());
}

// |x|^p, exact repeated multiplication for small integer exponents.
inline double abs_pow(double x, double p, int int_p) {
  x = std::fabs(x);
  if (int_p > 0) {
    double r = 1.0;
    for (int k = 0; k < int_p; ++k) r *= x;
    return r;
  }
  return std::pow(x, p);
}

int integer_exponent(double p) {
  if (p == std::floor(p) && p >= 1.0 && p <= 32.0) return static_cast<int>(p);
  return 0;
}

}  // namespace

double lp_norm(std::span<const double> f, const Interval& grid, const Interval& domain, const Exponent& p) {
  check_exponent(p);
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::fabs(f[i]);
  double peak = quadrature::max_over(mag, grid, domain);
  if (peak == 0.0 || p.is_infinite()) return peak;
  const double pv = p.value();
  const int ip = integer_exponent(pv);
  for (double& v : mag) v = abs_pow(v / peak, pv, ip);
  double integral = quadrature::integrate(mag, grid, domain);
  if (integral <= 0.0) return 0.0;
  return peak * std::pow(integral, 1.0 / pv);
}

double lebesgue_norm(const GridFunction& g, const NormSpec& spec) {
  check_domain(g, spec.domain);
  return lp_norm(g.derivative(spec.order), g.interval(), spec.domain, spec.p);
}

std::vector<double> derivative_product(const GridFunction& g, std::span<const int> orders) {
  require(!orders.empty(), ErrorKind::kParameter, "product needs at least one factor");
  std::vector<double> out(g.size(), 1.0);
  for (int k : orders) {
    auto d = g.derivative(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= d[i];
  }
  return out;
}

double product_norm(const GridFunction& g, const ProductSpec& spec) {
  require(std::is_sorted(spec.orders.begin(), spec.orders.end()), ErrorKind::kParameter,
          "product orders must be sorted ascending");
  check_domain(g, spec.domain);
  auto v = derivative_product(g, spec.orders);
  return lp_norm(v, g.interval(), spec.domain, spec.q);
}

double gagliardo_seminorm(const GridFunction& g, double s, double p, int order) {
  require(s > 0.0 && s < 1.0, ErrorKind::kParameter, "seminorm order s must lie in (0,1)");
  require(p >= 1.0 && std::isfinite(p), ErrorKind::kParameter, "seminorm exponent must be finite and >= 1");
  auto raw = g.derivative(order);
  const std::size_t n = raw.size();
  double peak = 0.0;
  for (double v : raw) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) return 0.0;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = raw[i] / peak;

  const double h = g.spacing();
  const double sp = s * p;
  const int ip = integer_exponent(p);
  std::vector<double> kernel(n);
  for (std::size_t k = 1; k < n; ++k) kernel[k] = std::pow(static_cast<double>(k) * h, -(1.0 + sp));

  // fixed row blocks, reduced in order, so the result does not depend on the
  // worker count
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const double lo = g.interval().lo - 0.5 * h;
  const double hi = g.interval().hi + 0.5 * h;
  parallel_for(blocks, [&](std::size_t b) {
    double acc = 0.0;
    const std::size_t i_end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < i_end; ++i) {
      double row = 0.0;
      const double fi = f[i];
      for (std::size_t j = i + 1; j < n; ++j) row += abs_pow(fi - f[j], p, ip) * kernel[j - i];
      acc += 2.0 * row * h * h;
      double x = g.node(i);
      double ext = std::pow(x - lo, -sp) + std::pow(hi - x, -sp);
      acc += 2.0 * abs_pow(fi, p, ip) * h * ext / sp;
    }
    partial[b] = acc;
  });
  while (partial.size() > 1) {
    std::vector<double> next((partial.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = partial[2 * i] + (2 * i + 1 < partial.size() ? partial[2 * i + 1] : 0.0);
    partial.swap(next);
  }
  return peak * std::pow(partial.front(), 1.0 / p);
}

}  // namespace gnlab
