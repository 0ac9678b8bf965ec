#include "gnlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "gnlab/error.hpp"

namespace gnlab::quadrature {

namespace {

double simpson_even_panels(std::span<const double> f, double h) {
  // f.size() - 1 is even
  const std::size_t n = f.size();
  if (n < 3) return 0.0;
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
  return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

// Linear interpolant integral over [x0 + s0 h, x0 + s1 h] within cell [i, i+1].
double cell_piece(double fi, double fj, double s0, double s1, double h) {
  double v0 = fi + s0 * (fj - fi);
  double v1 = fi + s1 * (fj - fi);
  return 0.5 * (v0 + v1) * (s1 - s0) * h;
}

}  // namespace

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if ((n - 1) % 2 == 0) return simpson_even_panels(f, h);
  // odd number of intervals: Simpson on the first n-4, 3/8 on the last three
  const std::size_t m = n - 3;
  double tail = 3.0 * h / 8.0 * (f[m - 1] + 3.0 * f[m] + 3.0 * f[m + 1] + f[m + 2]);
  return simpson_even_panels(f.subspan(0, m), h) + tail;
}

double integrate(std::span<const double> f, const Interval& grid, const Interval& domain) {
  const std::size_t n = f.size();
  require(n >= 2, ErrorKind::kParameter, "integration needs at least two samples");
  double a = std::max(domain.lo, grid.lo);
  double b = std::min(domain.hi, grid.hi);
  if (!(b > a)) return 0.0;
  const double h = grid.length() / static_cast<double>(n - 1);
  const double snap = 1e-9;
  double sa = (a - grid.lo) / h;
  double sb = (b - grid.lo) / h;
  auto i0 = static_cast<std::size_t>(std::ceil(sa - snap));
  auto i1 = static_cast<std::size_t>(std::min<double>(std::floor(sb + snap), static_cast<double>(n - 1)));
  if (i0 > i1) {
    // no node inside: single partial cell
    auto i = static_cast<std::size_t>(std::floor(sa));
    i = std::min(i, n - 2);
    return cell_piece(f[i], f[i + 1], sa - static_cast<double>(i), sb - static_cast<double>(i), h);
  }
  double total = 0.0;
  if (i1 > i0) total += simpson(f.subspan(i0, i1 - i0 + 1), h);
  double lead = static_cast<double>(i0) - sa;
  if (lead > snap && i0 > 0) total += cell_piece(f[i0 - 1], f[i0], 1.0 - lead, 1.0, h);
  double trail = sb - static_cast<double>(i1);
  if (trail > snap && i1 + 1 < n) total += cell_piece(f[i1], f[i1 + 1], 0.0, trail, h);
  return total;
}

double max_over(std::span<const double> f, const Interval& grid, const Interval& domain) {
  RangeMax rm(f, grid);
  return rm(domain.lo, domain.hi);
}

CumulativeIntegral::CumulativeIntegral(std::span<const double> f, const Interval& grid)
    : grid_(grid), f_(f.begin(), f.end()) {
  require(f_.size() >= 2, ErrorKind::kParameter, "cumulative integral needs at least two samples");
  h_ = grid.length() / static_cast<double>(f_.size() - 1);
  prefix_.resize(f_.size());
  prefix_[0] = 0.0;
  for (std::size_t i = 1; i < f_.size(); ++i) prefix_[i] = prefix_[i - 1] + 0.5 * h_ * (f_[i - 1] + f_[i]);
  leaves_ = f_.size() - 1;
  tree_.assign(2 * leaves_, 0.0);
  for (std::size_t k = 0; k < leaves_; ++k) tree_[leaves_ + k] = 0.5 * h_ * (f_[k] + f_[k + 1]);
  for (std::size_t k = leaves_ - 1; k > 0; --k) tree_[k] = tree_[2 * k] + tree_[2 * k + 1];
}

double CumulativeIntegral::operator()(double x) const {
  if (x <= grid_.lo) return 0.0;
  if (x >= grid_.hi) return prefix_.back();
  double s = (x - grid_.lo) / h_;
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= f_.size()) return prefix_.back();
  return prefix_[i] + cell_piece(f_[i], f_[i + 1], 0.0, s - static_cast<double>(i), h_);
}

double CumulativeIntegral::cell_sum(std::size_t i, std::size_t j) const {
  double left = 0.0, right = 0.0;
  for (i += leaves_, j += leaves_; i < j; i >>= 1, j >>= 1) {
    if (i & 1) left += tree_[i++];
    if (j & 1) right += tree_[--j];
  }
  return left + right;
}

double CumulativeIntegral::over(double a, double b) const {
  a = std::max(a, grid_.lo);
  b = std::min(b, grid_.hi);
  if (b <= a) return 0.0;
  const std::size_t last = f_.size() - 2;
  const double sa = (a - grid_.lo) / h_;
  const double sb = (b - grid_.lo) / h_;
  std::size_t i = std::min(static_cast<std::size_t>(std::floor(sa)), last);
  std::size_t j = std::min(static_cast<std::size_t>(std::floor(sb)), last);
  const double fa = sa - static_cast<double>(i);
  const double fb = std::min(sb - static_cast<double>(j), 1.0);
  if (i == j) return cell_piece(f_[i], f_[i + 1], fa, fb, h_);
  return cell_piece(f_[i], f_[i + 1], fa, 1.0, h_) + cell_sum(i + 1, j) + cell_piece(f_[j], f_[j + 1], 0.0, fb, h_);
}

RangeMax::RangeMax(std::span<const double> f, const Interval& grid) : grid_(grid), f_(f.begin(), f.end()) {
  require(f_.size() >= 2, ErrorKind::kParameter, "range max needs at least two samples");
  h_ = grid.length() / static_cast<double>(f_.size() - 1);
  table_.push_back(f_);
  for (std::size_t width = 2; width <= f_.size(); width *= 2) {
    const auto& prev = table_.back();
    std::vector<double> level(f_.size() - width + 1);
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = std::max(prev[i], prev[i + width / 2]);
    table_.push_back(std::move(level));
  }
}

double RangeMax::node_max(std::size_t i, std::size_t j) const {
  std::size_t len = j - i + 1;
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= len) ++k;
  return std::max(table_[k][i], table_[k][j + 1 - (std::size_t{1} << k)]);
}

double RangeMax::interp(double x) const {
  double s = (x - grid_.lo) / h_;
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= f_.size()) return f_.back();
  double frac = s - static_cast<double>(i);
  return f_[i] + frac * (f_[i + 1] - f_[i]);
}

double RangeMax::operator()(double a, double b) const {
  a = std::max(a, grid_.lo);
  b = std::min(b, grid_.hi);
  if (b < a) return 0.0;
  double best = std::max(interp(a), interp(b));
  double sa = (a - grid_.lo) / h_;
  double sb = (b - grid_.lo) / h_;
  auto i = static_cast<std::size_t>(std::floor(sa)) + 1;
  auto j = static_cast<std::size_t>(std::ceil(sb));
  if (j == 0) return best;
  j -= 1;
  j = std::min(j, f_.size() - 1);
  if (i <= j) best = std::max(best, node_max(i, j));
  return best;
}

}  // namespace gnlab::quadrature
