#pragma once

#include <span>
#include <vector>

#include "gnlab/funcspace.hpp"

namespace gnlab::quadrature {

/// Composite Simpson over uniformly spaced samples. An even sample count
/// closes with a 3/8 panel; two samples fall back to the trapezoid.
double simpson(std::span<const double> f, double h);

/// Integral over domain (clipped to grid) of samples f living on the uniform
/// grid `grid`. Whole cells use Simpson; partial end cells integrate the
/// linear interpolant.
double integrate(std::span<const double> f, const Interval& grid, const Interval& domain);

/// Max of the linear interpolant of f over domain (clipped to grid).
double max_over(std::span<const double> f, const Interval& grid, const Interval& domain);

/// x -> integral of the linear interpolant of f from grid.lo to x. Zero
/// extension outside the grid, so queries may exceed the grid.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::span<const double> f, const Interval& grid);
  double operator()(double x) const;
  /// Integral over [a, b] from a tree of cell sums: no subtraction, so
  /// small window integrals of non-negative data keep full relative accuracy.
  double over(double a, double b) const;

 private:
  double cell_sum(std::size_t i, std::size_t j) const;  // cells [i, j)

  Interval grid_;
  double h_;
  std::vector<double> f_;
  std::vector<double> prefix_;
  std::size_t leaves_ = 0;
  std::vector<double> tree_;
};

/// Range-maximum queries of the linear interpolant of f (sparse table, O(1)
/// per query). Continuous in both window ends.
class RangeMax {
 public:
  RangeMax(std::span<const double> f, const Interval& grid);
  double operator()(double a, double b) const;

 private:
  double node_max(std::size_t i, std::size_t j) const;  // inclusive
  double interp(double x) const;

  Interval grid_;
  double h_;
  std::vector<double> f_;
  std::vector<std::vector<double>> table_;
};

}  // namespace gnlab::quadrature
