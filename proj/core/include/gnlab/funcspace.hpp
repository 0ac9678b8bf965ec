#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gnlab {

/// Highest derivative order served unless a caller asks for more.
inline constexpr int kDefaultMaxOrder = 8;
/// Hard ceiling for the precomputed bump-derivative tables.
inline constexpr int kOrderCeiling = 16;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool contains(const Interval& other, double slack = 0.0) const noexcept {
    return other.lo >= lo - slack && other.hi <= hi + slack;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Dense polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;

  double operator()(double t) const noexcept;
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double c, const Polynomial& a);
  Polynomial pow(int e) const;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// numerator / base^exponent. Keeping the denominator as a power of a fixed
/// base keeps the degree growth of repeated differentiation linear instead of
/// exponential; no gcd reduction is performed.
class RationalFunction {
 public:
  RationalFunction(Polynomial numerator, Polynomial base, int exponent);

  const Polynomial& numerator() const noexcept { return numerator_; }
  const Polynomial& base() const noexcept { return base_; }
  int exponent() const noexcept { return exponent_; }
  /// base^exponent expanded.
  Polynomial denominator() const;

  double operator()(double t) const;
  RationalFunction derivative() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);

 private:
  Polynomial numerator_;
  Polynomial base_;
  int exponent_ = 0;
};

/// R_i with D^i chi = R_i chi on (0,1), chi(t) = exp(-1/(t(1-t))).
/// R_1 = d/dt(-1/(t(1-t))), R_{i+1} = R_i' + R_i R_1.
RationalFunction chi_derivative(int order, int max_order = kDefaultMaxOrder);

class AnalyticFunction;

namespace family {

struct BumpChi {};
/// chi((t-a)/(b-a)), support [a,b].
struct ScaledBump {
  double a = 0.0;
  double b = 1.0;
};
/// Polynomial restricted to a closed support; zero outside.
struct PolynomialPiece {
  Polynomial poly;
  Interval support;
};
/// sin(2 pi f t) chi(t).
struct SineBump {
  double frequency = 1.0;
};
/// chi(t) S(t) with S a clamped B-spline on [0,1]. Degree is
/// knots.size() - coeffs.size() - 1.
struct SplineBump {
  std::vector<double> coeffs;
  std::vector<double> knots;
};
/// Smooth plateau: 0 outside [a,b], 1 on [a+ramp, b-ramp], ramps built from
/// the normalized primitive of chi.
struct Plateau {
  double a = 0.0;
  double b = 1.0;
  double ramp = 0.1;
};
struct Sum {
  std::vector<std::pair<double, AnalyticFunction>> terms;
};
struct Product {
  std::vector<AnalyticFunction> factors;
};
/// base(scale * (x - shift)); scale may be negative (reflection).
struct Dilation {
  std::vector<AnalyticFunction> base;  // exactly one element
  double scale = 1.0;
  double shift = 0.0;
};

using Node = std::variant<BumpChi, ScaledBump, PolynomialPiece, SineBump, SplineBump, Plateau,
                          Sum, Product, Dilation>;

}  // namespace family

/// Immutable smooth function with exactly evaluable derivatives. Copies share
/// the underlying description.
class AnalyticFunction {
 public:
  AnalyticFunction();  // BumpChi
  AnalyticFunction(family::Node node);

  static AnalyticFunction bump_chi();
  static AnalyticFunction scaled_bump(double a, double b);
  static AnalyticFunction polynomial(std::vector<double> coeffs, Interval support = {0.0, 1.0});
  static AnalyticFunction sine_bump(double frequency);
  static AnalyticFunction spline_bump(std::vector<double> coeffs, std::vector<double> knots);
  static AnalyticFunction plateau(double a, double b, double ramp);

  const family::Node& node() const noexcept { return *node_; }
  const char* family_name() const noexcept;
  Interval support() const;

  /// D^0..D^{out.size()-1} at x.
  void derivatives(double x, std::span<double> out) const;

  AnalyticFunction scaled(double c) const;
  /// x -> f(lambda x).
  AnalyticFunction dilated(double lambda) const;
  AnalyticFunction translated(double shift) const;

  friend AnalyticFunction operator+(const AnalyticFunction& a, const AnalyticFunction& b);
  friend AnalyticFunction operator*(const AnalyticFunction& a, const AnalyticFunction& b);

 private:
  std::shared_ptr<const family::Node> node_;
};

/// Exact D^i f(x); zero outside the support.
double evaluate(const AnalyticFunction& f, int order, double x, int max_order = kDefaultMaxOrder);

enum class Provenance { kExact, kFiniteDifference };

/// Uniform samples of u and D^1u..D^mu on a closed interval, endpoints included.
class GridFunction {
 public:
  GridFunction(Interval interval, std::vector<std::vector<double>> stack, Provenance provenance);

  /// Builds the derivative stack from sampled values by second-order
  /// differences (one-sided at the ends).
  static GridFunction from_samples(Interval interval, std::vector<double> values, int max_derivative);

  const Interval& interval() const noexcept { return interval_; }
  std::size_t size() const noexcept { return stack_.front().size(); }
  int max_derivative() const noexcept { return static_cast<int>(stack_.size()) - 1; }
  double spacing() const noexcept {
    return interval_.length() / static_cast<double>(size() - 1);
  }
  double node(std::size_t i) const noexcept;
  Provenance provenance() const noexcept { return provenance_; }

  std::span<const double> derivative(int order) const;
  std::span<const double> values() const { return derivative(0); }

  /// Linear interpolation of D^order u at x (zero outside the interval).
  double interpolate(int order, double x) const;

 private:
  Interval interval_;
  std::vector<std::vector<double>> stack_;
  Provenance provenance_;
};

/// Exact-provenance samples at n uniform nodes of the interval.
GridFunction sample(const AnalyticFunction& f, Interval interval, std::size_t n, int max_derivative,
                    int max_order = kDefaultMaxOrder);

/// u + eps psi with psi = chi((t-a)/(b-a)) positive on a neighbourhood of
/// the closure of {u != 0}. Requires supp u inside (0,1).
AnalyticFunction perturb_nowhere_polynomial(const AnalyticFunction& u, double eps);

/// The bump psi used by perturb_nowhere_polynomial for u.
AnalyticFunction nowhere_polynomial_bump(const AnalyticFunction& u);

/// Grid measure of {|u| > value_floor} intersected with {|D^i u| < zero_tol}
/// for a single order i; used as a finite-resolution proxy for the
/// nowhere-polynomial property.
double polynomial_set_measure(const GridFunction& g, int order, double zero_tol, double value_floor);

}  // namespace gnlab
