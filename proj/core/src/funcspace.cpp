#include "gnlab/funcspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "gnlab/error.hpp"
#include "gnlab/parallel.hpp"

namespace gnlab {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

bool Polynomial::is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

// Compensated Horner: the rounding errors of each product and sum are
// carried in a second accumulator, so the result is as accurate as plain
// Horner in twice the working precision. The R_i numerators need this; their
// monomial coefficients cancel heavily on (0,1).
double Polynomial::operator()(double t) const noexcept {
  double acc = 0.0, err = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    double prod = acc * t;
    double prod_err = std::fma(acc, t, -prod);
    double sum = prod + *it;
    double z = sum - prod;
    double sum_err = (prod - (sum - z)) + (*it - z);
    acc = sum;
    err = err * t + (prod_err + sum_err);
  }
  return acc + err;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double c, const Polynomial& a) {
  std::vector<double> out = a.coeffs_;
  for (double& v : out) v *= c;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(int e) const {
  Polynomial out({1.0});
  for (int k = 0; k < e; ++k) out = out * *this;
  return out;
}

// ---------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial numerator, Polynomial base, int exponent)
    : numerator_(std::move(numerator)), base_(std::move(base)), exponent_(exponent) {
  require(!base_.is_zero(), ErrorKind::kParameter, "rational function with zero denominator");
  require(exponent_ >= 0, ErrorKind::kParameter, "negative denominator exponent");
}

Polynomial RationalFunction::denominator() const { return base_.pow(exponent_); }

double RationalFunction::operator()(double t) const {
  return numerator_(t) / std::pow(base_(t), exponent_);
}

RationalFunction RationalFunction::derivative() const {
  // (N / B^e)' = (N' B - e N B') / B^{e+1}
  Polynomial num = numerator_.derivative() * base_ -
                   static_cast<double>(exponent_) * (numerator_ * base_.derivative());
  return RationalFunction(std::move(num), base_, exponent_ + 1);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  require(a.base_.coeffs() == b.base_.coeffs(), ErrorKind::kUnsupported,
          "rational sum requires a shared denominator base");
  int e = std::max(a.exponent_, b.exponent_);
  Polynomial num = a.numerator_ * a.base_.pow(e - a.exponent_) +
                   b.numerator_ * b.base_.pow(e - b.exponent_);
  return RationalFunction(std::move(num), a.base_, e);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  require(a.base_.coeffs() == b.base_.coeffs(), ErrorKind::kUnsupported,
          "rational product requires a shared denominator base");
  return RationalFunction(a.numerator_ * b.numerator_, a.base_, a.exponent_ + b.exponent_);
}

namespace {

const Polynomial& chi_base() {
  static const Polynomial w({0.0, 1.0, -1.0});  // t(1-t)
  return w;
}

std::vector<RationalFunction> build_chi_table() {
  std::vector<RationalFunction> table;
  table.reserve(kOrderCeiling);
  RationalFunction r1(Polynomial({1.0, -2.0}), chi_base(), 2);
  table.push_back(r1);
  for (int i = 1; i < kOrderCeiling; ++i) table.push_back(table.back().derivative() + table.back() * r1);
  return table;
}

const std::vector<RationalFunction>& chi_table() {
  static const std::vector<RationalFunction> table = build_chi_table();
  return table;
}

const std::array<std::array<double, kOrderCeiling + 1>, kOrderCeiling + 1>& binomials() {
  static const auto table = [] {
    std::array<std::array<double, kOrderCeiling + 1>, kOrderCeiling + 1> c{};
    for (int n = 0; n <= kOrderCeiling; ++n) {
      c[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0.0);
    }
    return c;
  }();
  return table;
}

// Exponent floor below which chi and every R_i chi are flushed to zero.
const double kFlatExponent = std::log(std::numeric_limits<double>::min()) + 64.0;

void chi_stack(double t, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (!(t > 0.0 && t < 1.0)) return;
  double w = t * (1.0 - t);
  double e = -1.0 / w;
  if (e < kFlatExponent) return;
  out[0] = std::exp(e);
  if (out.size() == 1) return;
  double log_w = std::log(w);
  const auto& table = chi_table();
  for (std::size_t i = 1; i < out.size(); ++i) {
    const Polynomial& num = table[i - 1].numerator();
    out[i] = num(t) * std::exp(e - 2.0 * static_cast<double>(i) * log_w);
  }
}

// Leibniz rule: out = D^k (f g) from the two stacks.
void leibniz(std::span<const double> f, std::span<const double> g, std::span<double> out) {
  const auto& c = binomials();
  for (std::size_t n = 0; n < out.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) acc += c[n][k] * f[k] * g[n - k];
    out[n] = acc;
  }
}

// ----------------------------------------------------------------- B-spline

int find_span(const std::vector<double>& knots, int n_basis, int degree, double u) {
  if (u >= knots[n_basis]) return n_basis - 1;
  if (u <= knots[degree]) return degree;
  auto it = std::upper_bound(knots.begin() + degree, knots.begin() + n_basis + 1, u);
  return static_cast<int>(it - knots.begin()) - 1;
}

// Values of S and its derivatives up to out.size()-1 at u (Piegl & Tiller A2.3).
void spline_stack(const family::SplineBump& s, double u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& U = s.knots;
  const int n_basis = static_cast<int>(s.coeffs.size());
  const int p = static_cast<int>(U.size()) - n_basis - 1;
  if (u < U.front() || u > U.back()) return;
  const int span = find_span(U, n_basis, p, u);
  const int nd = std::min<int>(static_cast<int>(out.size()) - 1, p);

  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
  std::vector<double> left(p + 1), right(p + 1);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - U[span + 1 - j];
    right[j] = U[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  std::vector<std::vector<double>> ders(nd + 1, std::vector<double>(p + 1, 0.0));
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      int j1 = rk >= -1 ? 1 : -rk;
      int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
    factor *= (p - k);
  }
  for (int k = 0; k <= nd; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= p; ++j) acc += ders[k][j] * s.coeffs[span - p + j];
    out[k] = acc;
  }
}

// ------------------------------------------------------------ smooth step

double chi_value(double t) {
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

// Integral of chi over [0, t] for t <= 1/2: tabulated breakpoints plus a
// fixed 15-point Gauss rule on the remaining short piece.
constexpr int kPrimitiveCells = 512;
constexpr double kPrimitiveWidth = 0.5 / kPrimitiveCells;

const std::vector<double>& primitive_table() {
  static const std::vector<double> table = [] {
    std::vector<double> out(kPrimitiveCells + 1, 0.0);
    for (int k = 0; k < kPrimitiveCells; ++k)
      out[static_cast<std::size_t>(k) + 1] =
          out[static_cast<std::size_t>(k)] + boost::math::quadrature::gauss<double, 30>::integrate(
                                                  chi_value, k * kPrimitiveWidth, (k + 1) * kPrimitiveWidth);
    return out;
  }();
  return table;
}

double chi_primitive_half(double t) {
  using boost::math::quadrature::gauss;
  const auto& table = primitive_table();
  int k = std::min(static_cast<int>(t / kPrimitiveWidth), kPrimitiveCells - 1);
  double start = k * kPrimitiveWidth;
  double rest = t > start ? gauss<double, 15>::integrate(chi_value, start, t) : 0.0;
  return table[static_cast<std::size_t>(k)] + rest;
}

double chi_mass() {
  static const double z = 2.0 * primitive_table().back();
  return z;
}

// Normalized primitive of chi: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  if (s <= 0.5) return chi_primitive_half(s) / chi_mass();
  return 1.0 - chi_primitive_half(1.0 - s) / chi_mass();
}

void smooth_step_stack(double s, std::span<double> out) {
  out[0] = smooth_step(s);
  if (out.size() == 1) return;
  std::vector<double> chi(out.size() - 1);
  chi_stack(s, chi);
  for (std::size_t k = 1; k < out.size(); ++k) out[k] = chi[k - 1] / chi_mass();
}

// ------------------------------------------------------------- evaluation


struct StackVisitor {
  double x;
  std::span<double> out;

  void operator()(const family::BumpChi&) const { chi_stack(x, out); }

  void operator()(const family::ScaledBump& f) const {
    double len = f.b - f.a;
    chi_stack((x - f.a) / len, out);
    double scale = 1.0;
    for (double& v : out) {
      v *= scale;
      scale /= len;
    }
  }

  void operator()(const family::PolynomialPiece& f) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (!f.support.contains(x)) return;
    Polynomial p = f.poly;
    for (auto& v : out) {
      v = p(x);
      p = p.derivative();
    }
  }

  void operator()(const family::SineBump& f) const {
    std::vector<double> chi(out.size()), g(out.size());
    chi_stack(x, chi);
    double omega = 2.0 * std::numbers::pi * f.frequency;
    double phase = omega * x;
    double scale = 1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] = scale * std::sin(phase + static_cast<double>(k) * std::numbers::pi / 2.0);
      scale *= omega;
    }
    leibniz(g, chi, out);
  }

  void operator()(const family::SplineBump& f) const {
    std::vector<double> chi(out.size()), s(out.size());
    chi_stack(x, chi);
    if (chi[0] == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    spline_stack(f, x, s);
    leibniz(s, chi, out);
  }

  void operator()(const family::Plateau& f) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (!(x > f.a && x < f.b)) return;
    std::vector<double> up(out.size()), down(out.size());
    smooth_step_stack((x - f.a) / f.ramp, up);
    smooth_step_stack((f.b - x) / f.ramp, down);
    double su = 1.0, sd = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      up[k] *= su;
      down[k] *= sd;
      su /= f.ramp;
      sd /= -f.ramp;
    }
    leibniz(up, down, out);
  }

  void operator()(const family::Sum& f) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> tmp(out.size());
    for (const auto& [w, g] : f.terms) {
      g.derivatives(x, tmp);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * tmp[k];
    }
  }

  void operator()(const family::Product& f) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (f.factors.empty()) return;
    f.factors.front().derivatives(x, out);
    std::vector<double> next(out.size()), acc(out.size());
    for (std::size_t i = 1; i < f.factors.size(); ++i) {
      f.factors[i].derivatives(x, next);
      leibniz(out, next, acc);
      std::copy(acc.begin(), acc.end(), out.begin());
    }
  }

  void operator()(const family::Dilation& f) const {
    f.base.front().derivatives(f.scale * (x - f.shift), out);
    double s = 1.0;
    for (double& v : out) {
      v *= s;
      s *= f.scale;
    }
  }
};

void validate(const family::Node& node) {
  struct {
    void operator()(const family::BumpChi&) const {}
    void operator()(const family::ScaledBump& f) const {
      require(f.b > f.a, ErrorKind::kParameter, "scaled bump needs a < b");
    }
    void operator()(const family::PolynomialPiece& f) const {
      require(f.support.hi >= f.support.lo, ErrorKind::kParameter, "polynomial support is empty");
    }
    void operator()(const family::SineBump& f) const {
      require(std::isfinite(f.frequency), ErrorKind::kParameter, "sine bump frequency not finite");
    }
    void operator()(const family::SplineBump& f) const {
      require(!f.coeffs.empty(), ErrorKind::kParameter, "spline bump needs coefficients");
      require(f.knots.size() >= f.coeffs.size() + 1, ErrorKind::kParameter,
              "spline bump needs knots.size() >= coeffs.size() + 1");
      require(std::is_sorted(f.knots.begin(), f.knots.end()), ErrorKind::kParameter,
              "spline knots must be non-decreasing");
      int p = static_cast<int>(f.knots.size() - f.coeffs.size()) - 1;
      require(f.knots.front() <= 0.0 && f.knots.back() >= 1.0, ErrorKind::kParameter,
              "spline knots must span [0,1]");
      require(f.knots[p] <= 0.0 && f.knots[f.coeffs.size()] >= 1.0, ErrorKind::kParameter,
              "spline knots must be clamped on [0,1]");
    }
    void operator()(const family::Plateau& f) const {
      require(f.b > f.a && f.ramp > 0.0, ErrorKind::kParameter, "plateau needs a < b and ramp > 0");
    }
    void operator()(const family::Sum&) const {}
    void operator()(const family::Product&) const {}
    void operator()(const family::Dilation& f) const {
      require(f.base.size() == 1, ErrorKind::kParameter, "dilation needs exactly one base");
      require(f.scale != 0.0 && std::isfinite(f.scale), ErrorKind::kParameter,
              "dilation scale must be finite and non-zero");
    }
  } visitor;
  std::visit(visitor, node);
}

}  // namespace

RationalFunction chi_derivative(int order, int max_order) {
  require(order >= 1, ErrorKind::kParameter, "chi_derivative needs order >= 1");
  if (order > max_order || order > kOrderCeiling)
    fail(ErrorKind::kUnsupportedOrder,
         "derivative order " + std::to_string(order) + " exceeds limit " +
             std::to_string(std::min(max_order, kOrderCeiling)));
  return chi_table()[order - 1];
}

// --------------------------------------------------------- AnalyticFunction

AnalyticFunction::AnalyticFunction() : AnalyticFunction(family::BumpChi{}) {}

AnalyticFunction::AnalyticFunction(family::Node node) {
  validate(node);
  node_ = std::make_shared<const family::Node>(std::move(node));
}

AnalyticFunction AnalyticFunction::bump_chi() { return AnalyticFunction(family::BumpChi{}); }

AnalyticFunction AnalyticFunction::scaled_bump(double a, double b) {
  return AnalyticFunction(family::ScaledBump{a, b});
}

AnalyticFunction AnalyticFunction::polynomial(std::vector<double> coeffs, Interval support) {
  return AnalyticFunction(family::PolynomialPiece{Polynomial(std::move(coeffs)), support});
}

AnalyticFunction AnalyticFunction::sine_bump(double frequency) {
  return AnalyticFunction(family::SineBump{frequency});
}

AnalyticFunction AnalyticFunction::spline_bump(std::vector<double> coeffs, std::vector<double> knots) {
  return AnalyticFunction(family::SplineBump{std::move(coeffs), std::move(knots)});
}

AnalyticFunction AnalyticFunction::plateau(double a, double b, double ramp) {
  return AnalyticFunction(family::Plateau{a, b, ramp});
}

const char* AnalyticFunction::family_name() const noexcept {
  struct {
    const char* operator()(const family::BumpChi&) const { return "bumpchi"; }
    const char* operator()(const family::ScaledBump&) const { return "scaled_bump"; }
    const char* operator()(const family::PolynomialPiece&) const { return "polynomial"; }
    const char* operator()(const family::SineBump&) const { return "sine_bump"; }
    const char* operator()(const family::SplineBump&) const { return "spline_bump"; }
    const char* operator()(const family::Plateau&) const { return "plateau"; }
    const char* operator()(const family::Sum&) const { return "sum"; }
    const char* operator()(const family::Product&) const { return "product"; }
    const char* operator()(const family::Dilation&) const { return "dilation"; }
  } visitor;
  return std::visit(visitor, *node_);
}

Interval AnalyticFunction::support() const {
  struct {
    Interval operator()(const family::BumpChi&) const { return {0.0, 1.0}; }
    Interval operator()(const family::ScaledBump& f) const { return {f.a, f.b}; }
    Interval operator()(const family::PolynomialPiece& f) const { return f.support; }
    Interval operator()(const family::SineBump&) const { return {0.0, 1.0}; }
    Interval operator()(const family::SplineBump&) const { return {0.0, 1.0}; }
    Interval operator()(const family::Plateau& f) const { return {f.a, f.b}; }
    Interval operator()(const family::Sum& f) const {
      if (f.terms.empty()) return {0.0, 0.0};
      Interval out = f.terms.front().second.support();
      for (const auto& [w, g] : f.terms) {
        Interval s = g.support();
        out.lo = std::min(out.lo, s.lo);
        out.hi = std::max(out.hi, s.hi);
      }
      return out;
    }
    Interval operator()(const family::Product& f) const {
      if (f.factors.empty()) return {0.0, 0.0};
      Interval out = f.factors.front().support();
      for (const auto& g : f.factors) {
        Interval s = g.support();
        out.lo = std::max(out.lo, s.lo);
        out.hi = std::min(out.hi, s.hi);
      }
      if (out.hi < out.lo) out.hi = out.lo;
      return out;
    }
    Interval operator()(const family::Dilation& f) const {
      Interval s = f.base.front().support();
      double x0 = f.shift + s.lo / f.scale;
      double x1 = f.shift + s.hi / f.scale;
      return {std::min(x0, x1), std::max(x0, x1)};
    }
  } visitor;
  return std::visit(visitor, *node_);
}

void AnalyticFunction::derivatives(double x, std::span<double> out) const {
  require(!out.empty() && out.size() <= static_cast<std::size_t>(kOrderCeiling) + 1,
          ErrorKind::kUnsupportedOrder, "derivative stack size out of range");
  std::visit(StackVisitor{x, out}, *node_);
}

AnalyticFunction AnalyticFunction::scaled(double c) const {
  if (const auto* s = std::get_if<family::Sum>(node_.get())) {
    family::Sum out = *s;
    for (auto& term : out.terms) term.first *= c;
    return AnalyticFunction(std::move(out));
  }
  return AnalyticFunction(family::Sum{{{c, *this}}});
}

AnalyticFunction AnalyticFunction::dilated(double lambda) const {
  return AnalyticFunction(family::Dilation{{*this}, lambda, 0.0});
}

AnalyticFunction AnalyticFunction::translated(double shift) const {
  return AnalyticFunction(family::Dilation{{*this}, 1.0, shift});
}

AnalyticFunction operator+(const AnalyticFunction& a, const AnalyticFunction& b) {
  family::Sum out;
  for (const AnalyticFunction* f : {&a, &b}) {
    if (const auto* s = std::get_if<family::Sum>(f->node_.get())) {
      out.terms.insert(out.terms.end(), s->terms.begin(), s->terms.end());
    } else {
      out.terms.emplace_back(1.0, *f);
    }
  }
  return AnalyticFunction(std::move(out));
}

AnalyticFunction operator*(const AnalyticFunction& a, const AnalyticFunction& b) {
  return AnalyticFunction(family::Product{{a, b}});
}

double evaluate(const AnalyticFunction& f, int order, double x, int max_order) {
  require(order >= 0, ErrorKind::kParameter, "negative derivative order");
  if (order > max_order || order > kOrderCeiling)
    fail(ErrorKind::kUnsupportedOrder, "derivative order " + std::to_string(order) +
                                           " exceeds limit " +
                                           std::to_string(std::min(max_order, kOrderCeiling)));
  std::array<double, kOrderCeiling + 1> stack{};
  f.derivatives(x, std::span<double>(stack.data(), static_cast<std::size_t>(order) + 1));
  return stack[order];
}

// ------------------------------------------------------------- GridFunction

GridFunction::GridFunction(Interval interval, std::vector<std::vector<double>> stack,
                           Provenance provenance)
    : interval_(interval), stack_(std::move(stack)), provenance_(provenance) {
  require(!stack_.empty(), ErrorKind::kParameter, "grid function needs at least the values");
  require(stack_.front().size() >= 2, ErrorKind::kParameter, "grid function needs N >= 2");
  require(interval_.hi > interval_.lo, ErrorKind::kParameter, "grid interval must have positive length");
  for (const auto& row : stack_)
    require(row.size() == stack_.front().size(), ErrorKind::kParameter,
            "derivative arrays must share the sample count");
}

GridFunction GridFunction::from_samples(Interval interval, std::vector<double> values,
                                        int max_derivative) {
  require(values.size() >= 3 || max_derivative == 0, ErrorKind::kParameter,
          "finite differences need N >= 3");
  const std::size_t n = values.size();
  const double h = interval.length() / static_cast<double>(n - 1);
  std::vector<std::vector<double>> stack;
  stack.push_back(std::move(values));
  for (int k = 1; k <= max_derivative; ++k) {
    const auto& f = stack.back();
    std::vector<double> d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    stack.push_back(std::move(d));
  }
  return GridFunction(interval, std::move(stack), Provenance::kFiniteDifference);
}

double GridFunction::node(std::size_t i) const noexcept {
  if (i + 1 == size()) return interval_.hi;
  return interval_.lo + static_cast<double>(i) * spacing();
}

std::span<const double> GridFunction::derivative(int order) const {
  require(order >= 0 && order <= max_derivative(), ErrorKind::kParameter,
          "derivative order " + std::to_string(order) + " not available on grid (max " +
              std::to_string(max_derivative()) + ")");
  return stack_[order];
}

double GridFunction::interpolate(int order, double x) const {
  auto f = derivative(order);
  if (x < interval_.lo || x > interval_.hi) return 0.0;
  double s = (x - interval_.lo) / spacing();
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= size()) return f[size() - 1];
  double frac = s - static_cast<double>(i);
  return f[i] + frac * (f[i + 1] - f[i]);
}

GridFunction sample(const AnalyticFunction& f, Interval interval, std::size_t n, int max_derivative,
                    int max_order) {
  require(n >= 2, ErrorKind::kParameter, "sample needs N >= 2");
  require(max_derivative >= 0, ErrorKind::kParameter, "negative derivative order");
  if (max_derivative > max_order || max_derivative > kOrderCeiling)
    fail(ErrorKind::kUnsupportedOrder, "derivative order " + std::to_string(max_derivative) +
                                           " exceeds limit " +
                                           std::to_string(std::min(max_order, kOrderCeiling)));
  const auto m = static_cast<std::size_t>(max_derivative);
  std::vector<std::vector<double>> stack(m + 1, std::vector<double>(n));
  const double h = interval.length() / static_cast<double>(n - 1);
  parallel_for(n, [&](std::size_t i) {
    std::array<double, kOrderCeiling + 1> buf{};
    double x = (i + 1 == n) ? interval.hi : interval.lo + static_cast<double>(i) * h;
    f.derivatives(x, std::span<double>(buf.data(), m + 1));
    for (std::size_t k = 0; k <= m; ++k) stack[k][i] = buf[k];
  });
  return GridFunction(interval, std::move(stack), Provenance::kExact);
}

AnalyticFunction nowhere_polynomial_bump(const AnalyticFunction& u) {
  Interval s = u.support();
  require(s.lo > 0.0 && s.hi < 1.0, ErrorKind::kDomain,
          "support of u must lie compactly inside (0,1)");
  return AnalyticFunction::scaled_bump(0.5 * s.lo, 0.5 * (1.0 + s.hi));
}

AnalyticFunction perturb_nowhere_polynomial(const AnalyticFunction& u, double eps) {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::kParameter, "perturbation size must be > 0");
  return u + nowhere_polynomial_bump(u).scaled(eps);
}

double polynomial_set_measure(const GridFunction& g, int order, double zero_tol, double value_floor) {
  auto u = g.values();
  auto d = g.derivative(order);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::fabs(u[i]) > value_floor && std::fabs(d[i]) < zero_tol) ++count;
  return static_cast<double>(count) * g.spacing();
}

}  // namespace gnlab
