#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gnlab {

/// Normalized fraction num/den with den > 0. Arithmetic is overflow-checked;
/// operations that would overflow return std::nullopt.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  static std::optional<Rational> add(const Rational& a, const Rational& b);
  static std::optional<Rational> sub(const Rational& a, const Rational& b);
  static std::optional<Rational> mul(const Rational& a, const Rational& b);
  static std::optional<Rational> div(const Rational& a, const Rational& b);

  /// Best rational approximation with denominator <= max_den. Succeeds only
  /// when it reproduces x to within a few ulps.
  static std::optional<Rational> from_double(double x, std::int64_t max_den = 1000000);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A real number that stays an exact rational as long as every input was one
/// and no intermediate overflowed; otherwise it degrades to double.
class Scalar {
 public:
  Scalar() : Scalar(Rational(0)) {}
  Scalar(Rational r) : exact_(r), value_(r.to_double()) {}
  Scalar(int v) : Scalar(Rational(v)) {}
  Scalar(std::int64_t v) : Scalar(Rational(v)) {}
  Scalar(double v);

  /// Parses "3", "-1/3", "0.25", "1e-3". Decimal literals are read exactly.
  static Scalar parse(std::string_view text);

  bool is_exact() const noexcept { return exact_.has_value(); }
  const std::optional<Rational>& exact() const noexcept { return exact_; }
  double value() const noexcept { return value_; }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);

  /// Exact comparison when both sides are exact, otherwise |a-b| <= tol.
  static bool equal(const Scalar& a, const Scalar& b, double tol = 1e-12);
  static bool less_equal(const Scalar& a, const Scalar& b, double tol = 1e-12);

  std::string to_string() const;

 private:
  static Scalar inexact(double v);

  std::optional<Rational> exact_;
  double value_ = 0.0;
};

/// Lebesgue exponent in [1, inf]. Infinity is a distinguished state; its
/// reciprocal is exactly zero.
class Exponent {
 public:
  Exponent() : Exponent(Scalar(1)) {}
  Exponent(Scalar finite) : finite_(finite) {}
  Exponent(int v) : Exponent(Scalar(v)) {}
  Exponent(double v);

  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }
  /// Accepts "inf" (also "infinity", "oo") or anything Scalar::parse takes.
  static Exponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  double value() const noexcept;
  const Scalar& finite() const noexcept { return finite_; }
  Scalar reciprocal() const;

  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return Scalar::equal(a.finite_, b.finite_, 0.0);
  }

 private:
  bool infinite_ = false;
  Scalar finite_;
};

}  // namespace gnlab
