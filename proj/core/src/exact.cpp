#include "gnlab/exact.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gnlab/error.hpp"

namespace gnlab {

namespace {

__extension__ typedef __int128 i128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

std::optional<Rational> make(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  require(den != 0, ErrorKind::kParameter, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::sub(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::div(const Rational& a, const Rational& b) {
  if (b.num_ == 0) return std::nullopt;
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::optional<Rational> Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x) || std::fabs(x) > 1e15) return std::nullopt;
  // Continued-fraction expansion; stop at the first convergent that
  // round-trips to the same double.
  double frac = x;
  i128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(frac);
    i128 ai = static_cast<i128>(a);
    i128 h2 = ai * h1 + h0;
    i128 k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2;
    k0 = k1; k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return make(h1, k1);
    double rest = frac - a;
    if (rest == 0.0) break;
    frac = 1.0 / rest;
  }
  return std::nullopt;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar::Scalar(double v) {
  if (auto r = Rational::from_double(v)) {
    exact_ = *r;
    value_ = r->to_double();
  } else {
    value_ = v;
  }
}

Scalar Scalar::inexact(double v) {
  Scalar s;
  s.exact_.reset();
  s.value_ = v;
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  require(!s.empty(), ErrorKind::kParameter, "empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Scalar num = parse(s.substr(0, slash));
    Scalar den = parse(s.substr(slash + 1));
    require(den.value() != 0.0, ErrorKind::kParameter, "zero denominator in '" + s + "'");
    return num / den;
  }
  // Exact decimal: [-]digits[.digits][e[-]digits]
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  i128 mantissa = 0;
  int scale = 0;
  bool digits = false, overflow = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits = true;
      if (mantissa < static_cast<i128>(1) << 100) {
        mantissa = mantissa * 10 + (c - '0');
        if (dot) --scale;
      } else if (!dot) {
        ++scale;
        overflow = true;
      }
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(s.substr(i + 1), &used);
    } catch (const std::exception&) {
      fail(ErrorKind::kParameter, "malformed number '" + s + "'");
    }
    i += 1 + used;
    scale += e;
  }
  require(digits && i == s.size(), ErrorKind::kParameter, "malformed number '" + s + "'");
  double approx = 0.0;
  try {
    approx = std::stod(s);
  } catch (const std::exception&) {
    fail(ErrorKind::kParameter, "malformed number '" + s + "'");
  }
  if (overflow || scale > 18 || scale < -18) return Scalar(approx);
  i128 num = negative ? -mantissa : mantissa;
  i128 den = 1;
  for (int k = 0; k < scale; ++k) num *= 10;
  for (int k = 0; k > scale; --k) den *= 10;
  if (auto r = make(num, den)) return Scalar(*r);
  return inexact(approx);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::add(*a.exact_, *b.exact_)) return Scalar(*r);
  }
  return Scalar::inexact(a.value_ + b.value_);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::sub(*a.exact_, *b.exact_)) return Scalar(*r);
  }
  return Scalar::inexact(a.value_ - b.value_);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::mul(*a.exact_, *b.exact_)) return Scalar(*r);
  }
  return Scalar::inexact(a.value_ * b.value_);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  require(b.value_ != 0.0 || (b.exact_ && !b.exact_->is_zero()), ErrorKind::kParameter,
          "division by zero");
  if (a.exact_ && b.exact_) {
    if (auto r = Rational::div(*a.exact_, *b.exact_)) return Scalar(*r);
  }
  return Scalar::inexact(a.value_ / b.value_);
}

Scalar operator-(const Scalar& a) { return Scalar(0) - a; }

bool Scalar::equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return std::fabs(a.value_ - b.value_) <= tol;
}

bool Scalar::less_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.exact_ && b.exact_) return !(*b.exact_ < *a.exact_);
  return a.value_ <= b.value_ + tol;
}

std::string Scalar::to_string() const {
  if (exact_) return exact_->to_string();
  return format_double(value_);
}

Exponent::Exponent(double v) {
  if (std::isinf(v) && v > 0) {
    infinite_ = true;
  } else {
    finite_ = Scalar(v);
  }
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "oo" || text == "Inf") return infinity();
  return Exponent(Scalar::parse(text));
}

double Exponent::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : finite_.value();
}

Scalar Exponent::reciprocal() const {
  if (infinite_) return Scalar(0);
  return Scalar(1) / finite_;
}

std::string Exponent::to_string() const { return infinite_ ? "inf" : finite_.to_string(); }

}  // namespace gnlab
