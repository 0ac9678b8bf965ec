#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// Truncated Taylor series c_k = f^(k)(t0)/k!, k = 0..order.
struct Jet {
  std::vector<double> c;

  explicit Jet(int order, double value = 0.0) : c(static_cast<std::size_t>(order) + 1, 0.0) { c[0] = value; }

  static Jet variable(int order, double t0) {
    Jet j(order, t0);
    if (order >= 1) j.c[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c.size()) - 1; }

  /// k-th derivative.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[static_cast<std::size_t>(k)] * f;
  }
};

inline Jet operator+(Jet a, const Jet& b) {
  for (std::size_t k = 0; k < a.c.size(); ++k) a.c[k] += b.c[k];
  return a;
}

inline Jet operator-(Jet a, const Jet& b) {
  for (std::size_t k = 0; k < a.c.size(); ++k) a.c[k] -= b.c[k];
  return a;
}

inline Jet operator*(double s, Jet a) {
  for (double& v : a.c) v *= s;
  return a;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.order());
  for (std::size_t k = 0; k < a.c.size(); ++k)
    for (std::size_t i = 0; i <= k; ++i) out.c[k] += a.c[i] * b.c[k - i];
  return out;
}

inline Jet reciprocal(const Jet& a) {
  Jet r(a.order());
  r.c[0] = 1.0 / a.c[0];
  for (std::size_t k = 1; k < a.c.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
    r.c[k] = -s * r.c[0];
  }
  return r;
}

inline Jet exp(const Jet& a) {
  Jet b(a.order());
  b.c[0] = std::exp(a.c[0]);
  for (std::size_t k = 1; k < a.c.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * b.c[k - j];
    b.c[k] = s / static_cast<double>(k);
  }
  return b;
}

/// sin and cos of a series, computed together.
inline std::pair<Jet, Jet> sincos(const Jet& a) {
  Jet s(a.order()), co(a.order());
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (std::size_t k = 1; k < a.c.size(); ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * a.c[j] * co.c[k - j];
      cc += static_cast<double>(j) * a.c[j] * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    co.c[k] = -cc / static_cast<double>(k);
  }
  return {s, co};
}

}  // namespace oracle
