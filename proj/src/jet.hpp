#pragma once

// Truncated Taylor series arithmetic: c[k] = f^(k)(t0) / k!.

#include <array>
#include <cmath>

namespace rwlab::detail {

template <int Order>
struct Jet {
  std::array<double, Order + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double t0) {
    Jet j;
    j.c[0] = t0;
    if constexpr (Order >= 1) j.c[1] = 1.0;
    return j;
  }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;
    return c[k] * factorial;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int k = 0; k <= Order; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int k = 0; k <= Order; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator-(double s, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) r.c[k] = -b.c[k];
    r.c[0] += s;
    return r;
  }
  friend Jet operator-(Jet a, double s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
      r.c[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) {
      double s = a.c[k];
      for (int i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
};

template <int Order>
Jet<Order> exp(const Jet<Order>& a) {
  // f' = a' f  =>  k f_k = sum_{i=1}^{k} i a_i f_{k-i}
  Jet<Order> r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= Order; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * r.c[k - i];
    r.c[k] = s / k;
  }
  return r;
}

template <int Order>
Jet<Order> sqrt(const Jet<Order>& a) {
  // r^2 = a  =>  2 r_0 r_k = a_k - sum_{i=1}^{k-1} r_i r_{k-i}
  Jet<Order> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k <= Order; ++k) {
    double s = a.c[k];
    for (int i = 1; i < k; ++i) s -= r.c[i] * r.c[k - i];
    r.c[k] = s / (2.0 * r.c[0]);
  }
  return r;
}

}  // namespace rwlab::detail
