#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "rwlab/errors.hpp"

namespace rwlab::quad {

/// 15-point Kronrod rule with its embedded 7-point Gauss rule (QUADPACK
/// constants). Abscissae are for [-1, 1]; index 7 is the centre.
struct GaussKronrod15 {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for xgk[1], xgk[3], xgk[5], xgk[7].
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// One G7/K15 panel on [a, b]. The error is |K15 - G7|.
template <class F>
QuadResult gk15(F&& f, double a, double b) {
  using R = GaussKronrod15;
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * R::wgk[7];
  double gauss = fc * R::wg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * R::xgk[i];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += R::wgk[i] * sum;
    if (i % 2 == 1) gauss += R::wg[i / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Fixed composite rule: `panels` equal G7/K15 panels over [a, b].
/// Cost is exactly 15 * panels evaluations.
template <class F>
QuadResult composite_gk15(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  QuadResult total;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == panels) ? b : lo + h;
    const QuadResult r = gk15(f, lo, hi);
    total.value += r.value;
    total.abs_error += r.abs_error;
  }
  return total;
}

/// Globally adaptive G7/K15 bisection (QAG-style). Stops when the summed
/// error estimate drops below max(abs_tol, rel_tol * |value|). Throws
/// NumericalError if `max_intervals` is exhausted first.
template <class F>
QuadResult adaptive_gk15(F&& f, double a, double b, double rel_tol,
                         double abs_tol = 0.0, int max_intervals = 4000) {
  struct Interval {
    double lo, hi;
    QuadResult r;
    bool operator<(const Interval& o) const { return r.abs_error < o.r.abs_error; }
  };
  std::priority_queue<Interval> heap;
  QuadResult total = gk15(f, a, b);
  heap.push({a, b, total});
  int count = 1;
  while (total.abs_error > std::max(abs_tol, rel_tol * std::abs(total.value))) {
    if (count >= max_intervals) {
      throw NumericalError("adaptive quadrature did not converge");
    }
    const Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const QuadResult left = gk15(f, worst.lo, mid);
    const QuadResult right = gk15(f, mid, worst.hi);
    total.value += left.value + right.value - worst.r.value;
    total.abs_error += left.abs_error + right.abs_error - worst.r.abs_error;
    heap.push({worst.lo, mid, left});
    heap.push({mid, worst.hi, right});
    ++count;
  }
  // Re-sum to shed the drift from incremental updates.
  QuadResult exact;
  while (!heap.empty()) {
    exact.value += heap.top().r.value;
    exact.abs_error += heap.top().r.abs_error;
    heap.pop();
  }
  return exact;
}

}  // namespace rwlab::quad
