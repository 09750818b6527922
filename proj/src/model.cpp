#include "rwlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "jet.hpp"
#include "rwlab/quadrature.hpp"

namespace rwlab {
namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

double bump_factor(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// a(r) on 1 < r < 2 written as a logistic in h = 1/(r-1) - 1/(2-r), which
// is the same function as g(2-r) / (g(2-r) + g(r-1)) but never forms a
// ratio of two underflowing exponentials.
template <int Order>
detail::Jet<Order> cutoff_jet(const detail::Jet<Order>& r) {
  using J = detail::Jet<Order>;
  const J one = J::constant(1.0);
  const J h = one / (r - 1.0) - one / (2.0 - r);
  if (h.c[0] >= 0.0) {
    const J e = exp(J::constant(0.0) - h);
    return one / (one + e);
  }
  const J e = exp(h);
  return e / (one + e);
}

CutoffSpec compute_cutoff_spec() {
  constexpr int kOrder = CutoffSpec::kMaxOrder;
  using J = detail::Jet<kOrder>;
  CutoffSpec spec;
  spec.profile_derivative_bounds.fill(0.0);
  spec.directional_derivative_bounds.fill(0.0);
  spec.profile_derivative_bounds[0] = 1.0;
  spec.directional_derivative_bounds[0] = 1.0;

  constexpr int kProfilePoints = 100000;
  for (int i = 0; i < kProfilePoints; ++i) {
    const double t = 1.0 + (i + 0.5) / kProfilePoints;
    const J a = cutoff_jet(J::variable(t));
    const J a2 = a * a;
    for (int m = 1; m <= kOrder; ++m) {
      spec.profile_derivative_bounds[m] =
          std::max(spec.profile_derivative_bounds[m], std::abs(a2.derivative(m)));
    }
  }

  // Lines x = (s, c) crossing the annulus 1 < |x| < 2. By symmetry s, c >= 0.
  constexpr int kLinePoints = 500;
  for (int ic = 0; ic < kLinePoints; ++ic) {
    const double c = 2.0 * (ic + 0.5) / kLinePoints;
    for (int is = 0; is < kLinePoints; ++is) {
      const double s = 2.0 * (is + 0.5) / kLinePoints;
      const double r0 = std::hypot(s, c);
      if (r0 <= 1.0 || r0 >= 2.0) continue;
      const J sj = J::variable(s);
      const J r = detail::sqrt(sj * sj + J::constant(c * c));
      const J a = cutoff_jet(r);
      const J a2 = a * a;
      for (int m = 1; m <= kOrder; ++m) {
        spec.directional_derivative_bounds[m] =
            std::max(spec.directional_derivative_bounds[m], std::abs(a2.derivative(m)));
      }
    }
  }
  for (int m = 1; m <= kOrder; ++m) {
    spec.directional_derivative_bounds[m] =
        std::max(spec.directional_derivative_bounds[m], spec.profile_derivative_bounds[m]);
  }

  const auto weighted = quad::adaptive_gk15(
      [](double t) { return cutoff_squared(t) * t; }, 1.0, 2.0, 1e-13);
  const auto plain =
      quad::adaptive_gk15([](double t) { return cutoff_squared(t); }, 1.0, 2.0, 1e-13);
  spec.squared_radial_mass = 0.5 + weighted.value;
  spec.squared_line_mass = 1.0 + plain.value;
  return spec;
}

}  // namespace

double WaveParams::separation_scale() const { return std::pow(lambda, alpha - 1.0); }

WaveParams build_params(double lambda, double gamma, double alpha, double p) {
  require_finite(lambda, "lambda");
  require_finite(gamma, "gamma");
  require_finite(alpha, "alpha");
  require_finite(p, "p");
  if (!(lambda > 1.0)) throw std::invalid_argument("lambda must exceed 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (alpha < 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1)");
  }
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  // nearbyint follows the default rounding mode: round half to even.
  const double n = std::nearbyint(gamma * lambda);
  if (n < 1.0) throw std::invalid_argument("gamma * lambda rounds to zero directions");
  if (n > 9.0e15) throw std::invalid_argument("direction count overflows");
  return WaveParams{lambda, gamma, alpha, p, static_cast<std::int64_t>(n)};
}

WaveParams with_probability(const WaveParams& params, double p) {
  return build_params(params.lambda, params.gamma, params.alpha, p);
}

double chord_distance(std::int64_t k, std::int64_t n) {
  k %= n;
  if (k < 0) k += n;
  const std::int64_t m = std::min(k, n - k);
  return 2.0 * std::sin(kPi * static_cast<double>(m) / static_cast<double>(n));
}

DirectionSet build_directions(const WaveParams& params) {
  const std::int64_t n = params.n_dirs;
  DirectionSet set;
  set.angles.reserve(n);
  set.unit_vectors.reserve(n);
  set.chord.reserve(n);
  for (std::int64_t j = 0; j < n; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    set.angles.push_back(theta);
    set.unit_vectors.push_back({std::cos(theta), std::sin(theta)});
    set.chord.push_back(chord_distance(j, n));
  }
  return set;
}

double cutoff_value(double t) {
  t = std::abs(t);
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double up = bump_factor(2.0 - t);
  const double down = bump_factor(t - 1.0);
  return up / (up + down);
}

const CutoffSpec& cutoff_spec() {
  static const CutoffSpec spec = compute_cutoff_spec();
  return spec;
}

double cutoff_mass(const WaveParams& params) {
  return 2.0 * kPi * std::pow(params.lambda, -2.0 * params.alpha) *
         cutoff_spec().squared_radial_mass;
}

}  // namespace rwlab
