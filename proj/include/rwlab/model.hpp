#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rwlab {

/// Experiment parameters: frequency, direction density, ball-shrink exponent
/// and coin probability. Immutable once built.
struct WaveParams {
  double lambda = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double p = 0.5;
  std::int64_t n_dirs = 0;

  double bias() const { return 2.0 * p - 1.0; }
  double bias_sq() const { return bias() * bias(); }
  /// Length scale of the low-frequency region, lambda^(alpha - 1).
  double separation_scale() const;
};

/// Validates inputs and derives N = round-half-even(gamma * lambda).
/// Throws std::invalid_argument on any violated precondition.
WaveParams build_params(double lambda, double gamma, double alpha, double p);

/// Same parameters with a different coin probability.
WaveParams with_probability(const WaveParams& params, double p);

/// N equispaced unit directions starting at angle 0.
struct DirectionSet {
  std::vector<double> angles;
  std::vector<std::array<double, 2>> unit_vectors;
  /// chord[k] = |xi_j - xi_{j+k}| = 2 sin(pi k / N).
  std::vector<double> chord;

  std::size_t size() const { return angles.size(); }
};

DirectionSet build_directions(const WaveParams& params);

/// 2 sin(pi k / N), reduced so that chord(k) == chord(N - k) bit for bit.
double chord_distance(std::int64_t k, std::int64_t n);

/// The smooth radial bump: 1 on [-1, 1], 0 outside (-2, 2), C-infinity.
double cutoff_value(double t);

inline double cutoff_squared(double t) {
  const double a = cutoff_value(t);
  return a * a;
}

/// Numerical facts about the bump, computed once per process.
struct CutoffSpec {
  static constexpr int kMaxOrder = 8;

  /// sup_t |d^m/dt^m a^2(t)| on a 10^5-point grid, m = 0..8.
  std::array<double, kMaxOrder + 1> profile_derivative_bounds{};
  /// sup over x and unit v of |d^m/dv^m a^2(|x|)|, the quantity that
  /// controls repeated integration by parts in the plane.
  std::array<double, kMaxOrder + 1> directional_derivative_bounds{};
  /// m2 = int_0^2 a^2(t) t dt.
  double squared_radial_mass = 0.0;
  /// int_0^2 a^2(t) dt, the constant in the biased-term asymptotics.
  double squared_line_mass = 0.0;

  double profile(double t) const { return cutoff_value(t); }
};

const CutoffSpec& cutoff_spec();

/// ||a_lambda^2||_{L^1} = 2 pi lambda^{-2 alpha} m2.
double cutoff_mass(const WaveParams& params);

}  // namespace rwlab
