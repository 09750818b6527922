#include "rwlab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rwlab/quadrature.hpp"

namespace rwlab {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double bessel_j0_series(double z) {
  const long double q = -0.25L * static_cast<long double>(z) * z;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L * (1.0L + std::fabs(sum))) break;
  }
  return static_cast<double>(sum);
}

double bessel_j0_hankel(double z) {
  // a_k = ((2k-1)!!)^2 / (k! 8^k); terms a_k / z^k alternate between P and Q.
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
    if (next >= term) break;  // asymptotic series: stop at the smallest term
    term = next;
    const int j = k / 2;
    if (k % 2 == 0) {
      p += (j % 2 == 0 ? term : -term);
    } else {
      q += (j % 2 == 0 ? -term : term);
    }
    if (term < 1e-18) break;
  }
  const double s = std::sin(z), c = std::cos(z);
  const double cos_chi = (c + s) / std::numbers::sqrt2;
  const double sin_chi = (s - c) / std::numbers::sqrt2;
  return std::sqrt(2.0 / (kPi * z)) * (p * cos_chi - q * sin_chi);
}

double bessel_j0(double z) {
  if (!std::isfinite(z) || z < 0.0) {
    throw std::invalid_argument("bessel_j0 needs a finite non-negative argument");
  }
  return z <= kBesselHandoff ? bessel_j0_series(z) : bessel_j0_hankel(z);
}

double angular_integral(double w) { return 2.0 * kPi * bessel_j0(w); }

double angular_integral_direct(double w) {
  const auto r = quad::adaptive_gk15([w](double t) { return std::cos(w * std::cos(t)); }, 0.0,
                                     kPi, 1e-13, 1e-14, 200000);
  return 2.0 * r.value;
}

double stationary_phase_leading(double w) {
  return 2.0 * std::sqrt(2.0 * kPi) / std::sqrt(w) * std::cos(w - 0.25 * kPi);
}

AsymptoticCheck asymptotic_check(double w) {
  AsymptoticCheck c;
  c.w = w;
  c.exact_value = angular_integral(w);
  c.leading_term = stationary_phase_leading(w);
  c.residual = c.exact_value - c.leading_term;
  return c;
}

AsymptoticScan scan_asymptotics(double w_min, double w_max, double step) {
  if (!(w_min > 0.0) || !(w_max > w_min) || !(step > 0.0)) {
    throw std::invalid_argument("scan_asymptotics: need 0 < w_min < w_max and step > 0");
  }
  AsymptoticScan scan;
  const auto count = static_cast<std::size_t>(std::floor((w_max - w_min) / step)) + 1;
  scan.samples.reserve(count);
  std::vector<double> magnitude;
  magnitude.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    scan.samples.push_back(asymptotic_check(w_min + step * static_cast<double>(i)));
    const double r = std::abs(scan.samples.back().residual);
    magnitude.push_back(r);
    scan.c_check = std::max(scan.c_check, r * std::pow(scan.samples.back().w, 1.5));
  }
  std::vector<double> xs, ys;
  for (std::size_t i : local_maxima(magnitude)) {
    xs.push_back(scan.samples[i].w);
    ys.push_back(magnitude[i]);
  }
  scan.residual_fit = fit_exponent(xs, ys);
  return scan;
}

SurfaceEnvelope surface_wave_envelope(double lambda, std::span<const double> radii,
                                      double fit_w_min, double fit_w_max) {
  if (!(lambda > 0.0)) throw std::invalid_argument("surface_wave_envelope: lambda must be positive");
  SurfaceEnvelope env;
  env.samples.reserve(radii.size());
  std::vector<double> magnitude;
  magnitude.reserve(radii.size());
  double previous = -1.0;
  for (double r : radii) {
    if (!(r >= 0.0) || r < previous) {
      throw std::invalid_argument("surface_wave_envelope: radii must be non-negative and sorted");
    }
    previous = r;
    const double m = std::sqrt(lambda) * std::abs(angular_integral(lambda * r));
    env.samples.push_back({r, m});
    magnitude.push_back(m);
  }
  std::vector<double> xs, ys;
  for (std::size_t i : local_maxima(magnitude)) {
    const double w = lambda * env.samples[i].radius;
    if (w < fit_w_min || w > fit_w_max) continue;
    xs.push_back(env.samples[i].radius);
    ys.push_back(magnitude[i]);
  }
  env.envelope_fit = fit_exponent(xs, ys);
  return env;
}

}  // namespace rwlab
