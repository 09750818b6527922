#include "rwlab/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "format.hpp"
#include "rwlab/errors.hpp"
#include "rwlab/fft.hpp"
#include "rwlab/parallel.hpp"
#include "rwlab/quadrature.hpp"
#include "rwlab/specfun.hpp"

namespace rwlab {
namespace {

constexpr double kPi = std::numbers::pi;

void check_separation(double d) {
  if (!std::isfinite(d) || d < 0.0 || d > 2.0 + 1e-12) {
    throw std::invalid_argument("separation d must lie in [0, 2]");
  }
}

}  // namespace

double PairKernel::offdiag_row_sum() const {
  double s = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) s += values[k];
  return s;
}

PairIntegral pair_integral_detailed(const WaveParams& params, double d) {
  check_separation(d);
  // Substituting r = lambda^-alpha t leaves 2 pi lambda^{-2 alpha} times
  // F(w) = int_0^2 a^2(t) J0(w t) t dt with w = lambda^{1-alpha} d.
  const double w = std::pow(params.lambda, 1.0 - params.alpha) * d;
  const double scale = 2.0 * kPi * std::pow(params.lambda, -2.0 * params.alpha);
  const int panels = 8 * static_cast<int>(std::ceil(w / kPi)) + 16;
  const auto r = quad::composite_gk15(
      [w](double t) { return cutoff_squared(t) * bessel_j0(w * t) * t; }, 0.0, 2.0, panels);
  const double m2 = cutoff_spec().squared_radial_mass;
  if (!(r.abs_error <= 1e-8 * m2) || !std::isfinite(r.value)) {
    throw NumericalError("pair integral error estimate " + format_number(r.abs_error) +
                         " exceeds tolerance at d = " + format_number(d));
  }
  return {scale * r.value, scale * r.abs_error};
}

double pair_integral(const WaveParams& params, double d) {
  return pair_integral_detailed(params, d).value;
}

OracleResult pair_integral_2d_oracle(const WaveParams& params, double d, bool refine,
                                     double max_nodes) {
  check_separation(d);
  const double lam = params.lambda;
  if (std::pow(lam, 1.0 - params.alpha) > 2000.0) {
    throw InfeasibleGrid("2-D oracle needs lambda^(1-alpha) <= 2000");
  }
  const double radius = 2.0 * std::pow(lam, -params.alpha);
  const double h_target = std::min(2.0 * kPi / (12.0 * lam), 2.0 * radius / 256.0);
  const auto half_nodes = static_cast<std::int64_t>(std::ceil(radius / h_target));
  const double per_axis = 2.0 * static_cast<double>(half_nodes) + 1.0;
  const double total = per_axis * per_axis * (refine ? 5.0 : 1.0);
  if (total > max_nodes) {
    throw InfeasibleGrid("2-D oracle grid of " + format_number(total) + " nodes exceeds budget");
  }

  auto trapezoid = [&](std::int64_t m, double& re, double& im) {
    const double h = radius / static_cast<double>(m);
    const double lam_alpha = std::pow(lam, params.alpha);
    std::vector<double> c(2 * m + 1), s(2 * m + 1);
    for (std::int64_t i = -m; i <= m; ++i) {
      const double x = h * static_cast<double>(i);
      c[i + m] = std::cos(lam * d * x);
      s[i + m] = std::sin(lam * d * x);
    }
    std::vector<double> col_re(2 * m + 1, 0.0), col_im(2 * m + 1, 0.0);
    parallel_for(static_cast<std::size_t>(2 * m + 1), [&](std::size_t idx) {
      const std::int64_t i = static_cast<std::int64_t>(idx) - m;
      const double x = h * static_cast<double>(i);
      double weight = 0.0;
      for (std::int64_t j = -m; j <= m; ++j) {
        const double y = h * static_cast<double>(j);
        weight += cutoff_squared(lam_alpha * std::hypot(x, y));
      }
      col_re[idx] = weight * c[idx];
      col_im[idx] = weight * s[idx];
    });
    // Pair +x with -x so the odd part cancels symmetrically.
    re = col_re[m];
    im = col_im[m];
    for (std::int64_t i = 1; i <= m; ++i) {
      re += col_re[m + i] + col_re[m - i];
      im += col_im[m + i] + col_im[m - i];
    }
    re *= h * h;
    im *= h * h;
  };

  OracleResult out;
  out.nodes_per_axis = 2 * half_nodes + 1;
  out.spacing = radius / static_cast<double>(half_nodes);
  trapezoid(half_nodes, out.real, out.imag);
  out.refined_real = std::nan("");
  if (refine) {
    double im2 = 0.0;
    trapezoid(2 * half_nodes, out.refined_real, im2);
  }
  return out;
}

DecayBoundParams decay_bound_params(int n) {
  if (n < 0) throw std::invalid_argument("decay order must be non-negative");
  const auto& spec = cutoff_spec();
  double c = 0.0;
  for (int m = 0; m <= CutoffSpec::kMaxOrder; ++m) {
    c = std::max(c, std::ldexp(std::max(1.0, spec.directional_derivative_bounds[m]), m));
  }
  return {n, 4.0 * kPi * c};
}

double decay_bound(const WaveParams& params, double d, int n) {
  const DecayBoundParams b = decay_bound_params(n);
  const double u = d / std::pow(params.lambda, params.alpha - 1.0);
  return b.constant * std::pow(params.lambda, -2.0 * params.alpha) * std::pow(1.0 + u, -n);
}

DyadicCheck dyadic_sum_check(const WaveParams& params, double A) {
  if (!(A >= 2.0)) throw std::invalid_argument("dyadic sum needs A >= 2");
  const std::int64_t n = params.n_dirs;
  const double scale = std::pow(params.lambda, params.alpha - 1.0);
  double sum = 0.0;
  for (std::int64_t k = 1; k < n; ++k) {
    sum += std::pow(1.0 + chord_distance(k, n) / scale, -A);
  }
  return {sum, sum / (params.gamma * std::pow(params.lambda, params.alpha))};
}

std::vector<double> circulant_spectrum(const std::vector<double>& row) {
  const std::size_t n = row.size();
  RealFft fft(n);
  std::vector<std::complex<double>> bins(fft.bins());
  fft.forward(row, bins);
  std::vector<double> mu(n);
  for (std::size_t m = 0; m < bins.size(); ++m) {
    mu[m] = bins[m].real();
    if (m != 0) mu[n - m] = bins[m].real();
  }
  return mu;
}

PairKernel build_kernel(const WaveParams& params) {
  const std::int64_t n = params.n_dirs;
  if (n > 1000000) throw std::invalid_argument("kernel size exceeds 10^6 directions");
  PairKernel kernel;
  kernel.params = params;
  kernel.values.assign(n, 0.0);
  kernel.chords.assign(n, 0.0);
  const std::int64_t half = n / 2;
  std::vector<double> errors(half + 1, 0.0);
  parallel_for(static_cast<std::size_t>(half + 1), [&](std::size_t idx) {
    const auto k = static_cast<std::int64_t>(idx);
    const double d = chord_distance(k, n);
    PairIntegral r;
    try {
      r = pair_integral_detailed(params, d);
    } catch (const NumericalError& e) {
      throw NumericalError("kernel entry k = " + std::to_string(k) + ": " + e.what());
    }
    kernel.values[k] = r.value;
    kernel.chords[k] = d;
    errors[idx] = r.abs_error;
  }, 8);
  for (std::int64_t k = half + 1; k < n; ++k) {
    kernel.values[k] = kernel.values[n - k];
    kernel.chords[k] = kernel.chords[n - k];
  }
  kernel.max_abs_error = *std::max_element(errors.begin(), errors.end());
  kernel.spectrum = circulant_spectrum(kernel.values);
  return kernel;
}

void write_kernel_csv(std::ostream& out, const PairKernel& kernel) {
  out << "k,d_k,I_k,mu_k\n";
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    out << k << ',' << format_number(kernel.chords[k]) << ','
        << format_number(kernel.values[k]) << ',' << format_number(kernel.spectrum[k]) << '\n';
  }
}

}  // namespace rwlab
