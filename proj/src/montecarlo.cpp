#include "rwlab/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rwlab/errors.hpp"
#include "rwlab/fft.hpp"
#include "rwlab/parallel.hpp"
#include "rwlab/specfun.hpp"

namespace rwlab {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Quadratic form through the circulant spectrum with caller-owned scratch.
double spectral_form(const PairKernel& kernel, RealFft& fft, std::span<const double> c,
                     std::vector<std::complex<double>>& bins) {
  const std::size_t n = kernel.size();
  fft.forward(c, bins);
  double s = kernel.spectrum[0] * std::norm(bins[0]);
  for (std::size_t m = 1; m < bins.size(); ++m) {
    const bool nyquist = (n % 2 == 0) && (m == n / 2);
    s += (nyquist ? 1.0 : 2.0) * kernel.spectrum[m] * std::norm(bins[m]);
  }
  return s / static_cast<double>(n);
}

std::vector<double> as_reals(const CoefficientVector& coeffs) {
  return std::vector<double>(coeffs.signs.begin(), coeffs.signs.end());
}

struct Grid {
  double h = 0.0;
  std::int64_t half = 0;
  std::vector<double> x;
};

Grid make_grid(const WaveParams& params, int refinement) {
  if (refinement < 1) throw std::invalid_argument("grid refinement must be >= 1");
  const double radius = 2.0 * std::pow(params.lambda, -params.alpha);
  const double h_target =
      std::min(2.0 * kPi / (12.0 * params.lambda), 2.0 * radius / 256.0) / refinement;
  Grid g;
  g.half = static_cast<std::int64_t>(std::ceil(radius / h_target));
  g.h = radius / static_cast<double>(g.half);
  for (std::int64_t i = -g.half; i <= g.half; ++i) g.x.push_back(g.h * static_cast<double>(i));
  return g;
}

void check_grid_feasible(const WaveParams& params, int refinement) {
  if (std::pow(params.lambda, 1.0 - params.alpha) > 512.0) {
    throw InfeasibleGrid("grid quadrature needs lambda^(1-alpha) <= 512");
  }
  if (params.n_dirs > 4096) throw InfeasibleGrid("grid quadrature needs N <= 4096");
  const double per_axis = 2.0 * std::ceil(3.82 * std::pow(params.lambda, 1.0 - params.alpha) *
                                          refinement) + 1.0;
  if (per_axis * per_axis > 1e8 || per_axis * static_cast<double>(params.n_dirs) > 2.5e7) {
    throw InfeasibleGrid("grid quadrature exceeds its memory budget");
  }
}

// u(x_a, y_b) = sum_j C_j exp(i lambda (x_a cos t_j + y_b sin t_j)) as a
// product of two phase matrices.
Eigen::MatrixXcd wave_on_grid(const WaveParams& params, const Grid& g,
                              std::span<const double> coeffs) {
  const DirectionSet dirs = build_directions(params);
  const auto m = static_cast<Eigen::Index>(g.x.size());
  const auto n = static_cast<Eigen::Index>(dirs.size());
  Eigen::MatrixXcd a(m, n), b(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& xi = dirs.unit_vectors[j];
    for (Eigen::Index i = 0; i < m; ++i) {
      const double px = params.lambda * g.x[i] * xi[0];
      const double py = params.lambda * g.x[i] * xi[1];
      a(i, j) = coeffs[j] * std::complex<double>(std::cos(px), std::sin(px));
      b(i, j) = std::complex<double>(std::cos(py), std::sin(py));
    }
  }
  return a * b.transpose();
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t index) {
  const std::uint64_t h = mix64(mix64(mix64(seed) ^ sample) ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

CoefficientVector sample_coefficients(const WaveParams& params, std::uint64_t seed,
                                      std::uint64_t sample) {
  CoefficientVector c;
  c.seed = seed;
  c.p = params.p;
  c.signs.resize(params.n_dirs);
  for (std::int64_t j = 0; j < params.n_dirs; ++j) {
    c.signs[j] = counter_uniform(seed, sample, static_cast<std::uint64_t>(j)) < params.p ? 1 : -1;
  }
  return c;
}

double mass_quadratic_form(const PairKernel& kernel, const CoefficientVector& coeffs) {
  if (coeffs.size() != kernel.size()) {
    throw std::invalid_argument("coefficient vector and kernel sizes differ");
  }
  RealFft fft(kernel.size());
  std::vector<std::complex<double>> bins(fft.bins());
  const auto c = as_reals(coeffs);
  return spectral_form(kernel, fft, c, bins);
}

double mass_double_sum(const PairKernel& kernel, const CoefficientVector& coeffs) {
  const std::size_t n = kernel.size();
  if (coeffs.size() != n) throw std::invalid_argument("coefficient vector and kernel sizes differ");
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;
    for (std::size_t l = 0; l < n; ++l) row += coeffs.signs[l] * kernel.values[(l + n - j) % n];
    s += coeffs.signs[j] * row;
  }
  return s;
}

GridMass grid_quadrature_mass(const WaveParams& params, const CoefficientVector& coeffs,
                              int refinement) {
  if (static_cast<std::int64_t>(coeffs.size()) != params.n_dirs) {
    throw std::invalid_argument("coefficient vector does not match N");
  }
  check_grid_feasible(params, refinement);
  const Grid g = make_grid(params, refinement);
  const auto c = as_reals(coeffs);
  const Eigen::MatrixXcd u = wave_on_grid(params, g, c);
  const double lam_alpha = std::pow(params.lambda, params.alpha);
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double w = cutoff_squared(lam_alpha * std::hypot(g.x[i], g.x[j]));
      if (w != 0.0) total += w * std::norm(u(i, j));
    }
  }
  return {total * g.h * g.h, g.h, static_cast<std::int64_t>(g.x.size())};
}

McSummary summarize_samples(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 3) throw std::invalid_argument("summary needs at least three samples");
  // Work with offsets from the first sample so a constant sample gives an
  // exactly zero variance.
  std::vector<double> shifted(m);
  for (std::size_t i = 0; i < m; ++i) shifted[i] = values[i] - values[0];
  const double md = static_cast<double>(m);
  const double mean_shift = pairwise_sum(shifted) / md;
  std::vector<double> sq(m);
  for (std::size_t i = 0; i < m; ++i) {
    shifted[i] -= mean_shift;
    sq[i] = shifted[i] * shifted[i];
  }
  const double ss = pairwise_sum(sq);
  McSummary s;
  s.sample_count = m;
  s.empirical_mean = values[0] + mean_shift;
  s.empirical_variance = ss / (md - 1.0);
  s.std_error_mean = std::sqrt(s.empirical_variance / md);
  std::vector<double> loo(m);
  for (std::size_t i = 0; i < m; ++i) {
    loo[i] = std::max(0.0, ss - sq[i] * md / (md - 1.0)) / (md - 2.0);
  }
  const double loo_mean = pairwise_sum(loo) / md;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = loo[i] - loo_mean;
    loo[i] = e * e;
  }
  s.std_error_variance = std::sqrt((md - 1.0) / md * pairwise_sum(loo));
  return s;
}

McSummary mc_moments(const PairKernel& kernel, double p, std::size_t samples,
                     std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("Monte Carlo needs at least 100 samples");
  const WaveParams params = with_probability(kernel.params, p);
  std::vector<double> values(samples);
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    RealFft fft(kernel.size());
    std::vector<std::complex<double>> bins(fft.bins());
    std::vector<double> c(kernel.size());
    const std::size_t stop = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < stop; ++s) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = counter_uniform(seed, s, j) < params.p ? 1.0 : -1.0;
      }
      values[s] = spectral_form(kernel, fft, c, bins);
    }
  }, 1);
  McSummary out = summarize_samples(values);
  out.seed = seed;
  return out;
}

DarbouxResult darboux_error(double lambda, double alpha, std::span<const double> x_magnitudes,
                            std::span<const double> gammas, double floor) {
  const double radius = 2.0 * std::pow(lambda, -alpha);
  DarbouxResult out;
  out.gammas.assign(gammas.begin(), gammas.end());
  out.floor = floor;
  for (double r : x_magnitudes) {
    if (!(r >= 0.0) || r > radius * (1.0 + 1e-12)) {
      throw std::invalid_argument("darboux_error needs 0 <= |x| <= 2 lambda^-alpha");
    }
    DarbouxSeries series;
    series.w = lambda * r;
    const double exact = angular_integral(series.w);
    std::vector<double> clamped;
    for (double g : gammas) {
      const WaveParams p = build_params(lambda, g, alpha, 0.5);
      const std::int64_t n = p.n_dirs;
      double re = 0.0, im = 0.0;
      for (std::int64_t l = 0; l < n; ++l) {
        const double phase =
            series.w * std::cos(2.0 * kPi * static_cast<double>(l) / static_cast<double>(n));
        re += std::cos(phase);
        im += std::sin(phase);
      }
      const double weight = 2.0 * kPi / static_cast<double>(n);
      const double err = std::hypot(weight * re - exact, weight * im);
      series.errors.push_back(err);
      clamped.push_back(std::max(err, floor));
    }
    if (gammas.size() >= 3) series.fit = fit_exponent(gammas, clamped);
    out.series.push_back(std::move(series));
  }
  return out;
}

E1Norm e1_error_norm(const WaveParams& params) {
  check_grid_feasible(params, 1);
  const Grid g = make_grid(params, 1);
  const std::vector<double> ones(params.n_dirs, 1.0);
  const Eigen::MatrixXcd u = wave_on_grid(params, g, ones);
  const double lam_alpha = std::pow(params.lambda, params.alpha);
  const double n = static_cast<double>(params.n_dirs);
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double r = std::hypot(g.x[i], g.x[j]);
      const double w = cutoff_squared(lam_alpha * r);
      if (w == 0.0) continue;
      const std::complex<double> e1 = u(i, j) - n * bessel_j0(params.lambda * r);
      total += w * std::norm(e1);
    }
  }
  E1Norm out;
  out.norm = std::sqrt(total * g.h * g.h);
  out.roundoff_floor =
      100.0 * std::numeric_limits<double>::epsilon() * n * std::sqrt(cutoff_mass(params));
  out.resolved = out.norm > out.roundoff_floor;
  return out;
}

namespace {

E1Scan finish_scan(E1Scan scan) {
  scan.all_resolved = std::all_of(scan.norms.begin(), scan.norms.end(),
                                  [](const E1Norm& e) { return e.resolved; });
  std::vector<double> ys;
  for (const auto& e : scan.norms) ys.push_back(e.norm);
  const bool positive = std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; });
  if (positive && ys.size() >= 3) {
    scan.fit = fit_exponent(scan.ladder, ys);
  } else {
    scan.fit.slope = std::nan("");
  }
  return scan;
}

}  // namespace

E1Scan e1_lambda_scan(std::span<const double> lambdas, double gamma, double alpha) {
  E1Scan scan;
  scan.ladder.assign(lambdas.begin(), lambdas.end());
  for (double lam : lambdas) scan.norms.push_back(e1_error_norm(build_params(lam, gamma, alpha, 0.5)));
  return finish_scan(std::move(scan));
}

E1Scan e1_gamma_scan(double lambda, std::span<const double> gammas, double alpha) {
  E1Scan scan;
  scan.ladder.assign(gammas.begin(), gammas.end());
  for (double g : gammas) scan.norms.push_back(e1_error_norm(build_params(lambda, g, alpha, 0.5)));
  return finish_scan(std::move(scan));
}

}  // namespace rwlab
