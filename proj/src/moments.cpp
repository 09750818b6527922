#include "rwlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "format.hpp"
#include "rwlab/errors.hpp"

namespace rwlab {
namespace {

constexpr double kPi = std::numbers::pi;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

double sum_offdiag_squares(const PairKernel& kernel) {
  double s = 0.0;
  for (std::size_t k = 1; k < kernel.size(); ++k) s += kernel.values[k] * kernel.values[k];
  return s;
}

double checked_variance(double v, double expectation) {
  if (v < -1e-12 * expectation * expectation) {
    throw NumericalError("negative variance " + format_number(v) + ": kernel is corrupt");
  }
  return std::max(v, 0.0);
}

}  // namespace

double coin_pair_moment(double p) {
  check_probability(p);
  const double b = 2.0 * p - 1.0;
  return b * b;
}

double exact_expectation(const PairKernel& kernel, double p) {
  const double q = coin_pair_moment(p);
  const double n = static_cast<double>(kernel.size());
  return n * kernel.values[0] + q * n * kernel.offdiag_row_sum();
}

double exact_variance(const PairKernel& kernel, double p) {
  const double q = coin_pair_moment(p);
  const double n = static_cast<double>(kernel.size());
  const double r = kernel.offdiag_row_sum();
  // Symmetric circulant: S2' = S2 = N sum I_k^2, each row-sum product = N R^2.
  const double s2 = n * sum_offdiag_squares(kernel);
  const double v = (1.0 - q) * (1.0 - q) * 2.0 * s2 + (q - q * q) * 4.0 * n * r * r;
  return checked_variance(v, exact_expectation(kernel, p));
}

double exact_variance_generic(const PairKernel& kernel, double p) {
  const std::size_t n = kernel.size();
  if (n > 512) throw std::invalid_argument("generic variance path is limited to N <= 512");
  const double q = coin_pair_moment(p);
  std::vector<double> m(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) m[j * n + l] = kernel.values[(l + n - j) % n];
  }
  std::vector<double> row(n, 0.0), col(n, 0.0);
  double s2 = 0.0, s2t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (j == l) continue;
      const double v = m[j * n + l];
      row[j] += v;
      col[l] += v;
      s2 += v * v;
      s2t += v * m[l * n + j];
    }
  }
  double products = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    products += row[j] * row[j] + col[j] * row[j] + row[j] * col[j] + col[j] * col[j];
  }
  const double v = (1.0 - q) * (1.0 - q) * (s2 + s2t) + (q - q * q) * products;
  return checked_variance(v, exact_expectation(kernel, p));
}

EnumeratedMoments enumerate_moments(const PairKernel& kernel, double p) {
  check_probability(p);
  const std::size_t n = kernel.size();
  if (n > 20) throw std::invalid_argument("enumeration is limited to N <= 20");
  std::vector<double> plus_pow(n + 1), minus_pow(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    plus_pow[i] = std::pow(p, static_cast<double>(i));
    minus_pow[i] = std::pow(1.0 - p, static_cast<double>(i));
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> offdiag(count), weight(count);
  std::vector<double> c(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::size_t plus = 0;
    for (std::size_t j = 0; j < n; ++j) {
      c[j] = (mask >> j) & 1U ? 1.0 : -1.0;
      plus += (mask >> j) & 1U;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = j + 1; l < n; ++l) s += c[j] * c[l] * kernel.values[l - j];
    }
    offdiag[mask] = 2.0 * s;
    weight[mask] = plus_pow[plus] * minus_pow[n - plus];
  }
  // The diagonal contributes the constant N I_0, so only the off-diagonal
  // part is random; centring on its mean avoids cancellation.
  long double mean = 0.0L;
  for (std::size_t i = 0; i < count; ++i) mean += static_cast<long double>(weight[i]) * offdiag[i];
  long double var = 0.0L;
  for (std::size_t i = 0; i < count; ++i) {
    const long double e = offdiag[i] - mean;
    var += weight[i] * e * e;
  }
  return {static_cast<double>(n) * kernel.values[0] + static_cast<double>(mean),
          static_cast<double>(var)};
}

KernelRatios kernel_ratios(const PairKernel& kernel) {
  const WaveParams& w = kernel.params;
  const double n = static_cast<double>(kernel.size());
  const double r = kernel.offdiag_row_sum();
  const double s2 = n * sum_offdiag_squares(kernel);
  KernelRatios out;
  out.lambda = w.lambda;
  out.gamma = w.gamma;
  out.alpha = w.alpha;
  out.expectation = n * r / (w.gamma * w.gamma * std::pow(w.lambda, 1.0 - w.alpha));
  out.variance_1 = 2.0 * s2 / (w.gamma * w.gamma * std::pow(w.lambda, 1.0 - 3.0 * w.alpha));
  out.variance_2 =
      4.0 * n * r * r / (w.gamma * w.gamma * w.gamma * std::pow(w.lambda, 1.0 - 2.0 * w.alpha));
  return out;
}

BoundConstants calibrate_constants(std::span<const KernelRatios> ratios, double headroom,
                                   double gamma_min) {
  if (ratios.empty()) throw std::invalid_argument("calibration needs at least one kernel");
  if (!(headroom >= 1.0)) throw std::invalid_argument("calibration headroom must be >= 1");
  double lambda_min = ratios.front().lambda;
  for (const auto& r : ratios) lambda_min = std::min(lambda_min, r.lambda);
  BoundConstants out;
  out.headroom = headroom;
  out.calibration_lambda = lambda_min;
  double k = 0.0, c1 = 0.0, c2 = 0.0;
  double c = std::numeric_limits<double>::infinity();
  for (const auto& r : ratios) {
    if (r.lambda != lambda_min) continue;
    k = std::max(k, r.expectation);
    c1 = std::max(c1, r.variance_1);
    c2 = std::max(c2, r.variance_2);
    if (r.gamma >= gamma_min) c = std::min(c, r.expectation);
  }
  out.K = headroom * k;
  out.C1 = headroom * c1;
  out.C2 = headroom * c2;
  out.c = (std::isfinite(c) && c > 0.0) ? c / headroom : std::nan("");
  return out;
}

ExpectationBounds expectation_bounds(const WaveParams& params, BoundMode mode,
                                     const BoundConstants& constants, double gamma_min) {
  if (mode == BoundMode::two_sided && params.gamma < gamma_min) {
    throw std::invalid_argument("two-sided expectation bounds need gamma >= gamma_min");
  }
  const double q = params.bias_sq();
  const double g = params.gamma, lam = params.lambda, a = params.alpha;
  const double diag = g * std::pow(lam, 1.0 - 2.0 * a);
  const double biased = q * g * g * std::pow(lam, 1.0 - a);
  ExpectationBounds out;
  out.upper = 4.0 * kPi * diag + constants.K * biased;
  if (mode == BoundMode::two_sided) out.lower = kPi * diag + constants.c * biased;
  return out;
}

double variance_bound(const WaveParams& params, const BoundConstants& constants) {
  const double q = params.bias_sq();
  const double g = params.gamma, lam = params.lambda, a = params.alpha;
  const double first = constants.C1 * std::pow(lam, 1.0 - 3.0 * a) * g * g * (1.0 - q) * (1.0 - q);
  const double second = constants.C2 * g * g * g * std::pow(lam, 1.0 - 2.0 * a) * q * (1.0 - q);
  // Both terms vanish for a deterministic coin whatever the constants are.
  if (q == 1.0) return 0.0;
  return first + second;
}

std::string to_string(Equidistribution c) {
  switch (c) {
    case Equidistribution::strong: return "strong";
    case Equidistribution::weak: return "weak";
    case Equidistribution::none: return "none";
  }
  return "none";
}

Classification equidistribution_margin(const MomentReport& report, const WaveParams& params,
                                       const ClassifyOptions& options) {
  Classification out;
  out.expectation_ratio = report.normalized_expectation / report.normalized_volume;
  out.variance_ratio =
      report.normalized_variance / (report.normalized_volume * report.normalized_volume);
  const double var_margin = options.delta - out.variance_ratio;
  out.strong_margin =
      std::min(options.delta - std::abs(out.expectation_ratio - 1.0), var_margin);
  out.weak_margin = std::min({out.expectation_ratio - 1.0 / options.kappa,
                              options.kappa - out.expectation_ratio, var_margin});
  if (out.strong_margin >= 0.0) {
    out.kind = Equidistribution::strong;
  } else if (out.weak_margin >= 0.0) {
    out.kind = Equidistribution::weak;
  }
  const double edge = std::pow(params.lambda, -0.5 * params.alpha) / std::sqrt(params.gamma);
  out.threshold_ok = std::abs(params.p - 0.5) <= edge;
  return out;
}

MomentReport make_report(const PairKernel& kernel, double p, const BoundConstants& constants,
                         const ClassifyOptions& options) {
  MomentReport r;
  r.params = with_probability(kernel.params, p);
  r.expectation = exact_expectation(kernel, p);
  r.variance = exact_variance(kernel, p);
  const bool two_sided = r.params.gamma >= options.gamma_min;
  const auto eb = expectation_bounds(
      r.params, two_sided ? BoundMode::two_sided : BoundMode::upper_only, constants,
      options.gamma_min);
  r.expectation_bound_upper = eb.upper;
  r.expectation_bound_lower = eb.lower.value_or(std::nan(""));
  r.variance_bound = variance_bound(r.params, constants);
  const double n = static_cast<double>(kernel.size());
  r.normalized_expectation = r.expectation / n;
  r.normalized_variance = r.variance / (n * n);
  r.normalized_volume = cutoff_mass(r.params);
  const Classification c = equidistribution_margin(r, r.params, options);
  r.classification = c.kind;
  r.expectation_ratio = c.expectation_ratio;
  r.variance_ratio = c.variance_ratio;
  r.threshold_ok = c.threshold_ok;
  return r;
}

}  // namespace rwlab
