#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwlab/fit.hpp"
#include "rwlab/oscint.hpp"

namespace rwlab {

struct CoefficientVector {
  std::vector<std::int8_t> signs;
  std::uint64_t seed = 0;
  double p = 0.5;

  std::size_t size() const { return signs.size(); }
};

/// Uniform double in [0, 1) from a counter-based hash of the three keys.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t index);

/// Entry j is +1 iff counter_uniform(seed, sample, j) < p.
CoefficientVector sample_coefficients(const WaveParams& params, std::uint64_t seed,
                                      std::uint64_t sample = 0);

/// sum_{j,l} C_j C_l I_{jl} evaluated as (1/N) sum_m mu_m |c_hat_m|^2.
double mass_quadratic_form(const PairKernel& kernel, const CoefficientVector& coeffs);

/// Direct O(N^2) double sum; test oracle.
double mass_double_sum(const PairKernel& kernel, const CoefficientVector& coeffs);

struct GridMass {
  double value = 0.0;
  double spacing = 0.0;
  std::int64_t nodes_per_axis = 0;
};

/// int a^2(lambda^alpha |x|) |sum_j C_j exp(i lambda x . xi_j)|^2 dx by the
/// trapezoid rule on a symmetric square grid with >= 12 nodes per wavelength
/// (times `refinement`). Needs lambda^{1-alpha} <= 512 and N <= 4096.
GridMass grid_quadrature_mass(const WaveParams& params, const CoefficientVector& coeffs,
                              int refinement = 1);

struct McSummary {
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;  // leave-one-out jackknife
};

/// Summary of an arbitrary sample, reduced in a fixed order.
McSummary summarize_samples(std::span<const double> values);

/// M >= 100 independent draws through mass_quadratic_form.
McSummary mc_moments(const PairKernel& kernel, double p, std::size_t samples,
                     std::uint64_t seed);

struct DarbouxSeries {
  double w = 0.0;  // lambda |x|
  std::vector<double> errors;
  FitResult fit;   // over max(error, floor)
};

struct DarbouxResult {
  std::vector<double> gammas;
  double floor = 0.0;
  std::vector<DarbouxSeries> series;
};

/// |(2 pi / N) sum_l exp(i w cos theta_l) - 2 pi J0(w)| for N = round(gamma lambda)
/// equispaced angles, over the gamma ladder. Errors below `floor` sit in
/// roundoff and enter the fit clamped to it.
DarbouxResult darboux_error(double lambda, double alpha, std::span<const double> x_magnitudes,
                            std::span<const double> gammas, double floor = 1e-14);

struct E1Norm {
  double norm = 0.0;
  /// eps N sqrt(||a_lambda^2||_1) times a safety factor: below this the
  /// computed norm carries no information.
  double roundoff_floor = 0.0;
  bool resolved = false;
};

/// ||a_lambda E1||_{L2} with E1(x) = sum_j exp(i lambda x . xi_j) - N J0(lambda |x|),
/// on the grid_quadrature_mass grid.
E1Norm e1_error_norm(const WaveParams& params);

struct E1Scan {
  std::vector<double> ladder;
  std::vector<E1Norm> norms;
  /// Fitted over every point; `all_resolved` says whether that means anything.
  FitResult fit;
  bool all_resolved = false;
};

E1Scan e1_lambda_scan(std::span<const double> lambdas, double gamma, double alpha);
E1Scan e1_gamma_scan(double lambda, std::span<const double> gammas, double alpha);

}  // namespace rwlab
