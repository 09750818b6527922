#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "rwlab/oscint.hpp"

namespace rwlab {

/// E[C_j C_l] for j != l: (2p - 1)^2.
double coin_pair_moment(double p);

/// N I_0 + (2p-1)^2 N sum_{k != 0} I_k.
double exact_expectation(const PairKernel& kernel, double p);

/// Circulant closed form of the variance:
/// (1-q)^2 (S2 + S2') + (q - q^2) * (four row-sum products), q = (2p-1)^2.
/// Throws NumericalError if the result is negative beyond roundoff.
double exact_variance(const PairKernel& kernel, double p);

/// Same formula with every sum formed from the dense N x N matrix. N <= 512.
double exact_variance_generic(const PairKernel& kernel, double p);

struct EnumeratedMoments {
  double expectation = 0.0;
  double variance = 0.0;
};

/// Weighted sum over all 2^N sign vectors. N <= 20.
EnumeratedMoments enumerate_moments(const PairKernel& kernel, double p);

/// Constants standing in for the unspecified K, c, C1, C2 of the bounds.
struct BoundConstants {
  double K = std::nan("");
  double c = std::nan("");
  double C1 = std::nan("");
  double C2 = std::nan("");
  double headroom = 2.0;
  double calibration_lambda = std::nan("");
};

/// Kernel-only ratios that the bound constants must dominate:
///   expectation: N R / (gamma^2 lambda^{1-alpha})
///   variance_1:  2 S2 / (gamma^2 lambda^{1-3 alpha})
///   variance_2:  4 N R^2 / (gamma^3 lambda^{1-2 alpha})
struct KernelRatios {
  double lambda = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double expectation = 0.0;
  double variance_1 = 0.0;
  double variance_2 = 0.0;
};

KernelRatios kernel_ratios(const PairKernel& kernel);

/// Uses only the entries at the smallest lambda. K, C1, C2 are headroom times
/// the largest ratio there; c is the smallest expectation ratio over entries
/// with gamma >= gamma_min, divided by the headroom (NaN if none qualify or
/// the ratio is not positive).
BoundConstants calibrate_constants(std::span<const KernelRatios> ratios, double headroom = 2.0,
                                   double gamma_min = 8.0);

enum class BoundMode { upper_only, two_sided };

struct ExpectationBounds {
  std::optional<double> lower;
  double upper = 0.0;
};

/// upper = 4 pi gamma lambda^{1-2a} + K q gamma^2 lambda^{1-a}
/// lower = pi gamma lambda^{1-2a} + c q gamma^2 lambda^{1-a}
/// two_sided throws std::invalid_argument when gamma < gamma_min.
ExpectationBounds expectation_bounds(const WaveParams& params, BoundMode mode,
                                     const BoundConstants& constants, double gamma_min = 8.0);

/// C1 lambda^{1-3a} gamma^2 (1-q)^2 + C2 gamma^3 lambda^{1-2a} q (1-q).
double variance_bound(const WaveParams& params, const BoundConstants& constants);

struct ClassifyOptions {
  double delta = 0.2;
  double kappa = 10.0;
  double gamma_min = 8.0;
};

enum class Equidistribution { strong, weak, none };

std::string to_string(Equidistribution c);

struct MomentReport {
  WaveParams params;
  double expectation = 0.0;
  double variance = 0.0;
  double expectation_bound_upper = 0.0;
  /// NaN when gamma < gamma_min or the lower constant is unavailable.
  double expectation_bound_lower = 0.0;
  double variance_bound = 0.0;
  double normalized_expectation = 0.0;  // E / N
  double normalized_variance = 0.0;     // Var / N^2
  double normalized_volume = 0.0;       // 2 pi m2 lambda^{-2 alpha}
  Equidistribution classification = Equidistribution::none;
  double expectation_ratio = 0.0;  // normalized_expectation / normalized_volume
  double variance_ratio = 0.0;     // normalized_variance / normalized_volume^2
  bool threshold_ok = false;
};

struct Classification {
  Equidistribution kind = Equidistribution::none;
  double expectation_ratio = 0.0;
  double variance_ratio = 0.0;
  /// Distance of the ratios from the strong / weak acceptance edges;
  /// non-negative means the condition holds.
  double strong_margin = 0.0;
  double weak_margin = 0.0;
  /// |p - 1/2| <= lambda^{-alpha/2} gamma^{-1/2}.
  bool threshold_ok = false;
};

Classification equidistribution_margin(const MomentReport& report, const WaveParams& params,
                                       const ClassifyOptions& options = {});

/// Moments, bounds and classification for coin probability p on a kernel
/// built for the same lambda, gamma, alpha.
MomentReport make_report(const PairKernel& kernel, double p, const BoundConstants& constants,
                         const ClassifyOptions& options = {});

}  // namespace rwlab
