#pragma once

#include <span>
#include <vector>

#include "rwlab/fit.hpp"

namespace rwlab {

/// Arguments above this use the Hankel expansion, below it the power series.
inline constexpr double kBesselHandoff = 17.0;

/// J0(z) for z >= 0, absolute error below 1e-12 for z <= 1e4.
double bessel_j0(double z);

/// Ascending power series, summed in extended precision.
double bessel_j0_series(double z);

/// Hankel asymptotic expansion truncated at its smallest term.
double bessel_j0_hankel(double z);

/// int_{-pi}^{pi} exp(i w cos t) dt = 2 pi J0(w).
double angular_integral(double w);

/// Same integral by adaptive quadrature of cos(w cos t); independent of
/// bessel_j0 and used to cross-check it.
double angular_integral_direct(double w);

/// Leading stationary-phase term 2 sqrt(2 pi) w^{-1/2} cos(w - pi/4).
double stationary_phase_leading(double w);

struct AsymptoticCheck {
  double w = 0.0;
  double exact_value = 0.0;
  double leading_term = 0.0;
  double residual = 0.0;
};

AsymptoticCheck asymptotic_check(double w);

/// Residual of the leading term sampled on a fine grid of [w_min, w_max].
/// The decay exponent is fitted over the local maxima of |residual| (the
/// residual itself oscillates through zero). c_check is the smallest C with
/// |residual| <= C w^{-3/2} over the scanned samples.
struct AsymptoticScan {
  std::vector<AsymptoticCheck> samples;
  FitResult residual_fit;
  double c_check = 0.0;
};

AsymptoticScan scan_asymptotics(double w_min, double w_max,
                                double step = 0.05);

struct EnvelopeSample {
  double radius = 0.0;
  double magnitude = 0.0;
};

/// |v(x)| = lambda^{1/2} |2 pi J0(lambda |x|)| on the given radii, and the
/// power law fitted to its local maxima with lambda |x| in [fit_w_min, fit_w_max].
struct SurfaceEnvelope {
  std::vector<EnvelopeSample> samples;
  FitResult envelope_fit;
};

SurfaceEnvelope surface_wave_envelope(double lambda,
                                      std::span<const double> radii,
                                      double fit_w_min = 5.0,
                                      double fit_w_max = 500.0);

}  // namespace rwlab
