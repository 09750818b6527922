#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rwlab/model.hpp"

namespace rwlab {

/// Circulant table of pair integrals I_k for directions k steps apart, and
/// the eigenvalues of the circulant matrix (I_{jl}).
struct PairKernel {
  WaveParams params;
  std::vector<double> values;    // I_k, k = 0..N-1
  std::vector<double> chords;    // d_k
  std::vector<double> spectrum;  // mu_m, m = 0..N-1
  /// Largest quadrature error estimate over all entries.
  double max_abs_error = 0.0;

  std::size_t size() const { return values.size(); }
  /// R = sum_{k != 0} I_k.
  double offdiag_row_sum() const;
};

struct PairIntegral {
  double value = 0.0;
  double abs_error = 0.0;
};

/// 2 pi int_0^{2 lambda^-alpha} a^2(lambda^alpha r) J0(lambda d r) r dr on
/// fixed Gauss-Kronrod panels sized by the oscillation. Throws NumericalError
/// if the error estimate exceeds 1e-8 of the zero-separation value.
PairIntegral pair_integral_detailed(const WaveParams& params, double d);
double pair_integral(const WaveParams& params, double d);

struct OracleResult {
  double real = 0.0;
  double imag = 0.0;
  /// Same sum at half the spacing; NaN unless requested.
  double refined_real = 0.0;
  double spacing = 0.0;
  std::int64_t nodes_per_axis = 0;
};

/// Trapezoid rule for a^2(lambda^alpha |x|) exp(i lambda d x_1) on a square
/// grid symmetric about the origin with at least 12 nodes per wavelength.
/// Throws InfeasibleGrid above `max_nodes` total nodes or if lambda^{1-alpha} > 2000.
OracleResult pair_integral_2d_oracle(const WaveParams& params, double d, bool refine = false,
                                     double max_nodes = 1e8);

struct DecayBoundParams {
  int order = 0;
  double constant = 0.0;
};

/// c = 4 pi max_{m <= 8} 2^m max(1, D_m), D_m the directional derivative
/// bounds of a^2. The same c serves every order, so the bound is monotone in n.
DecayBoundParams decay_bound_params(int n);

/// c lambda^{-2 alpha} (1 + d / lambda^{alpha - 1})^{-n}.
double decay_bound(const WaveParams& params, double d, int n);

struct DyadicCheck {
  double direct_sum = 0.0;
  double bound_ratio = 0.0;  // direct_sum / (gamma lambda^alpha)
};

/// sum_{k=1}^{N-1} (1 + d_k / lambda^{alpha-1})^{-A}. Rejects A < 2.
DyadicCheck dyadic_sum_check(const WaveParams& params, double A);

/// Entries for k = 0..N/2 are integrated and mirrored. N <= 10^6.
PairKernel build_kernel(const WaveParams& params);

/// Circulant eigenvalues from the first row (real part of its DFT).
std::vector<double> circulant_spectrum(const std::vector<double>& row);

/// Columns k, d_k, I_k, mu_k at 17 significant digits.
void write_kernel_csv(std::ostream& out, const PairKernel& kernel);

}  // namespace rwlab
