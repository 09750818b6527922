#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rwlab/moments.hpp"
#include "rwlab/montecarlo.hpp"

namespace rwlab {

enum class GammaMode { fixed, log_lambda };
enum class ProbabilityMode { fixed, threshold };

struct SweepConfig {
  std::vector<double> lambda_ladder{64, 128, 256, 512, 1024, 2048, 4096};
  GammaMode gamma_mode = GammaMode::fixed;
  std::vector<double> gamma_values{8.0};
  std::vector<double> alpha_list{0.5};
  ProbabilityMode p_mode = ProbabilityMode::fixed;
  std::vector<double> p_values{0.5};
  /// Threshold family p = 0.5 + c lambda^{-beta} gamma^{-1/2}; beta defaults to alpha / 2.
  double threshold_c = 1.0;
  std::optional<double> threshold_beta;
  /// Super-threshold exponent used by threshold_experiment, as a multiple of alpha.
  double super_beta_over_alpha = 0.25;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
  std::string output = "sweep";
  ClassifyOptions tolerances;
  double calibration_headroom = 2.0;
  bool grid_check = false;
  double grid_max_lambda = 256.0;

  /// Gammas used at this lambda: the fixed list, or {ceil(ln lambda)}.
  std::vector<double> gammas_for(double lambda) const;
  /// Probabilities used at one (lambda, gamma, alpha) point.
  std::vector<double> probabilities_for(double lambda, double gamma, double alpha) const;
};

/// Parses the closed JSON schema; unknown keys and invalid values throw
/// std::invalid_argument.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);

/// Thread-safe memo of kernels keyed by (lambda, gamma, alpha). Kernels do
/// not depend on p, so every probability at a point shares one.
class KernelCache {
 public:
  std::shared_ptr<const PairKernel> get(double lambda, double gamma, double alpha);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::tuple<double, double, double>, std::shared_ptr<const PairKernel>> kernels_;
};

struct SweepRow {
  std::string family;
  double lambda = 0.0, gamma = 0.0, alpha = 0.0, p = 0.0;
  std::optional<MomentReport> report;
  std::optional<McSummary> mc;
  double grid_rel_diff = std::nan("");
  std::string error;
};

struct SweepResult {
  SweepConfig config;
  BoundConstants constants;
  std::vector<KernelRatios> ratios;
  std::vector<SweepRow> rows;
};

/// One row per (alpha, gamma, lambda, p) in that nesting order. Failures are
/// recorded in the row's error field and the run continues.
SweepResult run_sweep(const SweepConfig& config, KernelCache* cache = nullptr);

struct ThresholdFamily {
  std::string name;  // at_threshold, super_threshold, deterministic
  double alpha = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  /// Expected lambda-exponent of E_norm / vol_norm.
  double expected_slope = 0.0;
  FitResult fit;
  bool ok = false;
  std::vector<SweepRow> rows;
};

struct ThresholdReport {
  SweepConfig config;
  BoundConstants constants;
  std::vector<ThresholdFamily> families;
};

/// For every alpha and gamma: the at-threshold family (beta = alpha/2, flat
/// within 0.1), the super-threshold family (slope alpha - 2 beta within 0.1)
/// and p = 1 (classified none for every lambda >= 256).
ThresholdReport threshold_experiment(const SweepConfig& config, KernelCache* cache = nullptr);

/// <stem>.csv, <stem>.json and <stem>.meta.json.
void write_sweep_outputs(const SweepResult& result, const std::string& stem);
void write_threshold_outputs(const ThresholdReport& report, const std::string& stem);

/// The sweep table as CSV text (what write_sweep_outputs puts in <stem>.csv).
std::string sweep_csv(const SweepResult& result);

}  // namespace rwlab
