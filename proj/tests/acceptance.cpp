// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-rwlab-cli> <work-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rwlab/fit.hpp"
#include "rwlab/moments.hpp"
#include "rwlab/montecarlo.hpp"
#include "rwlab/oscint.hpp"
#include "rwlab/specfun.hpp"
#include "rwlab/sweep.hpp"

using namespace rwlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

const std::vector<double> kLadder{64, 128, 256, 512, 1024, 2048, 4096};

KernelCache& cache() {
  static KernelCache c;
  return c;
}

const PairKernel& kernel(double lambda, double gamma, double alpha) {
  static std::vector<std::shared_ptr<const PairKernel>> keep;
  keep.push_back(cache().get(lambda, gamma, alpha));
  return *keep.back();
}

Outcome enumeration_oracle() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> lam(2.0, 60.0), alpha(0.0, 0.95), prob(0.0, 1.0);
  double worst_e = 0.0, worst_v = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double l = lam(rng);
    const int n = 1 + static_cast<int>(rng() % 14);
    const auto k = build_kernel(build_params(l, n / l, alpha(rng), 0.5));
    const double p = prob(rng);
    const auto e = enumerate_moments(k, p);
    worst_e = std::max(worst_e, std::abs(exact_expectation(k, p) - e.expectation) / std::abs(e.expectation));
    const double v = exact_variance(k, p);
    const double rel = e.variance == 0.0 ? std::abs(v) : std::abs(v - e.variance) / e.variance;
    worst_v = std::max(worst_v, rel);
  }
  return {worst_e <= 1e-10 && worst_v <= 1e-10,
          "50 cases, max rel diff E " + g3(worst_e) + ", Var " + g3(worst_v) + " (tol 1e-10)"};
}

Outcome quadratic_form_consistency() {
  double worst_fft = 0.0, worst_grid = 0.0;
  for (double lambda : {64.0, 128.0, 256.0}) {
    for (double alpha : {0.3, 0.5, 0.7}) {
      for (double gamma : {0.25, 1.0}) {
        const auto params = build_params(lambda, gamma, alpha, 0.7);
        const auto k = build_kernel(params);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
          const auto c = sample_coefficients(params, seed);
          const double fast = mass_quadratic_form(k, c);
          worst_fft = std::max(worst_fft, std::abs(fast - mass_double_sum(k, c)) / std::abs(fast));
          if (seed == 0) {
            const double grid = grid_quadrature_mass(params, c).value;
            worst_grid = std::max(worst_grid, std::abs(fast - grid) / std::abs(fast));
          }
        }
      }
    }
  }
  return {worst_fft <= 1e-10 && worst_grid <= 1e-3,
          "N <= 256: FFT vs double sum " + g3(worst_fft) + " (tol 1e-10), vs grid " + g3(worst_grid) +
              " (tol 1e-3)"};
}

Outcome monte_carlo() {
  const auto& k = kernel(512, 8, 0.5);
  bool ok = true;
  std::string detail;
  for (double p : {0.5, 0.6, 0.9}) {
    const auto s = mc_moments(k, p, 10000, 77);
    const double zm = (s.empirical_mean - exact_expectation(k, p)) / s.std_error_mean;
    const double zv = (s.empirical_variance - exact_variance(k, p)) / s.std_error_variance;
    ok = ok && std::abs(zm) <= 4 && std::abs(zv) <= 5;
    detail += "p=" + g3(p) + ": z_mean " + fmt("%.2f", zm) + ", z_var " + fmt("%.2f", zv) + "; ";
  }
  return {ok, detail + "limits 4 and 5"};
}

std::vector<double> column(const std::function<double(double)>& f) {
  std::vector<double> out;
  for (double l : kLadder) out.push_back(f(l));
  return out;
}

Outcome fair_coin_scaling() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const auto e = column([&](double l) { return exact_expectation(kernel(l, 8, alpha), 0.5); });
    const double s = fit_exponent(kLadder, e).slope;
    ok = ok && std::abs(s - (1 - 2 * alpha)) <= 0.05;
    detail += "alpha=" + g3(alpha) + ": slope " + fmt("%.4f", s) + " vs " + g3(1 - 2 * alpha) + "; ";
  }
  return {ok, detail + "tol 0.05"};
}

Outcome biased_term_scaling() {
  bool ok = true;
  std::string detail;
  double lo = 1e300, hi = 0.0;
  for (double alpha : {0.3, 0.5, 0.7}) {
    std::vector<double> biased;
    for (double l : kLadder) {
      const auto& k = kernel(l, 16, alpha);
      const double b = exact_expectation(k, 1.0) - static_cast<double>(k.size()) * k.values[0];
      biased.push_back(b);
      const double ratio = b / (256.0 * std::pow(l, 1 - alpha));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    const bool positive = std::all_of(biased.begin(), biased.end(), [](double v) { return v > 0; });
    const double s = positive ? fit_exponent(kLadder, biased).slope : std::nan("");
    ok = ok && positive && std::abs(s - (1 - alpha)) <= 0.05;
    detail += "alpha=" + g3(alpha) + ": slope " + fmt("%.4f", s) + " vs " + g3(1 - alpha) + "; ";
  }
  ok = ok && lo >= 0.2 && hi <= 10;
  return {ok, detail + "ratio band [" + g3(lo) + ", " + g3(hi) + "] within [0.2, 10]"};
}

Outcome dyadic_lemma() {
  bool ok = true;
  std::string detail;
  for (double A : {2.0, 3.0, 4.0}) {
    double cal = 0.0, worst = 0.0;
    for (double gamma : {1.0, 2.0, 4.0, 8.0}) {
      for (double alpha : {0.3, 0.5, 0.7}) {
        for (double l : kLadder) {
          const double r = dyadic_sum_check(build_params(l, gamma, alpha, 0.5), A).bound_ratio;
          if (l == kLadder.front()) cal = std::max(cal, r);
          else worst = std::max(worst, r);
        }
      }
    }
    const double constant = 2.0 * cal;
    ok = ok && worst <= constant;
    detail += "A=" + g3(A) + ": C " + g3(constant) + ", max later ratio " + g3(worst) + "; ";
  }
  return {ok, detail + "headroom 2"};
}

Outcome decay_bound_check() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> loglam(std::log(64.0), std::log(4096.0)), alpha(0.0, 0.9), d(0.0, 2.0);
  int violations = 0;
  double tightest = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto p = build_params(std::exp(loglam(rng)), 1, alpha(rng), 0.5);
    const double sep = d(rng);
    const double v = std::abs(pair_integral(p, sep));
    for (int n : {2, 3, 4}) {
      const double b = decay_bound(p, sep, n);
      violations += v > b;
      tightest = std::max(tightest, v / b);
    }
  }
  return {violations == 0, "200 points x n in {2,3,4}: " + std::to_string(violations) +
                               " violations, max |I|/bound " + g3(tightest)};
}

Outcome stationary_phase() {
  const auto scan = scan_asymptotics(10.0, 1e4);
  std::vector<double> radii;
  const double lambda = 50.0;
  for (double w = 0.0; w <= 600.0; w += 0.01) radii.push_back(w / lambda);
  const auto env = surface_wave_envelope(lambda, radii, 5.0, 500.0);
  const double s1 = scan.residual_fit.slope, s2 = env.envelope_fit.slope;
  return {std::abs(s1 + 1.5) <= 0.1 && std::abs(s2 + 0.5) <= 0.05,
          "residual exponent " + fmt("%.4f", s1) + " (-1.5 +- 0.1), envelope exponent " + fmt("%.4f", s2) +
              " (-0.5 +- 0.05), C_check " + g3(scan.c_check)};
}

Outcome variance_bound_and_equidistribution() {
  std::vector<KernelRatios> ratios;
  for (double alpha : {0.3, 0.5}) {
    for (double l : kLadder) ratios.push_back(kernel_ratios(kernel(l, 8, alpha)));
  }
  const auto constants = calibrate_constants(ratios);
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  for (double alpha : {0.3, 0.5}) {
    std::vector<double> normalized;
    for (double l : kLadder) {
      const auto& k = kernel(l, 8, alpha);
      const double p_thr = 0.5 + std::pow(l, -alpha / 2) / std::sqrt(8.0);
      for (double p : {0.5, 0.6, 0.75, 0.9, 1.0, p_thr}) {
        const double v = exact_variance(k, p);
        const double b = variance_bound(with_probability(k.params, p), constants);
        if (v > b) ok = false;
        if (b > 0) worst = std::max(worst, v / b);
      }
      normalized.push_back(make_report(k, p_thr, constants).variance_ratio);
    }
    const double s = fit_exponent(kLadder, normalized).slope;
    ok = ok && s < 0 && std::abs(s - (alpha - 1)) <= 0.15;
    detail += "alpha=" + g3(alpha) + ": threshold variance slope " + fmt("%.3f", s) + " vs " + g3(alpha - 1) + "; ";
  }
  return {ok, detail + "max Var/bound " + g3(worst) + " (C1 " + g3(constants.C1) + ", C2 " + g3(constants.C2) + ")"};
}

Outcome threshold() {
  SweepConfig c;
  c.lambda_ladder = kLadder;
  c.gamma_values = {8.0};
  c.alpha_list = {0.5};
  c.p_mode = ProbabilityMode::threshold;
  c.threshold_c = 1.0;
  c.super_beta_over_alpha = 0.25;
  const auto r = threshold_experiment(c, &cache());
  bool ok = true;
  std::string detail;
  for (const auto& f : r.families) {
    ok = ok && f.ok;
    detail += f.name + " slope " + fmt("%.3f", f.fit.slope) + (f.ok ? " ok; " : " FAILED; ");
  }
  return {ok, detail + "(at: |s| <= 0.1, super: alpha/2 +- 0.1, p=1: none for lambda >= 256)"};
}

Outcome darboux_and_e1() {
  const double lambda = 256, alpha = 0.5;
  const double radius = 2 * std::pow(lambda, -alpha);
  const std::vector<double> gammas{0.0625, 0.125, 0.25, 0.5, 1, 2, 4, 8, 16};
  const auto d = darboux_error(lambda, alpha, std::vector<double>{radius / 4, radius / 2, radius}, gammas);
  double worst_slope = -1e300;
  for (const auto& s : d.series) worst_slope = std::max(worst_slope, s.fit.slope);
  const bool darboux_ok = worst_slope <= -0.9;

  const std::vector<double> lambdas{64, 128, 256, 512};
  const auto scan = e1_lambda_scan(lambdas, 8, alpha);
  const double target = (1 - alpha) / 2;
  const bool e1_ok = scan.all_resolved && std::abs(scan.fit.slope - target) <= 0.1;
  const auto gscan = e1_gamma_scan(64, std::vector<double>{8, 16, 32}, alpha);

  std::string detail = "Darboux gamma-exponent (worst of 3 radii) " + fmt("%.2f", worst_slope) + " (<= -0.9); ";
  detail += "E1 lambda-exponent " + fmt("%.3f", scan.fit.slope) + " vs " + g3(target) + " +- 0.1, ";
  detail += scan.all_resolved ? "norms resolved; " : "norms at roundoff floor (max norm/floor " +
                                                         g3([&] {
                                                           double m = 0;
                                                           for (const auto& n : scan.norms) m = std::max(m, n.norm / n.roundoff_floor);
                                                           return m;
                                                         }()) + "); ";
  detail += "E1 gamma-exponent (informational) " + fmt("%.3f", gscan.fit.slope) +
            (gscan.all_resolved ? "" : " [unresolved]");
  return {darboux_ok && e1_ok, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  fs::create_directories(work);
  {
    std::ofstream cfg(work / "det.json");
    cfg << R"({"lambda_ladder":[64,128,256,512],"gamma":{"mode":"fixed","values":[4,8]},)"
        << R"("alpha_list":[0.3,0.5],"p_rule":{"mode":"fixed","values":[0.5,0.75,1.0]},)"
        << R"("mc_samples":500,"seed":31337,"grid_check":{"enabled":true}})";
  }
  {
    std::ofstream cfg(work / "thr.json");
    cfg << R"({"lambda_ladder":[64,128,256,512],"alpha_list":[0.5],"p_rule":{"mode":"threshold","c":1}})";
  }
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string det = "\"" + (work / "det.json").string() + "\"";
  const std::string thr = "\"" + (work / "thr.json").string() + "\"";
  bool ran = run("sweep " + det + " -o \"" + (work / "s1").string() + "\"") &&
             run("sweep " + det + " -o \"" + (work / "s2").string() + "\"") &&
             run("mc --config " + det + " --samples 300 --seed 5 -o \"" + (work / "m1").string() + "\"") &&
             run("mc --config " + det + " --samples 300 --seed 5 -o \"" + (work / "m2").string() + "\"") &&
             run("threshold " + thr + " -o \"" + (work / "t1").string() + "\"") &&
             run("threshold " + thr + " -o \"" + (work / "t2").string() + "\"");
  if (!ran) return {false, "CLI invocation failed"};
  int same = 0;
  for (const auto& [a, b] : {std::pair{"s1", "s2"}, {"m1", "m2"}, {"t1", "t2"}}) {
    const std::string x = slurp(work / (std::string(a) + ".csv"));
    same += !x.empty() && x == slurp(work / (std::string(b) + ".csv"));
  }
  return {same == 3, std::to_string(same) + "/3 repeated CLI runs (sweep, mc, threshold) byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <rwlab-cli> <work-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "enumeration oracle", enumeration_oracle},
      {2, "quadratic-form consistency", quadratic_form_consistency},
      {3, "Monte Carlo consistency", monte_carlo},
      {4, "fair-coin scaling", fair_coin_scaling},
      {5, "biased-term scaling", biased_term_scaling},
      {6, "dyadic sums", dyadic_lemma},
      {7, "decay bound", decay_bound_check},
      {8, "stationary phase", stationary_phase},
      {9, "variance bound and equidistribution", variance_bound_and_equidistribution},
      {10, "threshold experiment", threshold},
      {11, "Darboux and E1 probes", darboux_and_e1},
      {12, "determinism", [&] { return determinism(cli, work); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("criterion %2d %-36s %s  [%.1fs] %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
