// rwlab command-line front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwlab/fit.hpp"
#include "rwlab/oscint.hpp"
#include "rwlab/specfun.hpp"
#include "rwlab/sweep.hpp"

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

int run_fit(const std::string& path, const std::string& x_col, const std::string& y_col) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("column '" + name + "' not found in " + path);
  };
  const std::size_t xi = column(x_col), yi = column(y_col);
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() <= std::max(xi, yi)) throw std::runtime_error("short row in " + path);
    xs.push_back(std::stod(f[xi]));
    ys.push_back(std::stod(f[yi]));
  }
  const rwlab::FitResult r = rwlab::fit_exponent(xs, ys);
  std::cout << "slope,intercept,r_squared,points\n"
            << number(r.slope) << ',' << number(r.intercept) << ',' << number(r.r_squared) << ','
            << r.point_count << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random plane waves with unfair-coin coefficients: moments, bounds, oracles"};
  app.require_subcommand(1);

  std::string sweep_path, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Exact moments and bounds over a parameter sweep");
  sweep->add_option("config", sweep_path, "JSON config")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", sweep_out, "Output stem (overrides config)");

  std::string thr_path, thr_out;
  auto* threshold = app.add_subcommand("threshold", "At- and super-threshold scaling experiment");
  threshold->add_option("config", thr_path, "JSON config")->required()->check(CLI::ExistingFile);
  threshold->add_option("-o,--output", thr_out, "Output stem (overrides config)");

  double k_lambda = 0, k_gamma = 0, k_alpha = 0;
  std::string k_out;
  auto* kernel = app.add_subcommand("kernel", "Pair-integral table and circulant spectrum as CSV");
  kernel->add_option("--lambda", k_lambda, "Frequency")->required();
  kernel->add_option("--gamma", k_gamma, "Direction density")->required();
  kernel->add_option("--alpha", k_alpha, "Ball-shrink exponent")->required();
  kernel->add_option("-o,--output", k_out, "CSV file (default stdout)");

  double w_min = 10, w_max = 1e4, w_step = 0.05;
  std::string a_out;
  auto* asym = app.add_subcommand("asymptotics", "Stationary-phase residual of 2 pi J0");
  asym->add_option("--w-min", w_min, "Smallest argument")->required();
  asym->add_option("--w-max", w_max, "Largest argument")->required();
  asym->add_option("--step", w_step, "Sampling step")->capture_default_str();
  asym->add_option("-o,--output", a_out, "Write the sampled residuals to this CSV");

  std::string mc_path, mc_out;
  std::size_t mc_samples = 0;
  std::uint64_t mc_seed = 0;
  auto* mc = app.add_subcommand("mc", "Sweep with Monte Carlo columns");
  mc->add_option("--config", mc_path, "JSON config")->required()->check(CLI::ExistingFile);
  mc->add_option("--samples", mc_samples, "Samples per point (>= 100)")->required();
  mc->add_option("--seed", mc_seed, "Generator seed")->required();
  mc->add_option("-o,--output", mc_out, "Output stem (overrides config)");

  std::string fit_path, x_col, y_col;
  auto* fit = app.add_subcommand("fit", "Log-log least-squares exponent between two CSV columns");
  fit->add_option("csv", fit_path, "CSV file")->required()->check(CLI::ExistingFile);
  fit->add_option("--x-col", x_col, "Abscissa column")->required();
  fit->add_option("--y-col", y_col, "Ordinate column")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      const auto cfg = rwlab::load_config(sweep_path);
      const auto result = rwlab::run_sweep(cfg);
      const std::string stem = sweep_out.empty() ? cfg.output : sweep_out;
      rwlab::write_sweep_outputs(result, stem);
      std::size_t failures = 0;
      for (const auto& r : result.rows) failures += !r.error.empty();
      std::cout << result.rows.size() << " rows written to " << stem << ".csv";
      if (failures) std::cout << " (" << failures << " with errors)";
      std::cout << '\n';
    } else if (*threshold) {
      const auto cfg = rwlab::load_config(thr_path);
      const auto report = rwlab::threshold_experiment(cfg);
      const std::string stem = thr_out.empty() ? cfg.output : thr_out;
      rwlab::write_threshold_outputs(report, stem);
      std::cout << "family,alpha,gamma,beta,expected_slope,slope,ok\n";
      for (const auto& f : report.families) {
        std::cout << f.name << ',' << number(f.alpha) << ',' << number(f.gamma) << ','
                  << number(f.beta) << ',' << number(f.expected_slope) << ','
                  << number(f.fit.slope) << ',' << (f.ok ? "true" : "false") << '\n';
      }
    } else if (*kernel) {
      const auto k = rwlab::build_kernel(rwlab::build_params(k_lambda, k_gamma, k_alpha, 0.5));
      if (k_out.empty()) {
        rwlab::write_kernel_csv(std::cout, k);
      } else {
        std::ofstream out(k_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + k_out);
        rwlab::write_kernel_csv(out, k);
      }
    } else if (*asym) {
      const auto scan = rwlab::scan_asymptotics(w_min, w_max, w_step);
      if (!a_out.empty()) {
        std::ofstream out(a_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + a_out);
        out << "w,exact,leading,residual\n";
        for (const auto& s : scan.samples) {
          out << number(s.w) << ',' << number(s.exact_value) << ',' << number(s.leading_term)
              << ',' << number(s.residual) << '\n';
        }
      }
      std::cout << "residual_exponent,r_squared,maxima,c_check\n"
                << number(scan.residual_fit.slope) << ',' << number(scan.residual_fit.r_squared)
                << ',' << scan.residual_fit.point_count << ',' << number(scan.c_check) << '\n';
    } else if (*mc) {
      auto cfg = rwlab::load_config(mc_path);
      cfg.mc_samples = mc_samples;
      cfg.seed = mc_seed;
      const auto result = rwlab::run_sweep(cfg);
      const std::string stem = mc_out.empty() ? cfg.output : mc_out;
      rwlab::write_sweep_outputs(result, stem);
      std::cout << result.rows.size() << " rows written to " << stem << ".csv\n";
    } else if (*fit) {
      return run_fit(fit_path, x_col, y_col);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
