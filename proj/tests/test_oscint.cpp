#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rwlab/errors.hpp"
#include "rwlab/oscint.hpp"

using namespace rwlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("pair integral against high-precision radial quadrature") {
  const auto p = build_params(64, 8, 0.5, 0.5);
  struct Ref {
    double d, value;
  };
  // 2 pi lambda^{-2 alpha} int_0^2 a^2(t) J0(lambda^{1-alpha} d t) t dt at 30 digits.
  const Ref refs[] = {{0.0, 0.097881938081509102171},
                      {0.125, 0.074739409170769691114},
                      {0.5, -0.0098769618739958700115},
                      {1.0, -0.001926634769747985547},
                      {2.0, 0.00012737983015615073382}};
  const double i0 = refs[0].value;
  for (const auto& r : refs) {
    INFO("d = " << r.d);
    CHECK(std::abs(pair_integral(p, r.d) - r.value) <= 1e-12 * i0);
  }
  const auto q = build_params(100, 1, 0.3, 0.5);
  CHECK(std::abs(pair_integral(q, 0.05) - 0.25522208540422169341) <= 1e-12);
  CHECK(std::abs(pair_integral(q, 0.3) + 0.0041860878265264765361) <= 1e-12);
  CHECK_THROWS_AS(pair_integral(p, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(pair_integral(p, -0.1), std::invalid_argument);
}

TEST_CASE("zero separation gives the cutoff mass") {
  for (double alpha : {0.0, 0.3, 0.7}) {
    const auto p = build_params(300, 2, alpha, 0.5);
    CHECK(pair_integral(p, 0.0) == doctest::Approx(cutoff_mass(p)).epsilon(1e-10));
  }
}

TEST_CASE("2-D grid oracle agrees with the radial reduction") {
  struct Case {
    double lambda, alpha, d;
  };
  for (const Case c : {Case{64, 0.5, 0.0}, Case{64, 0.5, 0.3}, Case{64, 0.5, 1.7}, Case{100, 0.3, 0.05},
                       Case{256, 0.5, 0.02}, Case{256, 0.7, 1.0}, Case{40, 0.0, 0.2}}) {
    INFO("lambda = " << c.lambda << " alpha = " << c.alpha << " d = " << c.d);
    const auto p = build_params(c.lambda, 4, c.alpha, 0.5);
    const double i0 = cutoff_mass(p);
    const auto o = pair_integral_2d_oracle(p, c.d, true);
    CHECK(std::abs(o.real - pair_integral(p, c.d)) <= 1e-6 * i0);
    CHECK(std::abs(o.imag) <= 1e-8 * i0);
    CHECK(std::abs(o.refined_real - o.real) <= 1e-5 * i0);
    if (c.d == 0.0) CHECK(o.real == doctest::Approx(i0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(pair_integral_2d_oracle(build_params(5e6, 1, 0.0, 0.5), 0.1), InfeasibleGrid);
  CHECK_THROWS_AS(pair_integral_2d_oracle(build_params(1500, 1, 0.0, 0.5), 0.1), InfeasibleGrid);
}

TEST_CASE("decay bound") {
  const auto p = build_params(256, 8, 0.5, 0.5);
  const double c = decay_bound_params(3).constant;
  CHECK(decay_bound(p, 0.0, 3) == doctest::Approx(c * std::pow(256.0, -1.0)).epsilon(1e-15));
  const double scale = std::pow(256.0, -0.5);
  for (double d = 64 * scale; d <= 2.0; d += 0.01) {
    CHECK(std::abs(pair_integral(p, d)) <= decay_bound(p, d, 4));
  }
  for (double d = 1.5 * scale; d < 2.0; d *= 1.3) {
    for (int n = 0; n < 8; ++n) {
      CHECK(decay_bound(p, d * 1.1, n + 1) < decay_bound(p, d, n + 1));
      CHECK(decay_bound(p, d, n + 1) < decay_bound(p, d, n));
    }
  }
  CHECK_THROWS_AS(decay_bound(p, 0.1, -1), std::invalid_argument);
}

TEST_CASE("pair integrals never exceed the decay bound") {
  for (double lambda : {64.0, 300.0, 2000.0}) {
    for (double alpha : {0.2, 0.5, 0.8}) {
      const auto p = build_params(lambda, 1, alpha, 0.5);
      for (double d = 0.0; d <= 2.0; d += 0.0137) {
        const double v = std::abs(pair_integral(p, d));
        for (int n = 0; n <= 4; ++n) CHECK(v <= decay_bound(p, d, n));
      }
    }
  }
}

TEST_CASE("dyadic sums") {
  const auto p = build_params(4, 1, 0.0, 0.5);  // N = 4, scale lambda^{-1} = 1/4
  for (double A : {2.0, 3.0, 4.0}) {
    const double expected = 2 * std::pow(1 + 4 * std::sqrt(2.0), -A) + std::pow(9.0, -A);
    const auto r = dyadic_sum_check(p, A);
    CHECK(r.direct_sum == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.bound_ratio == doctest::Approx(expected / 1.0).epsilon(1e-14));
  }
  const auto q = build_params(1024, 4, 0.5, 0.5);
  CHECK(dyadic_sum_check(q, 4).direct_sum <= dyadic_sum_check(q, 2).direct_sum);
  CHECK_THROWS_AS(dyadic_sum_check(q, 1.5), std::invalid_argument);
}

TEST_CASE("kernel structure and spectrum") {
  for (double gamma : {0.5, 2.0, 8.0}) {
    const auto p = build_params(128, gamma, 0.5, 0.5);
    const auto k = build_kernel(p);
    const std::size_t n = k.size();
    REQUIRE(n == static_cast<std::size_t>(p.n_dirs));
    CHECK(k.values[0] == doctest::Approx(cutoff_mass(p)).epsilon(1e-10));
    double trace = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      CHECK(k.values[m] == k.values[(n - m) % n]);
      CHECK(std::abs(k.values[m]) <= k.values[0]);
      CHECK(k.spectrum[m] >= -1e-9 * k.values[0]);
      trace += k.spectrum[m];
    }
    CHECK(trace == doctest::Approx(n * k.values[0]).epsilon(1e-8));
  }
}

TEST_CASE("small kernels match a dense eigensolver") {
  for (double gamma : {0.02, 0.04, 0.06, 0.08}) {
    const auto p = build_params(100, gamma, 0.3, 0.5);
    const auto k = build_kernel(p);
    const auto n = static_cast<Eigen::Index>(k.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) m(j, l) = k.values[(l - j + n) % n];
    }
    Eigen::VectorXd dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    std::vector<double> fast = k.spectrum;
    std::sort(fast.begin(), fast.end());
    for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(dense(i) - fast[i]) <= 1e-8 * k.values[0]);
  }
}

TEST_CASE("off-diagonal row sum sits in the expected band for dense direction sets") {
  for (double lambda : {64.0, 256.0}) {
    for (double alpha : {0.3, 0.5, 0.7}) {
      const auto p = build_params(lambda, 8, alpha, 0.5);
      const auto k = build_kernel(p);
      const double ratio = static_cast<double>(k.size()) * k.offdiag_row_sum() /
                           (64.0 * std::pow(lambda, 1.0 - alpha));
      CHECK(ratio >= 0.2);
      CHECK(ratio <= 10.0);
    }
  }
}

TEST_CASE("pair integral is Lipschitz in the separation") {
  const auto p = build_params(200, 1, 0.4, 0.5);
  // |dI/dd| <= lambda int a^2(lambda^alpha |x|) |x| dx = 2 pi lambda^{1-3 alpha} int a^2 t^2 dt <= 2 pi lambda^{1-3 alpha} 8/3
  const double lip = 2 * kPi * std::pow(200.0, 1 - 3 * 0.4) * 8.0 / 3.0;
  const double h = 1e-3;
  double previous = pair_integral(p, 0.0);
  for (double d = h; d <= 2.0; d += h) {
    const double v = pair_integral(p, d);
    CHECK(std::abs(v - previous) <= lip * h);
    previous = v;
  }
}

TEST_CASE("kernel CSV") {
  const auto k = build_kernel(build_params(10, 0.4, 0.5, 0.5));
  std::ostringstream out;
  write_kernel_csv(out, k);
  const std::string s = out.str();
  CHECK(s.rfind("k,d_k,I_k,mu_k\n0,0.0000000000000000e+00,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}
