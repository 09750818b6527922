#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rwlab/specfun.hpp"

using namespace rwlab;

namespace {
constexpr double kPi = std::numbers::pi;

struct Reference {
  double z, j0;
};
// 30-digit values of J0.
const Reference kJ0[] = {
    {0.5, 0.9384698072408129042284},      {5.0, -0.1775967713143383043474},
    {11.5, -0.06765394811166522843243},   {12.5, 0.1468840547004211023064},
    {16.9, -0.1787833878912191022877},    {17.5, -0.1031103982286859221733},
    {50.0, 0.05581232766925181500475},    {123.456, -0.07103006241837072686967},
    {973.2714, 0.004149025944559395850095}, {9999.5, -0.004478727403128425047331},
};
}  // namespace

TEST_CASE("J0 against reference values") {
  CHECK(bessel_j0(0.0) == 1.0);
  for (const auto& r : kJ0) {
    INFO("z = " << r.z);
    CHECK(std::abs(bessel_j0(r.z) - r.j0) <= 1e-12);
  }
  CHECK(std::abs(bessel_j0(2.404825557695773)) <= 1e-10);
  CHECK_THROWS(bessel_j0(-1.0));
}

TEST_CASE("first zero located by bisection on the series") {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0_series(mid) > 0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(2.4048255576957727686).epsilon(1e-14));
}

TEST_CASE("large-argument branch tracks the asymptotic form") {
  const double z = 50.0;
  const double amplitude = std::sqrt(2.0 / (kPi * z));
  const double chi = z - kPi / 4;
  const double leading = amplitude * std::cos(chi);
  // The gap to the leading term is the first correction, amplitude sin(chi) / (8 z),
  // about 2.2e-3 of the amplitude at z = 50.
  CHECK(std::abs(bessel_j0(z) - leading) <= amplitude / (8 * z));
  CHECK(std::abs(bessel_j0(z) - leading - amplitude * std::sin(chi) / (8 * z)) <= 1e-4 * amplitude);
}

TEST_CASE("series and asymptotic branches agree on the handoff window") {
  double worst = 0.0;
  for (double z = 11.0; z <= 13.0; z += 1e-3) {
    worst = std::max(worst, std::abs(bessel_j0_series(z) - bessel_j0_hankel(z)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("J0 is bounded by one") {
  for (double z = 0.0; z <= 2000.0; z += 0.0173) CHECK(std::abs(bessel_j0(z)) <= 1.0);
}

TEST_CASE("angular integral matches direct quadrature") {
  CHECK(angular_integral(0.0) == doctest::Approx(2 * kPi).epsilon(1e-15));
  for (double w : {0.0, 0.3, 1.0, 7.7, 10.0, 31.4, 99.0, 150.5, 200.0}) {
    INFO("w = " << w);
    CHECK(std::abs(angular_integral(w) - angular_integral_direct(w)) <= 1e-8);
  }
  for (double w = 0.0; w <= 1.0; w += 0.01) CHECK(std::abs(angular_integral(w)) <= 2 * kPi);
}

TEST_CASE("stationary phase residual") {
  // 2 pi J0(w) minus the leading term, 30-digit references.
  CHECK(asymptotic_check(10.0).residual == doctest::Approx(0.0051844379839198053608).epsilon(1e-9));
  CHECK(asymptotic_check(100.0).residual == doctest::Approx(-0.00060733408572956988881).epsilon(1e-8));
  CHECK(asymptotic_check(1000.0).residual == doctest::Approx(3.6953546301505552639e-6).epsilon(1e-6));

  const auto scan = scan_asymptotics(10.0, 1e4);
  CHECK(std::abs(scan.residual_fit.slope + 1.5) <= 0.1);
  CHECK(scan.residual_fit.point_count > 1000);
  for (const auto& s : scan.samples) CHECK(std::abs(s.residual) <= scan.c_check * std::pow(s.w, -1.5) * (1 + 1e-12));
}

TEST_CASE("surface wave envelope") {
  const double lambda = 50.0;
  std::vector<double> radii;
  for (double w = 0.0; w <= 600.0; w += 0.01) radii.push_back(w / lambda);
  const auto env = surface_wave_envelope(lambda, radii);
  CHECK(env.samples[0].magnitude == doctest::Approx(2 * kPi * std::sqrt(lambda)).epsilon(1e-15));
  CHECK(std::abs(env.envelope_fit.slope + 0.5) <= 0.05);

  // Doubling lambda at fixed lambda |x| multiplies |v| by sqrt 2.
  std::vector<double> r1, r2;
  for (double w = 0.5; w <= 60.0; w += 0.25) {
    r1.push_back(w / 20.0);
    r2.push_back(w / 40.0);
  }
  const auto e1 = surface_wave_envelope(20.0, r1, 1.0, 60.0);
  const auto e2 = surface_wave_envelope(40.0, r2, 1.0, 60.0);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(std::abs(e2.samples[i].magnitude / e1.samples[i].magnitude - std::sqrt(2.0)) <= 1e-9);
  }
}
