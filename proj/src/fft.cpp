#include "rwlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>
#include <stdexcept>

namespace rwlab {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("RealFft: length must be positive");
  in_ = fftw_alloc_real(n);
  auto* out = fftw_alloc_complex(n / 2 + 1);
  out_ = out;
  if (in_ == nullptr || out == nullptr) {
    fftw_free(in_);
    fftw_free(out);
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out, FFTW_ESTIMATE);
  if (plan_ == nullptr) {
    fftw_free(in_);
    fftw_free(out);
    throw std::runtime_error("RealFft: planning failed");
  }
}

RealFft::~RealFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != bins()) {
    throw std::invalid_argument("RealFft: buffer size mismatch");
  }
  std::copy(in.begin(), in.end(), in_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const auto* res = static_cast<const fftw_complex*>(out_);
  for (std::size_t m = 0; m < bins(); ++m) out[m] = {res[m][0], res[m][1]};
}

}  // namespace rwlab
