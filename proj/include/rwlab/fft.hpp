#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rwlab {

/// Real-to-half-complex DFT of fixed length n backed by FFTW. Outputs
/// X_m = sum_k x_k exp(-2 pi i k m / n) for m = 0..n/2. One instance per
/// thread; plan creation is serialized internally.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// `in` has n entries, `out` has n/2 + 1.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

 private:
  std::size_t n_;
  double* in_ = nullptr;
  void* out_ = nullptr;
  void* plan_ = nullptr;
};

}  // namespace rwlab
