#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace torus {

// Unnormalized 2-D DFT on an n x n row-major array (FFTW backend).
// forward:  X[k] = sum_x x[x] e^{-2 pi i k.x/n}
// backward: x[x] = sum_k X[k] e^{+2 pi i k.x/n}
// Plans are built once per instance; execution is thread-safe across
// distinct instances.
class Fft2d {
 public:
  explicit Fft2d(std::size_t n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  std::size_t size() const noexcept;
  void forward(std::vector<std::complex<double>>& data);
  void backward(std::vector<std::complex<double>>& data);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Smallest odd n >= lower whose prime factors are all in {3, 5, 7, 11, 13}.
std::size_t smooth_odd_size(std::size_t lower);

// Signed frequency of DFT index i on an n-point grid (n odd).
inline long long signed_mode(std::size_t i, std::size_t n) {
  const auto ii = static_cast<long long>(i);
  const auto nn = static_cast<long long>(n);
  return ii <= (nn - 1) / 2 ? ii : ii - nn;
}

// DFT index of signed frequency k on an n-point grid.
inline std::size_t mode_index(long long k, std::size_t n) {
  const auto nn = static_cast<long long>(n);
  long long r = k % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

}  // namespace torus
