#include "torus_stri/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

#include "torus_stri/errors.hpp"

namespace torus {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft2d::Impl {
  std::size_t n = 0;
  fftw_complex* buffer = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buffer) fftw_free(buffer);
  }

  void run(fftw_plan plan, std::vector<std::complex<double>>& data) {
    if (data.size() != n * n) throw ValidationError("fft_size_mismatch", "array size does not match the plan");
    std::memcpy(buffer, data.data(), n * n * sizeof(fftw_complex));
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(data.data()), buffer, n * n * sizeof(fftw_complex));
  }
};

Fft2d::Fft2d(std::size_t n) : impl_(std::make_unique<Impl>()) {
  if (n == 0) throw ValidationError("invalid_grid", "grid size must be positive");
  impl_->n = n;
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n * n));
  if (!impl_->buffer) throw std::bad_alloc();
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_2d(ni, ni, impl_->buffer, impl_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_2d(ni, ni, impl_->buffer, impl_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->bwd) throw NumericalError("fft_plan_failed", "FFTW could not build a plan");
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

std::size_t Fft2d::size() const noexcept { return impl_->n; }
void Fft2d::forward(std::vector<std::complex<double>>& data) { impl_->run(impl_->fwd, data); }
void Fft2d::backward(std::vector<std::complex<double>>& data) { impl_->run(impl_->bwd, data); }

std::size_t smooth_odd_size(std::size_t lower) {
  std::size_t n = std::max<std::size_t>(lower, 1);
  if (n % 2 == 0) ++n;
  for (;; n += 2) {
    std::size_t r = n;
    for (std::size_t p : {3u, 5u, 7u, 11u, 13u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

}  // namespace torus
