#include "talbot/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

#include "talbot/error.hpp"

namespace talbot {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

void* fftw_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (!p) throw std::bad_alloc();
  return p;
}

void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

Fft::Fft(std::size_t n, std::size_t batch) : n_(n), batch_(batch) {
  if (n == 0 || batch == 0) throw Error(Errc::precondition, "FFT length and batch must be positive");
  ComplexBuffer scratch(n * batch);
  const int len = static_cast<int>(n);
  const int howmany = static_cast<int>(batch);
  auto plan = [&](int sign) {
    // FFTW_ESTIMATE keeps plan selection independent of timing noise.
    return fftw_plan_many_dft(1, &len, howmany, as_fftw(scratch.data()), nullptr, 1, len, as_fftw(scratch.data()),
                              nullptr, 1, len, sign, FFTW_ESTIMATE);
  };
  std::lock_guard lock(planner_mutex());
  forward_plan_ = plan(FFTW_FORWARD);
  backward_plan_ = plan(FFTW_BACKWARD);
  if (!forward_plan_ || !backward_plan_) throw Error(Errc::precondition, "FFTW planning failed");
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      batch_(other.batch_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    batch_ = other.batch_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  if (!forward_plan_ && !backward_plan_) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  forward_plan_ = backward_plan_ = nullptr;
}

void Fft::forward(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft::backward(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
}

}  // namespace talbot
