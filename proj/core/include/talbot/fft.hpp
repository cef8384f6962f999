#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace talbot {

/// Allocator returning SIMD-aligned storage from fftw_malloc, so every buffer
/// hits the same codelets and transforms are bit-reproducible.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}  // NOLINT(google-explicit-constructor)

  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  return static_cast<T*>(fftw_aligned_alloc(n * sizeof(T)));
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_aligned_free(p);
}

using ComplexBuffer = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

/// One-dimensional complex DFT of fixed length, unnormalized in both directions:
///
///   forward:  X_j = sum_m x_m exp(-2 pi i j m / n)
///   backward: x_m = sum_j X_j exp(+2 pi i j m / n)
///
/// With batch > 1 the buffer holds `batch` contiguous signals of length n,
/// transformed together.
///
/// Plans are created under a process-wide lock (the FFTW planner is not
/// thread-safe); execution on distinct instances is safe concurrently.
class Fft {
 public:
  explicit Fft(std::size_t n, std::size_t batch = 1);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::size_t batch() const noexcept { return batch_; }

  /// In-place transforms; `data` must come from a ComplexBuffer of length size() * batch().
  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

 private:
  void release() noexcept;
  std::size_t n_ = 0;
  std::size_t batch_ = 1;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Signed wavenumber stored at DFT index j of a length-n transform: j for j < n/2, j - n otherwise.
inline long wavenumber(std::size_t j, std::size_t n) noexcept {
  return j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace talbot
