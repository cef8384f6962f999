#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace talbot {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform periodic grid x_m = 2 pi m / M, m = 0..M-1, M a power of two.
class UniformGrid {
 public:
  explicit UniformGrid(std::size_t size);
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return kTwoPi / static_cast<double>(size_); }
  double x(std::size_t m) const noexcept { return kTwoPi * static_cast<double>(m) / static_cast<double>(size_); }
  std::vector<double> points() const;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

 private:
  std::size_t size_;
};

/// Fourier coefficients f^(k), |k| <= N, with f(x) = sum_k f^(k) e^{ikx}.
class FourierData {
 public:
  FourierData() : FourierData(0) {}
  explicit FourierData(long truncation);

  /// Coefficients of grid samples on the uniform grid of length M (even).
  /// N = M/2; the Nyquist coefficient is split evenly between +-M/2 so the
  /// grid values and Hermitian symmetry of real data are preserved.
  static FourierData from_samples(std::span<const std::complex<double>> samples);
  static FourierData from_samples(std::span<const double> samples);

  long truncation() const noexcept { return n_; }
  std::complex<double>& operator[](long k) { return c_[index(k)]; }
  const std::complex<double>& operator[](long k) const { return c_[index(k)]; }
  /// Stored as k = -N..N.
  std::span<const std::complex<double>> coefficients() const noexcept { return c_; }

  bool is_hermitian(double tol) const;
  /// ||f||^2 = integral over [0, 2pi) of |f|^2 (Plancherel).
  double norm_sq() const;
  /// <f, g> = integral of conj(f) g over [0, 2pi).
  std::complex<double> inner(const FourierData& other) const;

 private:
  std::size_t index(long k) const;
  long n_;
  std::vector<std::complex<double>> c_;
};

/// Samples of sum_k c_k e^{ikx} at the grid points, by folding k mod M and one inverse DFT.
/// Exact at the nodes for any truncation (e^{ik x_m} is M-periodic in k).
std::vector<std::complex<double>> synthesize(const FourierData& data, const UniformGrid& grid);

/// Value at an arbitrary point: (k, -k) pairs added in ascending |k| with compensated summation.
std::complex<double> evaluate_at(const FourierData& data, double x);

}  // namespace talbot
