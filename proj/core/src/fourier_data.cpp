#include "talbot/fourier_data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "talbot/error.hpp"
#include "talbot/fft.hpp"

namespace talbot {

UniformGrid::UniformGrid(std::size_t size) : size_(size) {
  if (!is_power_of_two(size) || size < 2) {
    throw Error(Errc::precondition, "grid size must be a power of two >= 2, got " + std::to_string(size));
  }
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> x(size_);
  for (std::size_t m = 0; m < size_; ++m) x[m] = this->x(m);
  return x;
}

FourierData::FourierData(long truncation) : n_(truncation) {
  if (truncation < 0) throw Error(Errc::precondition, "negative truncation order");
  c_.assign(static_cast<std::size_t>(2 * truncation + 1), {0.0, 0.0});
}

std::size_t FourierData::index(long k) const {
  if (k < -n_ || k > n_) {
    throw Error(Errc::precondition, "mode " + std::to_string(k) + " outside truncation " + std::to_string(n_));
  }
  return static_cast<std::size_t>(k + n_);
}

FourierData FourierData::from_samples(std::span<const std::complex<double>> samples) {
  const std::size_t m = samples.size();
  if (m < 2 || m % 2 != 0) throw Error(Errc::precondition, "sample count must be even and >= 2");
  Fft fft(m);
  ComplexBuffer buf(samples.begin(), samples.end());
  fft.forward(buf.data());
  const long half = static_cast<long>(m / 2);
  FourierData out(half);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const long k = wavenumber(j, m);
    if (k == -half) {
      out[-half] = 0.5 * scale * buf[j];
      out[half] = 0.5 * scale * buf[j];
    } else {
      out[k] = scale * buf[j];
    }
  }
  return out;
}

FourierData FourierData::from_samples(std::span<const double> samples) {
  std::vector<std::complex<double>> z(samples.begin(), samples.end());
  return from_samples(std::span<const std::complex<double>>(z));
}

bool FourierData::is_hermitian(double tol) const {
  for (long k = 0; k <= n_; ++k) {
    if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol) return false;
  }
  return true;
}

double FourierData::norm_sq() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return kTwoPi * s;
}

std::complex<double> FourierData::inner(const FourierData& other) const {
  std::complex<double> s{0.0, 0.0};
  const long n = std::min(n_, other.n_);
  for (long k = -n; k <= n; ++k) s += std::conj((*this)[k]) * other[k];
  return kTwoPi * s;
}

std::vector<std::complex<double>> synthesize(const FourierData& data, const UniformGrid& grid) {
  const std::size_t m = grid.size();
  const long mm = static_cast<long>(m);
  ComplexBuffer buf(m, {0.0, 0.0});
  const long n = data.truncation();
  // Ascending |k| so the folding order does not depend on the truncation.
  buf[0] += data[0];
  for (long k = 1; k <= n; ++k) {
    buf[static_cast<std::size_t>(k % mm)] += data[k];
    buf[static_cast<std::size_t>(((-k) % mm + mm) % mm)] += data[-k];
  }
  Fft fft(m);
  fft.backward(buf.data());
  return {buf.begin(), buf.end()};
}

namespace {

/// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
    else carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

std::complex<double> evaluate_at(const FourierData& data, double x) {
  CompensatedSum re;
  CompensatedSum im;
  re.add(data[0].real());
  im.add(data[0].imag());
  for (long k = 1; k <= data.truncation(); ++k) {
    const double kx = static_cast<double>(k) * x;
    const std::complex<double> e{std::cos(kx), std::sin(kx)};
    const std::complex<double> pair = data[k] * e + data[-k] * std::conj(e);
    re.add(pair.real());
    im.add(pair.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace talbot
