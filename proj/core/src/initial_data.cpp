#include "talbot/initial_data.hpp"

#include "talbot/error.hpp"
#include "talbot/fourier_data.hpp"

namespace talbot {

namespace {

/// Two-level step on [0, pi) / [pi, 2pi) with jumps at 0 and pi.
std::vector<std::complex<double>> two_level(std::size_t m, double low, double high, StepSampling s) {
  if (m < 2 || m % 2 != 0) throw Error(Errc::precondition, "step sampling needs an even grid size");
  std::vector<std::complex<double>> out(m);
  const std::size_t half = m / 2;
  for (std::size_t i = 0; i < m; ++i) out[i] = i < half ? low : high;
  if (s == StepSampling::midpoint) {
    out[0] = 0.5 * (low + high);
    out[half] = 0.5 * (low + high);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> sample_sigma(std::size_t m, StepSampling s) { return two_level(m, 0.0, 1.0, s); }

std::vector<std::complex<double>> sample_sigma1(std::size_t m, StepSampling s) { return two_level(m, -1.0, 1.0, s); }

std::vector<std::complex<double>> sample_sigma2(std::size_t m, StepSampling s) { return two_level(m, -0.1, 0.1, s); }

std::vector<std::complex<double>> sample_linear_ramp(std::size_t m, StepSampling s) {
  if (m < 2 || m % 2 != 0) throw Error(Errc::precondition, "ramp sampling needs an even grid size");
  std::vector<std::complex<double>> out(m);
  const UniformGrid grid(m);
  const std::size_t half = m / 2;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.x(i);
    out[i] = (i < half ? x : x - kTwoPi) / 10.0;
  }
  // The periodic extension jumps from pi/10 to -pi/10 at x = pi.
  out[half] = s == StepSampling::midpoint ? 0.0 : -kPi / 10.0;
  return out;
}

}  // namespace talbot
