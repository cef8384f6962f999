#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace talbot {

/// How a grid node that falls exactly on a jump is sampled.
enum class StepSampling {
  midpoint,     ///< (left + right) / 2, the limit of the Fourier partial sums
  left_closed,  ///< value of the interval starting at the node
};

/// Unit step: 0 on [0, pi), 1 on (pi, 2pi).
std::vector<std::complex<double>> sample_sigma(std::size_t m, StepSampling s = StepSampling::midpoint);
/// -1 on [0, pi), 1 on [pi, 2pi).
std::vector<std::complex<double>> sample_sigma1(std::size_t m, StepSampling s = StepSampling::midpoint);
/// sigma1 / 10.
std::vector<std::complex<double>> sample_sigma2(std::size_t m, StepSampling s = StepSampling::midpoint);
/// x / 10 for x in [-pi, pi), extended 2pi-periodically onto [0, 2pi).
std::vector<std::complex<double>> sample_linear_ramp(std::size_t m, StepSampling s = StepSampling::midpoint);

}  // namespace talbot
