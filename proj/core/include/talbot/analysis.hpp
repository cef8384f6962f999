#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "talbot/fourier_data.hpp"
#include "talbot/integral_polynomial.hpp"
#include "talbot/spectral_solver.hpp"
#include "talbot/time_point.hpp"

namespace talbot {

struct ScaleCount {
  std::size_t window;  ///< samples per column
  double epsilon;      ///< column width in x
  double count;        ///< N(epsilon)
};

struct ScaleRange {
  double epsilon_min;
  double epsilon_max;
};

struct DimensionEstimate {
  double slope = 0.0;
  ScaleRange scale_range{0.0, 0.0};
  double r_squared = 0.0;
  /// Every dyadic scale inside the requested range, finest first, including dropped ones.
  std::vector<ScaleCount> counts;
  std::size_t dropped_fine_scales = 0;
  /// False when the slope falls outside [0.9, 2.1].
  bool valid = false;
};

/// Box-counting dimension of the graph of periodic samples on [0, 2pi).
///
/// For each dyadic column width eps = w h (h = 2pi/n) the graph is covered
/// column by column, N(eps) = sum max(1, ceil(osc / eps)), where a column spans
/// samples i w .. (i+1) w inclusive. The slope of log N against log(1/eps) is
/// fitted by least squares; if r^2 < 0.98 the two finest scales are dropped
/// once. Default range: [4h, 2pi/8]. The sample count must be a power of two.
DimensionEstimate minkowski_dimension(std::span<const double> samples,
                                      std::optional<ScaleRange> range = std::nullopt);

struct WeylRow {
  long n;
  double sup;
};

struct WeylGrowth {
  std::vector<WeylRow> rows;
  double gamma = 0.0;  ///< slope of log sup against log N; NaN with fewer than two rows
  long n_min = 0;
  long n_max = 0;
  std::size_t x_resolution = 0;
};

/// sup_x |sum_{k=1}^{N} exp(i (P(k) t + k x))| on an x grid of `x_resolution` points
/// (0 picks the smallest power of two >= 8 N_max).
WeylGrowth weyl_sum_growth(const IntegralPolynomial& p, const TimePoint& t, std::span<const long> n_list,
                           std::size_t x_resolution = 0);

struct QuantizationReport {
  std::vector<double> jump_locations;     ///< sorted, in [0, 2pi)
  std::vector<std::size_t> jump_indices;  ///< first-difference index m (jump between m and m+1)
  std::size_t plateau_count = 0;
  double plateau_flatness = 0.0;
  double dynamic_range = 0.0;
  double score = 1.0;
  /// Smallest q <= q_max whose lattice pi j / q holds every jump within the Gibbs window.
  std::optional<long> q_hypothesis;
};

/// Piecewise-constancy test on periodic samples.
///
/// Jump candidates are first differences above 8 x the median absolute
/// difference; candidates closer than 2 x gibbs_window cells form one jump.
/// Plateaus are the runs between jumps minus gibbs_window cells on each side;
/// flatness is the largest plateau standard deviation and
/// score = exp(-flatness / (max - min)).
QuantizationReport detect_quantization(std::span<const double> samples, long q_max, std::size_t gibbs_window);

/// Distance from x to the nearest point of pi Z / q, measured on the circle.
double lattice_distance(double x, long q);

/// Decay order -s of bin-median |c_k| ~ |k|^s over dyadic bins in [k_min, k_max] (both signs).
/// Coefficients below 1e-13 of the largest magnitude in range are ignored.
struct ModeRange {
  long k_min;
  long k_max;
};
double fourier_tail_exponent(const FourierData& c, ModeRange range);

struct SmoothingReport {
  double sup_residual_u = 0.0;
  double sup_residual_v = 0.0;
  double l2_residual_u = 0.0;
  double l2_residual_v = 0.0;
  double tail_u = 0.0;
  double tail_v = 0.0;
  double tail_residual_u = 0.0;
  double tail_residual_v = 0.0;
};

/// Compares a run snapshot with the explicit linear part at the same time.
/// f_hat and g_hat must be the coefficients of the run's initial samples (truncation M/2).
SmoothingReport smoothing_diagnostic(const ManakovState& run, const FourierData& f_hat, const FourierData& g_hat,
                                     ModeRange range);

/// Least-squares line y = a + b x; returns (b, r^2).
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace talbot
