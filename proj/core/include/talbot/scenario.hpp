#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talbot/analysis.hpp"
#include "talbot/dispersion.hpp"
#include "talbot/fourier_data.hpp"
#include "talbot/initial_data.hpp"
#include "talbot/spectral_solver.hpp"
#include "talbot/time_point.hpp"

namespace talbot {

enum class ScenarioKind { linear_riemann, linear_bv, manakov, weyl_study, dimension_study };
std::string_view to_string(ScenarioKind k) noexcept;

struct InitialDataSpec {
  enum class Source { named, coefficients, samples, plane_wave };
  Source source = Source::named;
  /// sigma, sigma1, sigma2 or linear_ramp
  std::string name = "sigma1";
  StepSampling sampling = StepSampling::midpoint;
  std::vector<std::pair<long, std::complex<double>>> coefficients;
  std::vector<std::complex<double>> samples;
  long wavenumber = 1;
  std::complex<double> amplitude{1.0, 0.0};
  double scale = 1.0;
};

/// Values on the M-point grid.
std::vector<std::complex<double>> grid_samples(const InitialDataSpec& spec, std::size_t m);
/// Coefficients up to |k| <= truncation; sample-based data yields truncation M/2 of its own length.
FourierData fourier_coefficients(const InitialDataSpec& spec, long truncation);

enum class Observable { re, im, abs };
std::string_view to_string(Observable o) noexcept;
double observe(std::complex<double> z, Observable o) noexcept;

struct QuantizationRequest {
  long q_max = 0;
  std::size_t gibbs_window = 4;
  Observable observable = Observable::re;
};

struct AnalysisSpec {
  std::vector<Observable> observables{Observable::re, Observable::im, Observable::abs};
  std::optional<QuantizationRequest> quantization;
  bool dimension = false;
  std::optional<ScaleRange> dimension_range;
  std::size_t conservation_stride = 0;
  std::optional<ModeRange> smoothing;
};

enum class SweepAxis { time, truncation, dt, grid_size };
std::string_view to_string(SweepAxis a) noexcept;

struct SweepSpec {
  SweepAxis axis = SweepAxis::time;
  /// Raw JSON text of each value, so rational times survive unchanged.
  std::vector<std::string> values;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::manakov;
  DispersionQuartet quartet;
  IntegralPolynomial polynomial;
  InitialDataSpec f;
  InitialDataSpec g;
  std::vector<TimePoint> times;
  long truncation = 4096;
  std::size_t grid_size = 4096;
  SolverConfig solver;
  std::vector<long> n_list;
  std::size_t x_resolution = 0;
  AnalysisSpec analysis;
  std::optional<SweepSpec> sweep;
  /// Effective document after overrides, serialized canonically (sorted keys).
  std::string canonical_json;
};

/// Parses and validates. Errors are SchemaError with the dot path and a 1-based line when it can be located.
Scenario parse_scenario(std::string_view text, std::span<const std::string> overrides = {});
Scenario load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Bundled scenario directory (TALBOT_SCENARIO_DIR env var, else the build-time default).
std::filesystem::path scenario_directory();

}  // namespace talbot
