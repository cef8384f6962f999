#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "talbot/csv.hpp"
#include "talbot/scenario.hpp"
#include "talbot/spectral_solver.hpp"

namespace talbot {

std::string tool_version();
std::string sha256_hex(std::string_view data);

struct OutputFile {
  std::string path;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string scenario_name;
  std::string scenario_hash;  ///< SHA-256 of the canonical scenario document
  std::string tool_version;
  std::string determinism;
  std::string status = "ok";  ///< ok or diverged
  std::string message;
  std::optional<double> diverged_at;
  std::vector<OutputFile> files;

  bool diverged() const noexcept { return status == "diverged"; }
  std::string to_json() const;
};

/// Scalar results of one run, taken at its last time.
struct RunSummary {
  std::optional<double> score;
  std::optional<std::size_t> jumps;
  std::optional<double> dimension_re;
  std::optional<double> r_squared;
  std::optional<DriftReport> drift;
  std::optional<double> gamma;
  std::optional<double> sup;
};

/// In-memory result; `files` is empty unless outputs were requested.
struct RunResult {
  RunSummary summary;
  std::vector<std::pair<std::string, std::string>> files;
};

/// Executes a scenario. With `emit_files` the CSV/JSON outputs are rendered into the result.
RunResult execute_scenario(const Scenario& s, bool emit_files);

/// Executes and writes outputs plus manifest.json into out_dir. Divergence is reported
/// in the manifest (status "diverged") after writing the outputs produced so far.
RunManifest run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

struct SweepRow {
  std::string value;
  std::string status;  ///< ok, diverged or error
  RunSummary summary;
  std::optional<double> drift_ratio;
  std::string message;
};

/// Runs the template once per value on a bounded worker pool; rows keep input order.
/// `values` are JSON texts (numbers, or {"p","q"} objects for times).
std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, std::span<const std::string> values,
                            std::size_t workers);
CsvTable sweep_table(std::span<const SweepRow> rows);
/// Sweep described by the scenario's "sweep" block; writes sweep_<axis>.csv and manifest.json.
RunManifest run_sweep(const Scenario& s, const std::filesystem::path& out_dir, std::size_t workers);

/// TALBOT_WORKERS if set to a positive integer, else 1.
std::size_t default_workers();

/// Label used in file names: `<p>pi_<q>` or the shortest decimal.
std::string time_label(const TimePoint& t);

}  // namespace talbot
