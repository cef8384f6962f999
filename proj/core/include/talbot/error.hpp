#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace talbot {

enum class Errc {
  overflow,
  complex_branch,
  degenerate_branch,
  weight_undefined,
  precondition,
  unsupported_degenerate,
  diverged,
  insufficient_scales,
  undefined_decay,
  grid_mismatch,
  schema,
  io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when a time stepper produces a non-finite value.
class DivergedError : public Error {
 public:
  DivergedError(double time, int stage, const std::string& what);
  double time() const noexcept { return time_; }
  /// RK stage (1..4) that went non-finite; 0 when detected outside a stage.
  int stage() const noexcept { return stage_; }

 private:
  double time_;
  int stage_;
};

/// Scenario validation failure. `field` is a dot path, `line` is 1-based or 0 when unknown.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, std::size_t line, const std::string& what);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

}  // namespace talbot
