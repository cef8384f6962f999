#include "talbot/error.hpp"

#include <utility>

namespace talbot {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::overflow: return "overflow";
    case Errc::complex_branch: return "complex_branch";
    case Errc::degenerate_branch: return "degenerate_branch";
    case Errc::weight_undefined: return "weight_undefined";
    case Errc::precondition: return "precondition";
    case Errc::unsupported_degenerate: return "unsupported_degenerate";
    case Errc::diverged: return "diverged";
    case Errc::insufficient_scales: return "insufficient_scales";
    case Errc::undefined_decay: return "undefined_decay";
    case Errc::grid_mismatch: return "grid_mismatch";
    case Errc::schema: return "schema";
    case Errc::io: return "io";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

DivergedError::DivergedError(double time, int stage, const std::string& what)
    : Error(Errc::diverged, what), time_(time), stage_(stage) {}

SchemaError::SchemaError(std::string field, std::size_t line, const std::string& what)
    : Error(Errc::schema, what), field_(std::move(field)), line_(line) {}

}  // namespace talbot
