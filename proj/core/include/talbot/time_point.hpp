#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "talbot/integral_polynomial.hpp"

namespace talbot {

/// Exact time p*pi/q with gcd(p, q) = 1 and q >= 1.
class RationalTime {
 public:
  RationalTime(std::int64_t p, std::int64_t q);

  std::int64_t p() const noexcept { return p_; }
  std::int64_t q() const noexcept { return q_; }
  double value() const noexcept;
  long double value_ld() const noexcept;

  friend bool operator==(const RationalTime&, const RationalTime&) = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

/// A model time that is either an exact rational multiple of pi or a plain real.
class TimePoint {
 public:
  TimePoint(double t) : repr_(t) {}  // NOLINT(google-explicit-constructor)
  TimePoint(RationalTime t) : repr_(t) {}  // NOLINT(google-explicit-constructor)

  static TimePoint rational(std::int64_t p, std::int64_t q) { return RationalTime(p, q); }

  bool is_rational() const noexcept { return std::holds_alternative<RationalTime>(repr_); }
  const RationalTime* as_rational() const noexcept { return std::get_if<RationalTime>(&repr_); }
  double value() const noexcept;
  long double value_ld() const noexcept;

  /// `<p>pi_<q>` for rational times, shortest round-trip decimal otherwise.
  std::string label() const;

 private:
  std::variant<RationalTime, double> repr_;
};

/// Angular frequency split into an exact integer part and a real remainder.
///
/// Phases of the integer part at rational times are reduced modulo 2q in
/// integer arithmetic, so revival phases stay exact at any mode number.
struct Frequency {
  std::optional<int128> integer;
  double real = 0.0;

  static Frequency exact(int128 w) { return Frequency{w, 0.0}; }
  static Frequency approximate(double w) { return Frequency{std::nullopt, w}; }

  double value() const noexcept;
};

/// exp(i * w * t), using exact reduction where possible.
std::complex<double> rotation(const Frequency& w, const TimePoint& t);
std::complex<double> rotation(int128 w, const TimePoint& t);

}  // namespace talbot
