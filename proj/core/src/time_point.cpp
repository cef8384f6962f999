#include "talbot/time_point.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "talbot/error.hpp"

namespace talbot {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kTwoPiL = 2.0L * kPiL;

std::complex<double> unit(long double angle) {
  angle = std::fmod(angle, kTwoPiL);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

int128 positive_mod(int128 a, int128 m) {
  int128 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

RationalTime::RationalTime(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(Errc::precondition, "rational time with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  std::int64_t g = std::gcd(p, q);
  if (g == 0) g = 1;
  p_ = p / g;
  q_ = q / g;
}

double RationalTime::value() const noexcept { return static_cast<double>(value_ld()); }

long double RationalTime::value_ld() const noexcept {
  return kPiL * static_cast<long double>(p_) / static_cast<long double>(q_);
}

double TimePoint::value() const noexcept { return static_cast<double>(value_ld()); }

long double TimePoint::value_ld() const noexcept {
  if (auto r = as_rational()) return r->value_ld();
  return static_cast<long double>(std::get<double>(repr_));
}

std::string TimePoint::label() const {
  if (auto r = as_rational()) return std::to_string(r->p()) + "pi_" + std::to_string(r->q());
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(repr_));
  return std::string(buf, res.ptr);
}

double Frequency::value() const noexcept {
  return (integer ? static_cast<double>(*integer) : 0.0) + real;
}

std::complex<double> rotation(int128 w, const TimePoint& t) {
  if (auto r = t.as_rational()) {
    // exp(i w pi p / q) depends only on w p mod 2q.
    const int128 period = 2 * static_cast<int128>(r->q());
    const int128 residue =
        positive_mod(positive_mod(w, period) * positive_mod(r->p(), period), period);
    return unit(kPiL * static_cast<long double>(residue) / static_cast<long double>(r->q()));
  }
  return unit(static_cast<long double>(w) * t.value_ld());
}

std::complex<double> rotation(const Frequency& w, const TimePoint& t) {
  std::complex<double> z{1.0, 0.0};
  if (w.integer) z = rotation(*w.integer, t);
  if (w.real != 0.0) z *= unit(static_cast<long double>(w.real) * t.value_ld());
  return z;
}

}  // namespace talbot
