#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace talbot {

using int128 = __int128;

std::string to_string(int128 value);

/// Exact square root of a nonnegative value, if it is a perfect square.
std::optional<int128> exact_sqrt(int128 value);

/// Floor of the square root of a nonnegative value.
int128 isqrt(int128 value);

/// Polynomial c0 + c1 k + ... + cm k^m with integer coefficients.
///
/// Evaluation at integer k is carried out in 128-bit arithmetic and throws
/// Errc::overflow instead of wrapping. Degree is capped at kMaxDegree.
class IntegralPolynomial {
 public:
  static constexpr int kMaxDegree = 8;

  IntegralPolynomial() = default;
  explicit IntegralPolynomial(std::vector<std::int64_t> coeffs);
  IntegralPolynomial(std::initializer_list<std::int64_t> coeffs);

  static IntegralPolynomial monomial(std::int64_t coeff, int power);

  /// Index of the last nonzero coefficient; 0 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// True when only odd powers carry nonzero coefficients.
  bool is_odd() const noexcept;
  std::int64_t coeff(int power) const noexcept;
  /// Trimmed coefficient list (no trailing zeros; empty for zero).
  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }

  int128 operator()(std::int64_t k) const;
  int128 evaluate(std::int64_t k) const { return (*this)(k); }

  friend IntegralPolynomial operator+(const IntegralPolynomial& a, const IntegralPolynomial& b);
  friend IntegralPolynomial operator-(const IntegralPolynomial& a, const IntegralPolynomial& b);
  friend IntegralPolynomial operator*(std::int64_t s, const IntegralPolynomial& p);
  friend bool operator==(const IntegralPolynomial& a, const IntegralPolynomial& b) = default;

  std::string to_string() const;

 private:
  void trim();
  std::vector<std::int64_t> coeffs_;
};

}  // namespace talbot
