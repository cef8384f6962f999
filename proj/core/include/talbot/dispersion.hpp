#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "talbot/integral_polynomial.hpp"
#include "talbot/time_point.hpp"

namespace talbot {

/// Fourier symbols of the linear two-component system
///
///   u_t = L1[u] + L2[v],   v_t = L3[u] + L4[v],   L^_j(k) = i phi_j(k).
///
/// Each phi_j is an integral polynomial plus an optional real constant. The
/// constants carry the data-dependent shifts of the Manakov linearization;
/// integer-only routines ignore quartets that use them.
struct DispersionQuartet {
  std::array<IntegralPolynomial, 4> phi;
  std::array<double, 4> offsets{0.0, 0.0, 0.0, 0.0};

  DispersionQuartet() = default;
  DispersionQuartet(IntegralPolynomial phi1, IntegralPolynomial phi2, IntegralPolynomial phi3,
                    IntegralPolynomial phi4);

  bool has_offsets() const noexcept;
  /// phi_j(k) for j in 1..4.
  double symbol(int j, std::int64_t k) const;
  /// phi_j(k) exactly; only valid without offsets.
  int128 symbol_exact(int j, std::int64_t k) const;
};

/// Delta(k) = (phi1 - phi4)^2 + 4 phi2 phi3, exact when no offsets are present.
std::optional<int128> delta_exact(const DispersionQuartet& q, std::int64_t k);
double delta(const DispersionQuartet& q, std::int64_t k);

struct Branches {
  double omega1;
  double omega2;
  double phi_weight;
  double psi_weight;
};

/// Frequencies and eigenvector weights of the mode k.
/// Throws Errc::complex_branch (Delta < 0), Errc::degenerate_branch
/// (Delta = 0) or Errc::weight_undefined (phi2(k) = 0).
Branches branches(const DispersionQuartet& q, std::int64_t k);

/// Branch frequencies with exact integer parts where Delta(k) is a perfect square.
struct ExactBranches {
  Frequency omega1;
  Frequency omega2;
  double phi_weight;
  double psi_weight;
  double sqrt_delta;
};
ExactBranches exact_branches(const DispersionQuartet& q, std::int64_t k);

struct Rational {
  int128 num = 0;
  int128 den = 1;
  bool is_integer() const noexcept { return den == 1; }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class QuantizationFailure { none, non_integer_root, negative_discriminant, phi_relation_violated };
std::string_view to_string(QuantizationFailure f) noexcept;

struct QuantizationVerdict {
  bool satisfied = false;
  std::optional<std::int64_t> a1;
  std::optional<std::int64_t> a2;
  /// alpha, beta recovered from phi4 = phi1 + alpha phi2, phi3 = beta phi2.
  std::optional<Rational> alpha;
  std::optional<Rational> beta;
  QuantizationFailure failure_reason = QuantizationFailure::none;
};

/// Integer-arithmetic check of the dispersive quantization conditions.
QuantizationVerdict quantization_check(const IntegralPolynomial& phi1, const IntegralPolynomial& phi2,
                                       const IntegralPolynomial& phi3, const IntegralPolynomial& phi4);
QuantizationVerdict quantization_check(const DispersionQuartet& q);

}  // namespace talbot
