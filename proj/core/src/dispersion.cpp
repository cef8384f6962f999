#include "talbot/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "talbot/error.hpp"

namespace talbot {

DispersionQuartet::DispersionQuartet(IntegralPolynomial phi1, IntegralPolynomial phi2,
                                     IntegralPolynomial phi3, IntegralPolynomial phi4)
    : phi{std::move(phi1), std::move(phi2), std::move(phi3), std::move(phi4)} {}

bool DispersionQuartet::has_offsets() const noexcept {
  for (double o : offsets) {
    if (o != 0.0) return true;
  }
  return false;
}

double DispersionQuartet::symbol(int j, std::int64_t k) const {
  const auto idx = static_cast<std::size_t>(j - 1);
  return static_cast<double>(phi.at(idx)(k)) + offsets.at(idx);
}

int128 DispersionQuartet::symbol_exact(int j, std::int64_t k) const {
  if (has_offsets()) throw Error(Errc::precondition, "exact symbol requested for quartet with offsets");
  return phi.at(static_cast<std::size_t>(j - 1))(k);
}

namespace {

int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::overflow, "integer overflow in Delta(k)");
  return r;
}

int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::overflow, "integer overflow in Delta(k)");
  return r;
}

int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(Errc::overflow, "integer overflow in Delta(k)");
  return r;
}

std::string mode_name(std::int64_t k) { return "mode k = " + std::to_string(k); }

}  // namespace

std::optional<int128> delta_exact(const DispersionQuartet& q, std::int64_t k) {
  if (q.has_offsets()) return std::nullopt;
  const int128 diff = checked_sub(q.phi[0](k), q.phi[3](k));
  return checked_add(checked_mul(diff, diff), checked_mul(4, checked_mul(q.phi[1](k), q.phi[2](k))));
}

double delta(const DispersionQuartet& q, std::int64_t k) {
  if (auto d = delta_exact(q, k)) return static_cast<double>(*d);
  const double diff = q.symbol(1, k) - q.symbol(4, k);
  return diff * diff + 4.0 * q.symbol(2, k) * q.symbol(3, k);
}

ExactBranches exact_branches(const DispersionQuartet& q, std::int64_t k) {
  ExactBranches b{};
  if (auto d = delta_exact(q, k)) {
    if (*d < 0) throw Error(Errc::complex_branch, "Delta < 0 at " + mode_name(k));
    if (*d == 0) throw Error(Errc::degenerate_branch, "Delta = 0 at " + mode_name(k));
    const int128 p1 = q.phi[0](k);
    const int128 p2 = q.phi[1](k);
    const int128 p4 = q.phi[3](k);
    if (p2 == 0) throw Error(Errc::weight_undefined, "phi2 = 0 at " + mode_name(k));
    const int128 trace = checked_add(p1, p4);
    const auto root = exact_sqrt(*d);
    const long double sd = root ? static_cast<long double>(*root) : std::sqrt(static_cast<long double>(*d));
    b.sqrt_delta = static_cast<double>(sd);
    if (root && (trace + *root) % 2 == 0) {
      b.omega1 = Frequency::exact(-(trace + *root) / 2);
      b.omega2 = Frequency::exact(-(trace - *root) / 2);
    } else {
      b.omega1 = Frequency::approximate(static_cast<double>(-(static_cast<long double>(trace) + sd) / 2));
      b.omega2 = Frequency::approximate(static_cast<double>(-(static_cast<long double>(trace) - sd) / 2));
    }
    const long double gap = static_cast<long double>(p4) - static_cast<long double>(p1);
    b.phi_weight = static_cast<double>((gap + sd) / (2.0L * static_cast<long double>(p2)));
    b.psi_weight = static_cast<double>((gap - sd) / (2.0L * static_cast<long double>(p2)));
    return b;
  }

  const double d = delta(q, k);
  if (d < 0) throw Error(Errc::complex_branch, "Delta < 0 at " + mode_name(k));
  if (d == 0) throw Error(Errc::degenerate_branch, "Delta = 0 at " + mode_name(k));
  const double p1 = q.symbol(1, k);
  const double p2 = q.symbol(2, k);
  const double p4 = q.symbol(4, k);
  if (p2 == 0) throw Error(Errc::weight_undefined, "phi2 = 0 at " + mode_name(k));
  const double sd = std::sqrt(d);
  b.sqrt_delta = sd;
  b.omega1 = Frequency::approximate(-(p1 + p4 + sd) / 2);
  b.omega2 = Frequency::approximate(-(p1 + p4 - sd) / 2);
  b.phi_weight = (p4 - p1 + sd) / (2 * p2);
  b.psi_weight = (p4 - p1 - sd) / (2 * p2);
  return b;
}

Branches branches(const DispersionQuartet& q, std::int64_t k) {
  const ExactBranches e = exact_branches(q, k);
  return {e.omega1.value(), e.omega2.value(), e.phi_weight, e.psi_weight};
}

std::string_view to_string(QuantizationFailure f) noexcept {
  switch (f) {
    case QuantizationFailure::none: return "none";
    case QuantizationFailure::non_integer_root: return "non_integer_root";
    case QuantizationFailure::negative_discriminant: return "negative_discriminant";
    case QuantizationFailure::phi_relation_violated: return "phi_relation_violated";
  }
  return "unknown";
}

namespace {

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_rational(int128 num, int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int128 g = gcd128(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

/// Finds r with target = r * base as a polynomial identity, if one exists.
std::optional<Rational> exact_ratio(const IntegralPolynomial& target, const IntegralPolynomial& base,
                                    int pivot) {
  const int128 b0 = base.coeff(pivot);
  const int128 t0 = target.coeff(pivot);
  const int top = std::max(target.degree(), base.degree());
  for (int i = 0; i <= top; ++i) {
    // target_i * b0 == t0 * base_i
    if (checked_mul(target.coeff(i), b0) != checked_mul(t0, base.coeff(i))) return std::nullopt;
  }
  return make_rational(t0, b0);
}

}  // namespace

QuantizationVerdict quantization_check(const IntegralPolynomial& phi1, const IntegralPolynomial& phi2,
                                       const IntegralPolynomial& phi3, const IntegralPolynomial& phi4) {
  QuantizationVerdict v;
  const IntegralPolynomial gap = phi4 - phi1;

  if (phi2.is_zero()) {
    if (!phi3.is_zero() || !gap.is_zero()) {
      v.failure_reason = QuantizationFailure::phi_relation_violated;
      return v;
    }
    // Decoupled identical components: any alpha, beta works; take zero.
    v.satisfied = true;
    v.alpha = Rational{0, 1};
    v.beta = Rational{0, 1};
    v.a1 = 0;
    v.a2 = 0;
    return v;
  }

  int pivot = 0;
  while (phi2.coeff(pivot) == 0) ++pivot;
  auto alpha = exact_ratio(gap, phi2, pivot);
  auto beta = exact_ratio(phi3, phi2, pivot);
  if (!alpha || !beta) {
    v.failure_reason = QuantizationFailure::phi_relation_violated;
    return v;
  }
  v.alpha = alpha;
  v.beta = beta;

  // sign of alpha^2 + 4 beta over the common positive denominator a_den^2 b_den
  const int128 disc_num = checked_add(checked_mul(checked_mul(alpha->num, alpha->num), beta->den),
                                      checked_mul(4, checked_mul(beta->num, checked_mul(alpha->den, alpha->den))));
  if (disc_num < 0) {
    v.failure_reason = QuantizationFailure::negative_discriminant;
    return v;
  }
  // Integer roots force alpha = a1 + a2 and beta = -a1 a2 to be integers.
  if (!alpha->is_integer() || !beta->is_integer()) {
    v.failure_reason = QuantizationFailure::non_integer_root;
    return v;
  }
  const int128 disc = checked_add(checked_mul(alpha->num, alpha->num), checked_mul(4, beta->num));
  const auto root = exact_sqrt(disc);
  if (!root || (alpha->num + *root) % 2 != 0) {
    v.failure_reason = QuantizationFailure::non_integer_root;
    return v;
  }
  v.satisfied = true;
  v.a1 = static_cast<std::int64_t>((alpha->num + *root) / 2);
  v.a2 = static_cast<std::int64_t>((alpha->num - *root) / 2);
  return v;
}

QuantizationVerdict quantization_check(const DispersionQuartet& q) {
  return quantization_check(q.phi[0], q.phi[1], q.phi[2], q.phi[3]);
}

}  // namespace talbot
