#include "talbot/integral_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "talbot/error.hpp"

namespace talbot {

std::string to_string(int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work with the unsigned magnitude so the minimum value is handled.
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                   : static_cast<unsigned __int128>(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

int128 isqrt(int128 value) {
  if (value < 0) throw Error(Errc::precondition, "isqrt of negative value");
  if (value < 2) return value;
  // Newton iteration from an overestimate obtained in floating point.
  int128 x = static_cast<int128>(std::sqrt(static_cast<long double>(value))) + 2;
  while (true) {
    int128 y = (x + value / x) / 2;
    if (y >= x) break;
    x = y;
  }
  while (x * x > value) --x;
  while ((x + 1) * (x + 1) <= value) ++x;
  return x;
}

std::optional<int128> exact_sqrt(int128 value) {
  if (value < 0) return std::nullopt;
  int128 r = isqrt(value);
  if (r * r == value) return r;
  return std::nullopt;
}

IntegralPolynomial::IntegralPolynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

IntegralPolynomial::IntegralPolynomial(std::initializer_list<std::int64_t> coeffs)
    : coeffs_(coeffs) {
  trim();
}

IntegralPolynomial IntegralPolynomial::monomial(std::int64_t coeff, int power) {
  if (power < 0) throw Error(Errc::precondition, "negative monomial power");
  std::vector<std::int64_t> c(static_cast<std::size_t>(power) + 1, 0);
  c.back() = coeff;
  return IntegralPolynomial(std::move(c));
}

void IntegralPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (degree() > kMaxDegree) {
    throw Error(Errc::overflow, "integral polynomial degree " + std::to_string(degree()) +
                                    " exceeds supported maximum " + std::to_string(kMaxDegree));
  }
}

int IntegralPolynomial::degree() const noexcept {
  return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

bool IntegralPolynomial::is_odd() const noexcept {
  for (std::size_t i = 0; i < coeffs_.size(); i += 2) {
    if (coeffs_[i] != 0) return false;
  }
  return true;
}

std::int64_t IntegralPolynomial::coeff(int power) const noexcept {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(power)];
}

int128 IntegralPolynomial::operator()(std::int64_t k) const {
  int128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    int128 next;
    if (__builtin_mul_overflow(acc, static_cast<int128>(k), &next) ||
        __builtin_add_overflow(next, static_cast<int128>(*it), &next)) {
      throw Error(Errc::overflow, "integer overflow evaluating " + to_string() + " at k = " +
                                      std::to_string(k));
    }
    acc = next;
  }
  return acc;
}

namespace {

std::vector<std::int64_t> combine(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b, int sign) {
  std::vector<std::int64_t> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::int64_t x = i < a.size() ? a[i] : 0;
    std::int64_t y = i < b.size() ? b[i] : 0;
    std::int64_t r;
    bool bad = sign > 0 ? __builtin_add_overflow(x, y, &r) : __builtin_sub_overflow(x, y, &r);
    if (bad) throw Error(Errc::overflow, "coefficient overflow in polynomial arithmetic");
    out[i] = r;
  }
  return out;
}

}  // namespace

IntegralPolynomial operator+(const IntegralPolynomial& a, const IntegralPolynomial& b) {
  return IntegralPolynomial(combine(a.coeffs_, b.coeffs_, +1));
}

IntegralPolynomial operator-(const IntegralPolynomial& a, const IntegralPolynomial& b) {
  return IntegralPolynomial(combine(a.coeffs_, b.coeffs_, -1));
}

IntegralPolynomial operator*(std::int64_t s, const IntegralPolynomial& p) {
  std::vector<std::int64_t> out(p.coeffs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (__builtin_mul_overflow(s, p.coeffs_[i], &out[i])) {
      throw Error(Errc::overflow, "coefficient overflow in polynomial scaling");
    }
  }
  return IntegralPolynomial(std::move(out));
}

std::string IntegralPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    std::int64_t c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    if (mag != 1 || i == 0) s += std::to_string(mag);
    if (i >= 1) s += "k";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace talbot
