#include "talbot/linear_solver.hpp"

#include <cmath>
#include <string>

#include "talbot/error.hpp"

namespace talbot {

namespace {

using cd = std::complex<double>;

Frequency negate(const Frequency& w) {
  Frequency out;
  if (w.integer) out.integer = -*w.integer;
  out.real = -w.real;
  return out;
}

/// exp(-i w t)
cd backward_rotation(const Frequency& w, const TimePoint& t) { return rotation(negate(w), t); }

bool all_symbols_vanish(const DispersionQuartet& q, long k) {
  for (int j = 1; j <= 4; ++j) {
    if (q.symbol(j, k) != 0.0) return false;
  }
  return true;
}

void require_same_truncation(const FourierData& f, const FourierData& g) {
  if (f.truncation() != g.truncation()) {
    throw Error(Errc::precondition, "f and g truncations differ (" + std::to_string(f.truncation()) + " vs " +
                                        std::to_string(g.truncation()) + ")");
  }
}

}  // namespace

cd riemann_coefficient(long k) {
  if (k == 0) return {0.5, 0.0};
  if (k % 2 == 0) return {0.0, 0.0};
  return {0.0, 1.0 / (kPi * static_cast<double>(k))};
}

FourierData riemann_data(long truncation) {
  FourierData c(truncation);
  for (long k = -truncation; k <= truncation; ++k) c[k] = riemann_coefficient(k);
  return c;
}

LinearSolutionSample sample_on_grid(const ModalSolution& modes, const UniformGrid& grid, const TimePoint& t) {
  return LinearSolutionSample{grid, grid.points(), synthesize(modes.u, grid), synthesize(modes.v, grid),
                              modes.u.truncation(), t};
}

ModalSolution riemann_case1_modes(const DispersionQuartet& q, const TimePoint& t, long truncation) {
  ModalSolution out{FourierData(truncation), FourierData(truncation)};
  for (long k = -truncation; k <= truncation; ++k) {
    const cd c = riemann_coefficient(k);
    if (c == cd{}) continue;
    if (all_symbols_vanish(q, k)) {
      out.u[k] = c;
      out.v[k] = c;
      continue;
    }
    const ExactBranches b = exact_branches(q, k);
    const double p2 = q.symbol(2, k);
    const cd a1 = c * (p2 * (1.0 - b.psi_weight) / b.sqrt_delta);
    const cd a2 = c * (p2 * (b.phi_weight - 1.0) / b.sqrt_delta);
    const cd e1 = backward_rotation(b.omega1, t);
    const cd e2 = backward_rotation(b.omega2, t);
    out.u[k] = a1 * e1 + a2 * e2;
    out.v[k] = b.phi_weight * a1 * e1 + b.psi_weight * a2 * e2;
  }
  return out;
}

LinearSolutionSample solve_riemann_case1(const DispersionQuartet& q, const TimePoint& t, const UniformGrid& grid,
                                         long truncation) {
  return sample_on_grid(riemann_case1_modes(q, t, truncation), grid, t);
}

ModalSolution riemann_case2_modes(const DispersionQuartet& q, const TimePoint& t, long truncation) {
  FourierData u(truncation);
  for (long k = -truncation; k <= truncation; ++k) {
    Frequency minus_omega;  // phi1 + phi2
    if (!q.has_offsets()) {
      if (*delta_exact(q, k) != 0) {
        throw Error(Errc::precondition, "Delta(" + std::to_string(k) + ") != 0 in the degenerate case");
      }
      const int128 s12 = q.symbol_exact(1, k) + q.symbol_exact(2, k);
      if (s12 != q.symbol_exact(3, k) + q.symbol_exact(4, k)) {
        throw Error(Errc::precondition,
                    "phi1 + phi2 != phi3 + phi4 at k = " + std::to_string(k) + "; u = v is not a solution");
      }
      minus_omega = Frequency::exact(s12);
    } else {
      const double s12 = q.symbol(1, k) + q.symbol(2, k);
      const double scale = 1.0 + std::abs(q.symbol(1, k)) + std::abs(q.symbol(4, k));
      if (std::abs(delta(q, k)) > 1e-12 * scale * scale ||
          std::abs(s12 - q.symbol(3, k) - q.symbol(4, k)) > 1e-12 * scale) {
        throw Error(Errc::precondition, "degenerate-case conditions fail at k = " + std::to_string(k));
      }
      minus_omega = Frequency::approximate(s12);
    }
    const cd c = riemann_coefficient(k);
    if (c != cd{}) u[k] = c * rotation(minus_omega, t);
  }
  return {u, u};
}

LinearSolutionSample solve_riemann_case2(const DispersionQuartet& q, const TimePoint& t, const UniformGrid& grid,
                                         long truncation) {
  return sample_on_grid(riemann_case2_modes(q, t, truncation), grid, t);
}

ModalSolution linear_bv_modes(const DispersionQuartet& q, const FourierData& f_hat, const FourierData& g_hat,
                              const TimePoint& t) {
  require_same_truncation(f_hat, g_hat);
  if (q.has_offsets()) throw Error(Errc::precondition, "general BV evaluation needs integral symbols");
  const QuantizationVerdict verdict = quantization_check(q);
  if (!verdict.satisfied) {
    throw Error(Errc::precondition,
                "quartet fails the quantization conditions (" + std::string(to_string(verdict.failure_reason)) + ")");
  }
  const std::int64_t a1 = *verdict.a1;
  const std::int64_t a2 = *verdict.a2;
  if (a1 == a2) throw Error(Errc::unsupported_degenerate, "a1 = a2 = " + std::to_string(a1));

  const IntegralPolynomial p1 = q.phi[0] + a1 * q.phi[1];
  const IntegralPolynomial p2 = q.phi[0] + a2 * q.phi[1];
  const double w1 = static_cast<double>(a1);
  const double w2 = static_cast<double>(a2);
  const double inv = 1.0 / (w1 - w2);

  const long n = f_hat.truncation();
  ModalSolution out{FourierData(n), FourierData(n)};
  for (long k = -n; k <= n; ++k) {
    const cd e1 = rotation(p1(k), t);
    const cd e2 = rotation(p2(k), t);
    const cd f = f_hat[k];
    const cd g = g_hat[k];
    out.u[k] = ((w1 * e2 - w2 * e1) * f + (e1 - e2) * g) * inv;
    out.v[k] = (w1 * w2 * (e2 - e1) * f + (w1 * e1 - w2 * e2) * g) * inv;
  }
  return out;
}

LinearSolutionSample solve_linear_bv(const DispersionQuartet& q, const FourierData& f_hat,
                                     const FourierData& g_hat, const TimePoint& t, const UniformGrid& grid) {
  return sample_on_grid(linear_bv_modes(q, f_hat, g_hat, t), grid, t);
}

FourierData free_evolution(const IntegralPolynomial& symbol, double offset, const FourierData& f_hat,
                           const TimePoint& t) {
  const long n = f_hat.truncation();
  FourierData out(n);
  for (long k = -n; k <= n; ++k) {
    Frequency w = Frequency::exact(symbol(k));
    w.real = offset;
    out[k] = rotation(w, t) * f_hat[k];
  }
  return out;
}

ManakovConstants manakov_constants(const FourierData& f_hat, const FourierData& g_hat) {
  ManakovConstants c;
  c.norm_f_sq = f_hat.norm_sq();
  c.norm_g_sq = g_hat.norm_sq();
  c.inner_fg = f_hat.inner(g_hat);
  c.phi1_shift = c.norm_f_sq / kPi + c.norm_g_sq / kTwoPi;
  c.phi3_shift = c.norm_g_sq / kPi + c.norm_f_sq / kTwoPi;
  c.phi2 = std::conj(c.inner_fg) / kTwoPi;
  c.phi4 = c.inner_fg / kTwoPi;
  c.shift = 0.75 * (c.norm_f_sq + c.norm_g_sq) / kPi;

  const double gap = c.phi1_shift - c.phi3_shift;
  double d = gap * gap + 4.0 * (c.phi2 * c.phi4).real();
  if (d < 0.0) {
    if (d < -1e-14) throw Error(Errc::complex_branch, "Manakov Delta = " + std::to_string(d) + " < 0");
    d = 0.0;
    c.delta_clamped = true;
  }
  c.delta = d;
  c.sqrt_delta = std::sqrt(d);

  const double scale = 1.0 + c.norm_f_sq + c.norm_g_sq;
  if (c.sqrt_delta <= 1e-12 * scale) {
    // Decoupled and equal diagonal: both branches coincide, keep everything on the plus branch.
    c.c_f_plus = 1.0;
    c.d_g_plus = 1.0;
    return c;
  }
  const double sd = c.sqrt_delta;
  c.c_f_plus = (0.5 * gap + 0.5 * sd) / sd;
  c.c_f_minus = (-0.5 * gap + 0.5 * sd) / sd;
  c.c_g_plus = c.phi2 / sd;
  c.c_g_minus = -c.phi2 / sd;
  c.d_g_plus = (-0.5 * gap + 0.5 * sd) / sd;
  c.d_g_minus = (0.5 * gap + 0.5 * sd) / sd;
  c.d_f_plus = c.phi4 / sd;
  c.d_f_minus = -c.phi4 / sd;
  return c;
}

ModalSolution manakov_linear_modes(const FourierData& f_hat, const FourierData& g_hat, const TimePoint& t) {
  require_same_truncation(f_hat, g_hat);
  const ManakovConstants c = manakov_constants(f_hat, g_hat);
  const long n = f_hat.truncation();
  ModalSolution out{FourierData(n), FourierData(n)};
  for (long k = -n; k <= n; ++k) {
    const int128 k2 = -static_cast<int128>(k) * k;
    const cd ep = rotation(Frequency{k2, c.shift + 0.5 * c.sqrt_delta}, t);
    const cd em = rotation(Frequency{k2, c.shift - 0.5 * c.sqrt_delta}, t);
    const cd f = f_hat[k];
    const cd g = g_hat[k];
    out.u[k] = (c.c_f_plus * f + c.c_g_plus * g) * ep + (c.c_f_minus * f + c.c_g_minus * g) * em;
    out.v[k] = (c.d_f_plus * f + c.d_g_plus * g) * ep + (c.d_f_minus * f + c.d_g_minus * g) * em;
  }
  return out;
}

LinearSolutionSample manakov_linear_part(const FourierData& f_hat, const FourierData& g_hat, const TimePoint& t,
                                         const UniformGrid& grid) {
  return sample_on_grid(manakov_linear_modes(f_hat, g_hat, t), grid, t);
}

}  // namespace talbot
