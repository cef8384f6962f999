#pragma once

#include <complex>
#include <vector>

#include "talbot/dispersion.hpp"
#include "talbot/fourier_data.hpp"
#include "talbot/time_point.hpp"

namespace talbot {

/// Fourier coefficient of the unit step sigma: 1/2 at k = 0, 0 for even k != 0, i/(pi k) for odd k.
std::complex<double> riemann_coefficient(long k);
FourierData riemann_data(long truncation);

/// Both components as Fourier coefficients at a given time.
struct ModalSolution {
  FourierData u;
  FourierData v;
};

/// Both components sampled on the uniform grid.
struct LinearSolutionSample {
  UniformGrid grid;
  std::vector<double> x;
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> v;
  long truncation;
  TimePoint time;
};

LinearSolutionSample sample_on_grid(const ModalSolution& modes, const UniformGrid& grid, const TimePoint& t);

/// Periodic Riemann problem (u = v = sigma at t = 0) for a quartet with Delta(k) > 0.
///
/// A mode whose four symbols all vanish is stationary and needs no branch data;
/// every other mode with c_k != 0 must have Delta(k) > 0 and phi2(k) != 0,
/// otherwise the branch error is rethrown naming k.
ModalSolution riemann_case1_modes(const DispersionQuartet& q, const TimePoint& t, long truncation);
LinearSolutionSample solve_riemann_case1(const DispersionQuartet& q, const TimePoint& t, const UniformGrid& grid,
                                         long truncation);

/// Periodic Riemann problem for Delta = 0: u = v = sum c_k e^{i(kx - omega(k) t)}, omega = -phi1 - phi2.
/// Requires Delta(k) = 0 and phi1 + phi2 = phi3 + phi4 on every retained mode
/// (the second condition makes u = v an actual solution).
ModalSolution riemann_case2_modes(const DispersionQuartet& q, const TimePoint& t, long truncation);
LinearSolutionSample solve_riemann_case2(const DispersionQuartet& q, const TimePoint& t, const UniformGrid& grid,
                                         long truncation);

/// General data for a quartet satisfying the quantization conditions, via the
/// eigen-decomposition with integral polynomials P_j = phi1 + a_j phi2.
ModalSolution linear_bv_modes(const DispersionQuartet& q, const FourierData& f_hat, const FourierData& g_hat,
                              const TimePoint& t);
LinearSolutionSample solve_linear_bv(const DispersionQuartet& q, const FourierData& f_hat,
                                     const FourierData& g_hat, const TimePoint& t, const UniformGrid& grid);

/// Scalar evolution f^(k) -> e^{i (P(k) + offset) t} f^(k), i.e. u_t = L[u] with L^ = i (P + offset).
FourierData free_evolution(const IntegralPolynomial& symbol, double offset, const FourierData& f_hat,
                           const TimePoint& t);

/// Data-dependent constants of the Manakov linear part.
///
/// With ||f||^2, ||g||^2 and <f,g> = int conj(f) g, the resonant linearization is
///   u^_t = i phi1 u^ + i phi2 v^,  v^_t = i phi4 u^ + i phi3 v^,
///   phi1 = -k^2 + ||f||^2/pi + ||g||^2/(2pi),  phi3 = -k^2 + ||g||^2/pi + ||f||^2/(2pi),
///   phi2 = <g,f>/(2pi),  phi4 = <f,g>/(2pi).
/// Its two branches rotate as e^{i Omega_plus t} and e^{i Omega_minus t} with
///   Omega_pm = -k^2 + shift +- sqrt(Delta)/2,  shift = 3 (||f||^2 + ||g||^2) / (4pi),
/// so Omega_plus = -omega_1 and Omega_minus = -omega_2. The weights are
///   L^u = (c_f_plus f^ + c_g_plus g^) e^{i Omega_plus t} + (c_f_minus f^ + c_g_minus g^) e^{i Omega_minus t}
/// and likewise for L^v with the d_* weights.
struct ManakovConstants {
  double norm_f_sq = 0;
  double norm_g_sq = 0;
  std::complex<double> inner_fg{};
  double phi1_shift = 0;  ///< phi1 + k^2
  double phi3_shift = 0;  ///< phi3 + k^2
  std::complex<double> phi2{};
  std::complex<double> phi4{};
  double delta = 0;
  double sqrt_delta = 0;
  bool delta_clamped = false;
  double shift = 0;
  // (phi1 + omega2)/(omega2 - omega1), (phi1 + omega1)/(omega1 - omega2), phi2/(omega2 - omega1), ...
  std::complex<double> c_f_plus{}, c_f_minus{}, c_g_plus{}, c_g_minus{};
  std::complex<double> d_g_plus{}, d_g_minus{}, d_f_plus{}, d_f_minus{};
};

ManakovConstants manakov_constants(const FourierData& f_hat, const FourierData& g_hat);
ModalSolution manakov_linear_modes(const FourierData& f_hat, const FourierData& g_hat, const TimePoint& t);
/// (L^u, L^v) on the grid; `u` holds L^u and `v` holds L^v.
LinearSolutionSample manakov_linear_part(const FourierData& f_hat, const FourierData& g_hat, const TimePoint& t,
                                         const UniformGrid& grid);

}  // namespace talbot
