#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "talbot/analysis.hpp"
#include "talbot/dispersion.hpp"
#include "talbot/error.hpp"
#include "talbot/fourier_data.hpp"
#include "talbot/initial_data.hpp"
#include "talbot/linear_solver.hpp"

using namespace talbot;

namespace {

using cd = std::complex<double>;
using cld = std::complex<long double>;
using Poly = IntegralPolynomial;

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

cld naive_sum(const FourierData& c, long double x) {
  cld s = 0;
  for (long k = -c.truncation(); k <= c.truncation(); ++k) {
    const cld ck(c[k].real(), c[k].imag());
    s += ck * std::polar(1.0L, static_cast<long double>(k) * x);
  }
  return s;
}

double max_dev(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

FourierData ramp_like(long n) {
  FourierData d(n);
  for (long k = -n; k <= n; ++k) d[k] = cd(1.0 / (1 + k * k), 0.3 * k / (2.0 + k * k));
  return d;
}

}  // namespace

TEST_CASE("riemann coefficients") {
  CHECK(riemann_coefficient(0) == cd(0.5, 0));
  CHECK(riemann_coefficient(2) == cd(0, 0));
  CHECK(riemann_coefficient(-4) == cd(0, 0));
  CHECK(std::abs(riemann_coefficient(3) - cd(0, 1.0 / (3 * M_PI))) < 1e-17);
  CHECK(std::abs(riemann_coefficient(-3) - cd(0, -1.0 / (3 * M_PI))) < 1e-17);

  // coefficients of the sampled step match the closed form up to aliasing
  const auto s = sample_sigma(1 << 14);
  const FourierData d = FourierData::from_samples(s);
  for (long k = -9; k <= 9; ++k) CHECK(std::abs(d[k] - riemann_coefficient(k)) < 1e-6);
}

TEST_CASE("synthesis matches naive summation") {
  const FourierData d = ramp_like(40);
  const UniformGrid g(128);
  const auto fast = synthesize(d, g);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const cld ref = naive_sum(d, 2 * kPiL * m / g.size());
    CHECK(std::abs(fast[m] - cd(ref)) < 1e-13);
  }
  for (double x : {0.1, 2.0, 5.9}) CHECK(std::abs(evaluate_at(d, x) - cd(naive_sum(d, x))) < 1e-13);

  // truncation larger than the grid folds modes without loss at the nodes
  const FourierData wide = ramp_like(300);
  const auto folded = synthesize(wide, UniformGrid(64));
  for (std::size_t m = 0; m < 64; m += 7) {
    CHECK(std::abs(folded[m] - cd(naive_sum(wide, 2 * kPiL * m / 64))) < 1e-12);
  }
}

TEST_CASE("from_samples round trip and norms") {
  std::vector<cd> s(64);
  for (std::size_t m = 0; m < s.size(); ++m) s[m] = cd(std::sin(3.0 * m), std::cos(0.5 * m * m));
  const FourierData d = FourierData::from_samples(s);
  CHECK(d.truncation() == 32);
  CHECK(max_dev(synthesize(d, UniformGrid(64)), s) < 1e-14);

  // discrete Parseval, less the half of the Nyquist energy that the even split removes
  double direct = 0;
  for (const cd& z : s) direct += std::norm(z);
  CHECK(d.norm_sq() + 4 * M_PI * std::norm(d[32]) == doctest::Approx(2 * M_PI * direct / 64).epsilon(1e-13));

  std::vector<double> real(64);
  for (std::size_t m = 0; m < 64; ++m) real[m] = std::cos(5.0 * m);
  CHECK(FourierData::from_samples(real).is_hermitian(1e-15));
}

TEST_CASE("case 1 at t = 0 is the partial sum of the step") {
  const DispersionQuartet q(Poly::monomial(-1, 3), Poly::monomial(1, 3), Poly::monomial(2, 3), Poly{});
  const long n = 4096;
  const ModalSolution s = riemann_case1_modes(q, 0.0, n);
  const FourierData c = riemann_data(n);
  double worst = 0;
  for (long k = -n; k <= n; ++k) {
    worst = std::max({worst, std::abs(s.u[k] - c[k]), std::abs(s.v[k] - c[k])});
  }
  CHECK(worst < 1e-15);

  // pointwise distance from the step outside the Gibbs zone
  const UniformGrid grid(1 << 14);
  const auto sample = solve_riemann_case1(q, 0.0, grid, n);
  const double window = 8 * M_PI / n;
  double dev = 0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double x = grid.x(m);
    if (std::min({x, std::abs(x - M_PI), 2 * M_PI - x}) < window) continue;
    const double sigma = x < M_PI ? 0.0 : 1.0;
    dev = std::max(dev, std::abs(sample.u[m] - sigma));
  }
  CHECK(dev <= 0.05);
}

TEST_CASE("case 1 with k-independent branches is a pure phase") {
  // phi1 = phi4 = 0, phi2 = phi3 = 1: u_t = i v, v_t = i u, so u = v = e^{it} sigma
  const DispersionQuartet q(Poly{}, Poly{1}, Poly{1}, Poly{});
  const long n = 64;
  const FourierData c = riemann_data(n);
  for (TimePoint t : {TimePoint(0.7), TimePoint::rational(1, 1), TimePoint::rational(3, 4)}) {
    const ModalSolution s = riemann_case1_modes(q, t, n);
    const cd phase = std::polar(1.0, t.value());
    for (long k = -n; k <= n; ++k) {
      CHECK(std::abs(s.u[k] - phase * c[k]) < 1e-15);
      CHECK(std::abs(s.v[k] - phase * c[k]) < 1e-15);
    }
  }
  const ModalSolution at_pi = riemann_case1_modes(q, TimePoint::rational(1, 1), n);
  CHECK(std::abs(at_pi.u[1] + c[1]) < 1e-15);
}

TEST_CASE("case 1 modes against an independent two-branch oracle") {
  const DispersionQuartet q(Poly{0, 0, -1}, Poly{0, 0, 1}, Poly{0, 0, 2}, Poly{});
  const double t = 0.37;
  const long n = 16;
  const ModalSolution s = riemann_case1_modes(q, t, n);
  for (long k = 1; k <= n; ++k) {
    // eigen-decomposition of [[p1, p2], [p3, p4]] done by hand
    const double p1 = -double(k * k), p2 = double(k * k), p3 = 2.0 * k * k, p4 = 0.0;
    const double sd = std::sqrt((p1 - p4) * (p1 - p4) + 4 * p2 * p3);
    const double l1 = (p1 + p4 + sd) / 2, l2 = (p1 + p4 - sd) / 2;
    const double r1 = (l1 - p1) / p2, r2 = (l2 - p1) / p2;  // v/u ratios of the eigenvectors
    const cd c = riemann_coefficient(k);
    // c (1, 1) = A (1, r1) + B (1, r2)
    const cd b = c * (1 - r1) / (r2 - r1);
    const cd a = c - b;
    const cd u = a * std::polar(1.0, l1 * t) + b * std::polar(1.0, l2 * t);
    const cd v = a * r1 * std::polar(1.0, l1 * t) + b * r2 * std::polar(1.0, l2 * t);
    CHECK(std::abs(s.u[k] - u) < 1e-14);
    CHECK(std::abs(s.v[k] - v) < 1e-14);
  }
}

TEST_CASE("case 1 with N = 0 is the mean") {
  const DispersionQuartet q(Poly{}, Poly{1}, Poly{1}, Poly{});
  const auto s = solve_riemann_case1(q, 0.4, UniformGrid(16), 0);
  for (std::size_t m = 0; m < 16; ++m) {
    CHECK(std::abs(s.u[m] - std::polar(0.5, 0.4)) < 1e-15);
    CHECK(std::abs(s.v[m] - std::polar(0.5, 0.4)) < 1e-15);
  }
}

TEST_CASE("case 1 rejects modes without branch data") {
  const DispersionQuartet q(Poly{0, 0, 1}, Poly{}, Poly{1}, Poly{});
  try {
    (void)riemann_case1_modes(q, 1.0, 5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::weight_undefined);
    CHECK(std::string(e.what()).find("k = ") != std::string::npos);
  }
}

TEST_CASE("case 2 free evolution") {
  const DispersionQuartet q(Poly::monomial(-1, 2), Poly{}, Poly{}, Poly::monomial(-1, 2));
  const long n = 200;
  const ModalSolution zero = riemann_case2_modes(q, 0.0, n);
  const FourierData c = riemann_data(n);
  for (long k = -n; k <= n; ++k) CHECK(zero.u[k] == c[k]);

  const double t = 0.9;
  const ModalSolution s = riemann_case2_modes(q, t, n);
  for (long k = -n; k <= n; k += 13) {
    const cd expect = c[k] * std::polar(1.0, -double(k) * double(k) * t);
    CHECK(std::abs(s.u[k] - expect) < 1e-14);
    CHECK(s.u[k] == s.v[k]);
  }

  const DispersionQuartet bad(Poly::monomial(-1, 2), Poly{}, Poly{1}, Poly{});
  CHECK_THROWS_AS(riemann_case2_modes(bad, 0.5, 4), Error);
  // Delta = 0 but u = v is not a solution
  const DispersionQuartet inconsistent(Poly::monomial(-1, 2), Poly{}, Poly{}, Poly::monomial(-1, 2) + Poly{1});
  CHECK_THROWS_AS(riemann_case2_modes(inconsistent, 0.5, 4), Error);
}

TEST_CASE("case 2 at t = pi flips the step") {
  // e^{-i k^2 pi} = -1 on odd k, so u = 1 - sigma: two flat plateaus
  const DispersionQuartet q(Poly::monomial(-1, 2), Poly{}, Poly{}, Poly::monomial(-1, 2));
  const long n = 100'000;
  const UniformGrid grid(1 << 18);
  const auto s = solve_riemann_case2(q, TimePoint::rational(1, 1), grid, n);
  std::vector<double> re(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) re[m] = s.u[m].real();
  const std::size_t window = static_cast<std::size_t>(std::ceil(8 * M_PI / n / grid.spacing()));
  const QuantizationReport r = detect_quantization(re, 4, window);
  CHECK(r.jump_locations.size() == 2);
  CHECK(r.plateau_flatness <= 0.05);
  CHECK(re[grid.size() / 4] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(re[3 * grid.size() / 4] == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("linear bv reproduces the data at t = 0") {
  const DispersionQuartet q(Poly::monomial(-1, 3), Poly::monomial(1, 3), Poly::monomial(2, 3), Poly{});
  const FourierData f = ramp_like(30);
  FourierData g(30);
  for (long k = -30; k <= 30; ++k) g[k] = cd(0.1 * k, 1.0 / (3 + k * k));
  const ModalSolution s = linear_bv_modes(q, f, g, 0.0);
  for (long k = -30; k <= 30; ++k) {
    CHECK(std::abs(s.u[k] - f[k]) < 1e-15);
    CHECK(std::abs(s.v[k] - g[k]) < 1e-15);
  }
}

TEST_CASE("linear bv single mode") {
  // alpha = 1, beta = 2 on k^2: a1 = 2, a2 = -1, P_j = phi1 + a_j phi2
  const DispersionQuartet q(Poly::monomial(-1, 2), Poly::monomial(1, 2), Poly::monomial(2, 2), Poly{});
  FourierData f(3), g(3);
  f[1] = 1.0;
  const double a1 = 2, a2 = -1, p1 = -1 + a1, p2 = -1 + a2;
  for (double t : {0.0, 0.25, 1.3}) {
    const ModalSolution s = linear_bv_modes(q, f, g, t);
    const cd expect = (a1 * std::polar(1.0, p2 * t) - a2 * std::polar(1.0, p1 * t)) / (a1 - a2);
    CHECK(std::abs(s.u[1] - expect) < 1e-15);
    CHECK(std::abs(s.u[2]) == 0.0);
  }
  // |u| is periodic with period 2 pi / |P1 - P2|
  const double period = 2 * M_PI / std::abs(p1 - p2);
  const double t0 = 0.41;
  CHECK(std::abs(linear_bv_modes(q, f, g, t0).u[1]) ==
        doctest::Approx(std::abs(linear_bv_modes(q, f, g, t0 + period).u[1])).epsilon(1e-13));
}

TEST_CASE("linear bv with equal data keeps u = v only when the data is an eigenvector") {
  const FourierData f = ramp_like(20);
  // alpha = 0, beta = 1: a1 = 1, so (1, 1) is an eigenvector and u = v
  const DispersionQuartet sym(Poly::monomial(-1, 2), Poly::monomial(1, 2), Poly::monomial(1, 2),
                              Poly::monomial(-1, 2));
  const ModalSolution s = linear_bv_modes(sym, f, f, 0.8);
  for (long k = -20; k <= 20; ++k) CHECK(std::abs(s.u[k] - s.v[k]) < 1e-12);

  // alpha = 1, beta = 2: a = 2, -1, neither equals 1, so equal data separates
  const DispersionQuartet q(Poly::monomial(-1, 2), Poly::monomial(1, 2), Poly::monomial(2, 2), Poly{});
  const ModalSolution r = linear_bv_modes(q, f, f, 0.8);
  double gap = 0;
  for (long k = -20; k <= 20; ++k) gap = std::max(gap, std::abs(r.u[k] - r.v[k]));
  CHECK(gap > 1e-3);
}

TEST_CASE("linear bv rejects degenerate and non-quantized quartets") {
  FourierData f(2), g(2);
  // alpha = 2, beta = -1: a1 = a2 = 1
  const DispersionQuartet deg(Poly{}, Poly::monomial(1, 2), Poly::monomial(-1, 2), Poly::monomial(2, 2));
  try {
    (void)linear_bv_modes(deg, f, g, 0.1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_degenerate);
  }
  const DispersionQuartet irr(Poly{}, Poly::monomial(1, 2), Poly::monomial(2, 2), Poly{});
  CHECK_THROWS_AS(linear_bv_modes(irr, f, g, 0.1), Error);
  CHECK_THROWS_AS(linear_bv_modes(deg, FourierData(2), FourierData(3), 0.1), Error);
}

TEST_CASE("free evolution") {
  const FourierData f = ramp_like(10);
  const FourierData e = free_evolution(Poly::monomial(-1, 2), 0.5, f, 0.3);
  for (long k = -10; k <= 10; ++k) {
    CHECK(std::abs(e[k] - f[k] * std::polar(1.0, (-double(k * k) + 0.5) * 0.3)) < 1e-15);
  }
}

TEST_CASE("manakov constants for equal unit-modulus data") {
  const auto s = sample_sigma1(1024, StepSampling::left_closed);
  const FourierData f = FourierData::from_samples(s);
  CHECK(f.norm_sq() == doctest::Approx(2 * M_PI).epsilon(1e-14));
  const ManakovConstants c = manakov_constants(f, f);
  CHECK(std::abs(c.phi2 - cd(1, 0)) < 1e-14);
  CHECK(std::abs(c.phi4 - cd(1, 0)) < 1e-14);
  CHECK(c.delta == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(c.sqrt_delta == doctest::Approx(2.0).epsilon(1e-13));
  // sqrt(Delta) = ||f||^2 / pi for f = g
  CHECK(c.sqrt_delta == doctest::Approx(f.norm_sq() / M_PI).epsilon(1e-13));
  CHECK(c.shift == doctest::Approx(3.0).epsilon(1e-13));

  // midpoint sampling puts 0 at the two jump nodes, which shortens the norm
  const FourierData mid = FourierData::from_samples(sample_sigma1(1024));
  CHECK(mid.norm_sq() == doctest::Approx(2 * M_PI * (1 - 2.0 / 1024)).epsilon(1e-14));
}

TEST_CASE("manakov linear part") {
  const FourierData f = FourierData::from_samples(sample_sigma1(256));
  const FourierData g = FourierData::from_samples(sample_linear_ramp(256));

  SUBCASE("t = 0 gives the data") {
    const ModalSolution s = manakov_linear_modes(f, g, 0.0);
    for (long k = -128; k <= 128; ++k) {
      CHECK(std::abs(s.u[k] - f[k]) < 1e-14);
      CHECK(std::abs(s.v[k] - g[k]) < 1e-14);
    }
  }
  SUBCASE("equal data gives equal parts") {
    const ModalSolution s = manakov_linear_modes(f, f, 0.3);
    for (long k = -128; k <= 128; ++k) CHECK(std::abs(s.u[k] - s.v[k]) < 1e-12);
  }
  SUBCASE("g = 0 decouples") {
    // the f-weights of L^v carry <f,g> and vanish with g
    const FourierData zero(128);
    const ModalSolution s = manakov_linear_modes(f, zero, 0.3);
    const ManakovConstants c = manakov_constants(f, zero);
    CHECK(std::abs(c.d_f_plus) == 0.0);
    CHECK(std::abs(c.d_f_minus) == 0.0);
    for (long k = -128; k <= 128; ++k) {
      CHECK(std::abs(s.v[k]) == 0.0);
      // phi1 = -k^2 + ||f||^2/pi: scalar rotation
      const cd expect = f[k] * std::polar(1.0, (-double(k * k) + f.norm_sq() / M_PI) * 0.3);
      CHECK(std::abs(s.u[k] - expect) < 1e-13);
    }
  }
  SUBCASE("modes solve the linearized system") {
    // check u_t = i phi1 u + i phi2 v by central differences in t
    const ManakovConstants c = manakov_constants(f, g);
    const double t = 0.2, h = 1e-5;
    const ModalSolution a = manakov_linear_modes(f, g, t - h);
    const ModalSolution b = manakov_linear_modes(f, g, t + h);
    const ModalSolution m = manakov_linear_modes(f, g, t);
    const cd i(0, 1);
    for (long k : {-7L, 0L, 3L, 40L}) {
      const double kk = double(k) * k;
      const cd ut = (b.u[k] - a.u[k]) / (2 * h);
      const cd vt = (b.v[k] - a.v[k]) / (2 * h);
      const cd ru = i * (-kk + c.phi1_shift) * m.u[k] + i * c.phi2 * m.v[k];
      const cd rv = i * c.phi4 * m.u[k] + i * (-kk + c.phi3_shift) * m.v[k];
      CHECK(std::abs(ut - ru) < 1e-6 * (1 + kk));
      CHECK(std::abs(vt - rv) < 1e-6 * (1 + kk));
    }
  }
}
