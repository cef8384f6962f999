#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "talbot/analysis.hpp"
#include "talbot/error.hpp"
#include "talbot/initial_data.hpp"
#include "talbot/linear_solver.hpp"
#include "talbot/spectral_solver.hpp"

using namespace talbot;

namespace {

using cd = std::complex<double>;

std::vector<double> weierstrass(std::size_t n, int terms) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kTwoPi * double(i) / double(n);
    for (int j = 1; j <= terms; ++j) w[i] += std::pow(2.0, -j / 2.0) * std::cos(std::ldexp(1.0, j) * x);
  }
  return w;
}

// column counting done directly on each window, wrapping at the end
double brute_count(const std::vector<double>& s, std::size_t window) {
  const std::size_t n = s.size();
  const double eps = kTwoPi * double(window) / double(n);
  double total = 0;
  for (std::size_t c = 0; c < n / window; ++c) {
    double lo = s[c * window], hi = lo;
    for (std::size_t j = 0; j <= window; ++j) {
      const double v = s[(c * window + j) % n];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    total += std::max(1.0, std::ceil((hi - lo) / eps));
  }
  return total;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::io;
}

}  // namespace

TEST_CASE("fit_line") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto [b, r2] = fit_line(x, y);
  CHECK(b == doctest::Approx(2.0));
  CHECK(r2 == doctest::Approx(1.0));
}

TEST_CASE("dimension of a constant and a ramp") {
  const std::vector<double> c(1 << 14, 0.7);
  const DimensionEstimate e = minkowski_dimension(c);
  CHECK(e.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(e.valid);

  std::vector<double> ramp(1 << 14);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = (kTwoPi * double(i) / double(ramp.size()) - kPi) / 10;
  CHECK(minkowski_dimension(ramp).slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dimension counts match a brute-force column count") {
  const auto w = weierstrass(1 << 16, 12);
  const DimensionEstimate e = minkowski_dimension(w);
  REQUIRE(e.counts.size() >= 4);
  for (const ScaleCount& sc : e.counts) CHECK(sc.count == brute_count(w, sc.window));
  for (std::size_t i = 1; i < e.counts.size(); ++i) {
    CHECK(e.counts[i].count >= 1);
    CHECK(e.counts[i].count <= e.counts[i - 1].count);
  }
}

TEST_CASE("Weierstrass calibration") {
  // below the shortest wavelength 2pi/2^14 the series is smooth; fit from 8 wavelengths up
  const auto w = weierstrass(1 << 20, 14);
  const ScaleRange r{8 * kTwoPi / 16384, kTwoPi / 8};
  const DimensionEstimate e = minkowski_dimension(w, r);
  CHECK(e.slope == doctest::Approx(1.5).epsilon(0.1 / 1.5));
  CHECK(e.r_squared >= 0.98);
  // the fit over all scales down to 4h is pulled towards 1 by the smooth range
  CHECK(minkowski_dimension(w).slope < e.slope);
}

TEST_CASE("dimension errors") {
  CHECK(code_of([] { minkowski_dimension(std::vector<double>(1000, 1.0)); }) == Errc::precondition);
  const std::vector<double> c(1 << 10, 1.0);
  CHECK(code_of([&] { minkowski_dimension(c, ScaleRange{0.1, 0.3}); }) == Errc::insufficient_scales);
}

TEST_CASE("Weyl sums") {
  const IntegralPolynomial p = IntegralPolynomial::monomial(1, 2);
  const std::vector<long> ns{1, 4, 16, 64};
  const WeylGrowth zero = weyl_sum_growth(p, 0.0, ns);
  for (const WeylRow& r : zero.rows) CHECK(r.sup == doctest::Approx(double(r.n)).epsilon(1e-12));
  CHECK(zero.gamma == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(zero.x_resolution == 512);

  // brute-force sup over the same x grid
  const std::vector<long> small{1, 10, 37};
  const WeylGrowth g = weyl_sum_growth(p, 1.0, small, 512);
  CHECK(g.rows[0].sup == doctest::Approx(1.0).epsilon(1e-12));
  for (const WeylRow& r : g.rows) {
    double sup = 0;
    for (int m = 0; m < 512; ++m) {
      const double x = kTwoPi * m / 512;
      cd s{};
      for (long k = 1; k <= r.n; ++k) s += std::polar(1.0, double(k * k) * 1.0 + double(k) * x);
      sup = std::max(sup, std::abs(s));
    }
    CHECK(r.sup == doctest::Approx(sup).epsilon(1e-10));
  }

  // at t = 2pi/3 the k^2 phases repeat with period 3, so complete periods add up linearly
  const std::vector<long> thirds{3 * 64, 3 * 256};
  const WeylGrowth r = weyl_sum_growth(p, TimePoint::rational(2, 3), thirds);
  for (const WeylRow& row : r.rows) CHECK(row.sup / double(row.n) >= 0.5);
}

TEST_CASE("quantization of exact steps") {
  const auto s1 = sample_sigma1(1024);
  std::vector<double> re(s1.size());
  for (std::size_t i = 0; i < re.size(); ++i) re[i] = s1[i].real();
  const QuantizationReport r = detect_quantization(re, 8, 4);
  REQUIRE(r.jump_locations.size() == 2);
  const double h = kTwoPi / 1024;
  for (double x : r.jump_locations) CHECK(lattice_distance(x, 1) <= h);
  CHECK(r.score >= 0.99);
  CHECK(r.q_hypothesis == 1L);

  const std::vector<double> flat(256, 3.0);
  const QuantizationReport f = detect_quantization(flat, 8, 4);
  CHECK(f.jump_locations.empty());
  CHECK(f.score == 1.0);
}

TEST_CASE("free Schroedinger evolution at pi/2 is quantized on half periods") {
  // e^{-i k^2 pi/2} = -i on odd k: Re u = 1/2 exactly and Im u is a centred step
  const DispersionQuartet q(IntegralPolynomial::monomial(-1, 2), {}, {}, IntegralPolynomial::monomial(-1, 2));
  const long n = 100'000;
  const UniformGrid grid(1 << 18);
  const auto s = solve_riemann_case2(q, TimePoint::rational(1, 2), grid, n);
  for (auto part : {0, 1}) {
    std::vector<double> obs(grid.size());
    for (std::size_t i = 0; i < obs.size(); ++i) obs[i] = part == 0 ? s.u[i].real() : s.u[i].imag();
    const std::size_t window = static_cast<std::size_t>(std::ceil(8 * kPi / n / grid.spacing()));
    const QuantizationReport r = detect_quantization(obs, 8, window);
    CHECK(r.plateau_flatness <= 0.05);
    CHECK(r.jump_locations.size() == (part == 0 ? 0u : 2u));
    for (double x : r.jump_locations) CHECK(lattice_distance(x, 2) <= window * grid.spacing());
    if (part == 1) CHECK(r.q_hypothesis.value_or(99) <= 2);
  }
}

TEST_CASE("lattice distance") {
  CHECK(lattice_distance(0.0, 3) == 0.0);
  CHECK(lattice_distance(kPi / 3 + 0.01, 3) == doctest::Approx(0.01));
  CHECK(lattice_distance(kTwoPi - 0.02, 1) == doctest::Approx(0.02));
  CHECK(lattice_distance(kPi / 2, 1) == doctest::Approx(kPi / 2));
}

TEST_CASE("Fourier tail exponent") {
  FourierData a(4096), b(4096);
  for (long k = -4096; k <= 4096; ++k) {
    if (k == 0) continue;
    a[k] = cd(0, 1.0 / double(k));
    b[k] = 1.0 / (double(k) * double(k));
  }
  CHECK(fourier_tail_exponent(a, {8, 4096}) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fourier_tail_exponent(b, {8, 4096}) == doctest::Approx(2.0).epsilon(0.05));

  // zero coefficients are skipped: the step has only odd modes
  CHECK(fourier_tail_exponent(riemann_data(4096), {8, 4096}) == doctest::Approx(1.0).epsilon(0.1));

  CHECK(code_of([] { fourier_tail_exponent(FourierData(4096), {8, 4096}); }) == Errc::undefined_decay);
  CHECK(code_of([&] { fourier_tail_exponent(a, {8, 100}); }) == Errc::precondition);
}

TEST_CASE("smoothing diagnostic") {
  const std::size_t m = 256;
  const GridField f(sample_sigma1(m));
  const FourierData fh = FourierData::from_samples(f.values());

  SUBCASE("identity at t = 0") {
    const SmoothingReport r = smoothing_diagnostic({f, f, 0.0}, fh, fh, {1, 128});
    CHECK(r.sup_residual_u < 1e-13);
    CHECK(r.sup_residual_v < 1e-13);
  }
  SUBCASE("equal data gives equal residuals") {
    SolverConfig cfg;
    cfg.grid_size = m;
    const ManakovState st = simulate(f, f, cfg, 0.02);
    const SmoothingReport r = smoothing_diagnostic(st, fh, fh, {1, 128});
    CHECK(r.sup_residual_u == doctest::Approx(r.sup_residual_v).epsilon(1e-9));
    CHECK(r.l2_residual_u == doctest::Approx(r.l2_residual_v).epsilon(1e-9));
    CHECK(r.sup_residual_u > 0);
  }
  SUBCASE("grid mismatch") {
    const FourierData other = FourierData::from_samples(sample_sigma1(128));
    CHECK(code_of([&] { smoothing_diagnostic({f, f, 0.0}, other, other, {1, 64}); }) == Errc::grid_mismatch);
  }
}
