#include "talbot/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "talbot/analysis.hpp"
#include "talbot/dispersion.hpp"
#include "talbot/error.hpp"
#include "talbot/initial_data.hpp"
#include "talbot/linear_solver.hpp"
#include "talbot/spectral_solver.hpp"

namespace talbot {

namespace {

using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> real_parts(std::span<const cd> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

std::vector<double> imag_parts(std::span<const cd> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].imag();
  return out;
}

double sup_diff(std::span<const cd> a, std::span<const cd> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

GridField sigma1_field(std::size_t m) { return GridField(sample_sigma1(m)); }

// Shared sigma1/sigma1 run at M = 4096, t = 0.3, used by the dimension and smoothing criteria.
// dt sits on the stability envelope dt (M/2)^2 = 1 to keep the run inside its time budget.
constexpr std::size_t kLargeGrid = 4096;
constexpr double kLargeTime = 0.3;

struct LargeRun {
  ManakovState state;
  double seconds = 0.0;
};

const LargeRun& large_run() {
  static std::once_flag once;
  static LargeRun run;
  std::call_once(once, [] {
    const auto start = Clock::now();
    SolverConfig cfg;
    cfg.grid_size = kLargeGrid;
    const double half = static_cast<double>(kLargeGrid / 2);
    cfg.dt = 1.0 / (half * half);
    run.state = simulate(sigma1_field(kLargeGrid), sigma1_field(kLargeGrid), cfg, kLargeTime);
    run.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  });
  return run;
}

// ---------------------------------------------------------------------------

CriterionResult fractal_linear() {
  CriterionResult r;
  const DispersionQuartet q(IntegralPolynomial::monomial(-1, 2), {}, {}, IntegralPolynomial::monomial(-1, 2));
  const long n = 1L << 16;
  const UniformGrid grid(std::size_t{1} << 18);
  const auto modes = riemann_case2_modes(q, 1.0, n);
  const auto u = synthesize(modes.u, grid);
  const DimensionEstimate est = minkowski_dimension(real_parts(u));
  r.passed = std::abs(est.slope - 1.5) <= 0.1 && est.r_squared >= 0.98;
  r.detail = fmt("Re u slope %.4f (target 1.5 +- 0.1), r^2 %.4f (>= 0.98), eps in [%.3g, %.3g]", est.slope,
                 est.r_squared, est.scale_range.epsilon_min, est.scale_range.epsilon_max);
  return r;
}

CriterionResult fractal_manakov() {
  CriterionResult r;
  const LargeRun& run = large_run();
  const DimensionEstimate re = minkowski_dimension(real_parts(run.state.u.values()));
  const DimensionEstimate im = minkowski_dimension(imag_parts(run.state.u.values()));
  const bool re_ok = std::abs(re.slope - 1.5) <= 0.15;
  const bool im_ok = std::abs(im.slope - 1.5) <= 0.15;
  r.passed = (re_ok || im_ok) && run.seconds <= 600.0;
  r.detail = fmt("Re u %.4f (r^2 %.3f), Im u %.4f (r^2 %.3f), target 1.5 +- 0.15; run %.0f s (<= 600)", re.slope,
                 re.r_squared, im.slope, im.r_squared, run.seconds);
  return r;
}

CriterionResult quantization_linear() {
  CriterionResult r;
  const auto k3 = [](std::int64_t c) { return IntegralPolynomial::monomial(c, 3); };
  // phi4 = phi1 + 1 phi2 = 0, phi3 = 2 phi2
  const DispersionQuartet q(k3(-1), k3(1), k3(2), IntegralPolynomial{});
  const QuantizationVerdict v = quantization_check(q);
  if (!v.satisfied) {
    r.detail = "quartet unexpectedly fails the quantization check";
    return r;
  }
  const long n = 100000;
  const UniformGrid grid(std::size_t{1} << 18);
  const TimePoint t = TimePoint::rational(1, 3);
  const auto modes = riemann_case1_modes(q, t, n);
  const double h = grid.spacing();
  const auto window = static_cast<std::size_t>(std::ceil(8.0 * kPi / static_cast<double>(n) / h));
  bool ok = true;
  std::string detail = fmt("a1=%lld a2=%lld, Gibbs window %zu cells;", static_cast<long long>(*v.a1),
                           static_cast<long long>(*v.a2), window);
  for (const auto& [name, coeffs] : {std::pair{"u", &modes.u}, std::pair{"v", &modes.v}}) {
    const auto vals = synthesize(*coeffs, grid);
    for (bool real : {true, false}) {
      const auto obs = real ? real_parts(vals) : imag_parts(vals);
      const QuantizationReport rep = detect_quantization(obs, 3, window);
      double worst = 0.0;
      for (double x : rep.jump_locations) worst = std::max(worst, lattice_distance(x, 3));
      const bool aligned = worst <= static_cast<double>(window) * h;
      const bool pass = rep.jump_locations.size() <= 6 && aligned && rep.plateau_flatness <= 0.05;
      ok = ok && pass;
      detail += fmt(" %s(%s): %zu jumps, max offset %.2g, flatness %.3g;", real ? "Re" : "Im", name,
                    rep.jump_locations.size(), worst, rep.plateau_flatness);
    }
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

DriftReport conservation_drift(double dt) {
  SolverConfig cfg;
  cfg.grid_size = 512;
  cfg.dt = dt;
  // dt = 2.5e-5 gives dt (M/2)^2 = 1.64, outside the default envelope but inside RK4's stability interval.
  cfg.enforce_envelope = false;
  ConservationMonitor mon;
  const std::vector<Observer> obs{mon.observer(10)};
  simulate(sigma1_field(512), sigma1_field(512), cfg, 0.3, obs);
  return mon.max_drift();
}

CriterionResult conservation() {
  CriterionResult r;
  const DriftReport a = conservation_drift(2.5e-5);
  const DriftReport b = conservation_drift(1.25e-5);
  const double wa = std::max({a.norm_u, a.norm_v, a.inner_abs});
  const double wb = std::max({b.norm_u, b.norm_v, b.inner_abs});
  const double ratio = wb > 0.0 ? wa / wb : INFINITY;
  r.passed = wa <= 1e-6 && ratio >= 10.0;
  r.detail = fmt("dt=2.5e-5: drift |u|^2 %.3g, |v|^2 %.3g, |<u,v>| %.3g (<= 1e-6); dt/2 reduction %.3gx (>= 10)",
                 a.norm_u, a.norm_v, a.inner_abs, ratio);
  return r;
}

CriterionResult symmetry() {
  CriterionResult r;
  const std::size_t m = 512;
  std::vector<cd> smooth(m);
  const UniformGrid grid(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.x(i);
    smooth[i] = cd(1.0 + 0.5 * std::cos(x), 0.3 * std::sin(2.0 * x));
  }
  double worst = 0.0;
  std::string detail;
  for (const auto& [name, f] : {std::pair{"sigma1", sigma1_field(m)}, std::pair{"smooth", GridField(smooth)}}) {
    double dev = 0.0;
    const std::vector<Observer> obs{
        {25, [&dev](const ManakovState& s) { dev = std::max(dev, sup_diff(s.u.values(), s.v.values())); }}};
    SolverConfig cfg;
    cfg.grid_size = m;
    simulate(f, f, cfg, 0.3, obs);
    worst = std::max(worst, dev);
    detail += fmt("%s max|u-v| %.3g; ", name, dev);
  }
  r.passed = worst <= 1e-10;
  r.detail = detail + "tolerance 1e-10";
  return r;
}

CriterionResult plane_wave() {
  CriterionResult r;
  const std::size_t m = 256;
  const UniformGrid grid(m);
  std::vector<cd> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = std::polar(1.0, grid.x(i));
  SolverConfig cfg;
  cfg.grid_size = m;
  const ManakovState end = simulate(GridField(f), GridField(std::vector<cd>(m)), cfg, 1.0);
  const double err = std::max(sup_diff(end.u.values(), f), sup_diff(end.v.values(), std::vector<cd>(m)));
  r.passed = err <= 1e-8;
  r.detail = fmt("sup error %.3g after t = 1 (<= 1e-8)", err);
  return r;
}

CriterionResult linear_oracle() {
  CriterionResult r;
  const std::size_t m = 128;
  const long band = static_cast<long>(m / 4);
  FourierData f_hat(band);
  FourierData g_hat(band);
  for (long k = -band; k <= band; ++k) {
    const double kk = static_cast<double>(k);
    f_hat[k] = cd(1.0 / (1.0 + kk * kk), 0.5 * std::sin(kk) / (1.0 + std::abs(kk)));
    g_hat[k] = cd(std::cos(0.7 * kk) / (2.0 + std::abs(kk)), 0.0);
  }
  const UniformGrid grid(m);
  SolverConfig cfg;
  cfg.grid_size = m;
  cfg.linear_only = true;
  cfg.dt = 4e-6;  // RK4 phase error at |k| = M/4 stays below 1e-9 over t = 0.3
  const ManakovState end =
      simulate(GridField(synthesize(f_hat, grid)), GridField(synthesize(g_hat, grid)), cfg, 0.3);
  const IntegralPolynomial symbol = IntegralPolynomial::monomial(-1, 2);
  const auto u = synthesize(free_evolution(symbol, 0.0, f_hat, 0.3), grid);
  const auto v = synthesize(free_evolution(symbol, 0.0, g_hat, 0.3), grid);
  const double err = std::max(sup_diff(end.u.values(), u), sup_diff(end.v.values(), v));
  r.passed = err <= 1e-8;
  r.detail = fmt("sup |spectral - exact| %.3g at t = 0.3 (<= 1e-8), band |k| <= %ld", err, band);
  return r;
}

CriterionResult weyl_growth() {
  CriterionResult r;
  const IntegralPolynomial p = IntegralPolynomial::monomial(1, 2);
  std::vector<long> ns;
  for (int j = 6; j <= 13; ++j) ns.push_back(1L << j);
  const WeylGrowth g = weyl_sum_growth(p, 1.0, ns);
  std::vector<long> ns3;
  for (int j = 4; j <= 11; ++j) ns3.push_back(3L << j);
  const WeylGrowth c = weyl_sum_growth(p, TimePoint::rational(2, 3), ns3);
  double min_ratio = INFINITY;
  for (const auto& row : c.rows) min_ratio = std::min(min_ratio, row.sup / static_cast<double>(row.n));
  r.passed = g.gamma >= 0.4 && g.gamma <= 0.6 && min_ratio >= 0.5;
  r.detail = fmt("t=1: gamma %.4f over N=2^6..2^13 ([0.4, 0.6]); t=2pi/3: min sup/N %.3f on N=3*2^j (>= 0.5)",
                 g.gamma, min_ratio);
  return r;
}

double quantization_score(const ManakovState& s) {
  return detect_quantization(real_parts(s.u.values()), 0, 4).score;
}

CriterionResult score_ordering() {
  CriterionResult r;
  bool ok = true;
  std::string detail;
  for (bool dealias : {false, true}) {
    SolverConfig cfg;
    cfg.grid_size = 512;
    cfg.dealias = dealias;
    ManakovSolver solver(cfg);
    ManakovState s{sigma1_field(512), sigma1_field(512), 0.0};
    s = solver.advance(s, 0.3);
    const double a = quantization_score(s);
    s = solver.advance(s, 0.314);
    const double b = quantization_score(s);
    s = solver.advance(s, TimePoint::rational(1, 10).value());
    const double c = quantization_score(s);
    ok = ok && c > b && b > a;
    detail += fmt("%s: score(0.3) %.4f < score(0.314) %.4f < score(pi/10) %.4f; ", dealias ? "dealiased" : "plain", a,
                  b, c);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult smoothing() {
  CriterionResult r;
  const LargeRun& run = large_run();
  const GridField f = sigma1_field(kLargeGrid);
  const FourierData f_hat = FourierData::from_samples(f.values());
  const ModeRange range{4, 512};
  const SmoothingReport rep = smoothing_diagnostic(run.state, f_hat, f_hat, range);
  const double gain = rep.tail_residual_u - rep.tail_u;
  r.passed = gain >= 0.3;
  r.detail = fmt("decay order u %.3f, u - L^u %.3f, difference %.3f (>= 0.3) over |k| in [%ld, %ld]", rep.tail_u,
                 rep.tail_residual_u, gain, range.k_min, range.k_max);
  return r;
}

// ---- criterion 11: naive double loops against the evaluators -------------

std::vector<cd> naive_sum(const std::function<cd(long)>& coeff, long n, const UniformGrid& grid) {
  std::vector<cd> out(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    cd s{};
    for (long k = -n; k <= n; ++k) s += coeff(k) * std::exp(cd(0.0, static_cast<double>(k) * grid.x(m)));
    out[m] = s;
  }
  return out;
}

double naive_check_all(std::string& detail) {
  const UniformGrid grid(128);
  const double t = 0.3;
  double worst = 0.0;
  auto note = [&](const char* what, double err) {
    worst = std::max(worst, err);
    detail += fmt("%s %.2g; ", what, err);
  };
  auto eval = [](const IntegralPolynomial& p, long k) { return static_cast<double>(p(k)); };
  auto step = [](long k) -> cd {
    if (k == 0) return 0.5;
    if (k % 2 == 0) return 0.0;
    return cd(0.0, 1.0 / (kPi * static_cast<double>(k)));
  };

  for (long n : {1L, 7L, 64L}) {
    // Case 1 with the alpha = 1, beta = 2 pattern on k^2 symbols.
    const auto k2 = [](std::int64_t c) { return IntegralPolynomial::monomial(c, 2); };
    const DispersionQuartet q1(k2(-1), k2(1), k2(2), IntegralPolynomial{});
    const auto m1 = riemann_case1_modes(q1, t, n);
    const auto u1 = synthesize(m1.u, grid);
    const auto v1 = synthesize(m1.v, grid);
    auto case1 = [&](long k, bool want_v) -> cd {
      const double p1 = eval(q1.phi[0], k), p2 = eval(q1.phi[1], k), p3 = eval(q1.phi[2], k),
                   p4 = eval(q1.phi[3], k);
      if (p1 == 0 && p2 == 0 && p3 == 0 && p4 == 0) return step(k);
      const double d = (p1 - p4) * (p1 - p4) + 4 * p2 * p3;
      const double sd = std::sqrt(d);
      const double w1 = -(p1 + p4 + sd) / 2, w2 = -(p1 + p4 - sd) / 2;
      const double ph = (p4 - p1 + sd) / (2 * p2), ps = (p4 - p1 - sd) / (2 * p2);
      const cd a1 = step(k) * p2 * (1 - ps) / sd, a2 = step(k) * p2 * (ph - 1) / sd;
      const cd e1 = std::exp(cd(0, -w1 * t)), e2 = std::exp(cd(0, -w2 * t));
      return want_v ? ph * a1 * e1 + ps * a2 * e2 : a1 * e1 + a2 * e2;
    };
    note("case1 u", sup_diff(u1, naive_sum([&](long k) { return case1(k, false); }, n, grid)));
    note("case1 v", sup_diff(v1, naive_sum([&](long k) { return case1(k, true); }, n, grid)));

    // Case 2, free Schroedinger.
    const DispersionQuartet q2(k2(-1), {}, {}, k2(-1));
    const auto u2 = synthesize(riemann_case2_modes(q2, t, n).u, grid);
    note("case2", sup_diff(u2, naive_sum([&](long k) {
                                 return step(k) * std::exp(cd(0, -static_cast<double>(k * k) * t));
                               },
                               n, grid)));

    // General BV data with alpha = 0, beta = 1 (a = +-1).
    const DispersionQuartet q3(k2(-1), k2(1), k2(1), k2(-1));
    FourierData f(n), g(n);
    for (long k = -n; k <= n; ++k) {
      f[k] = cd(1.0 / (1.0 + static_cast<double>(k * k)), 0.1 * static_cast<double>(k) / (1.0 + std::abs(k)));
      g[k] = cd(std::cos(static_cast<double>(k)) / (1.0 + std::abs(k)), 0.0);
    }
    const auto m3 = linear_bv_modes(q3, f, g, t);
    auto bv = [&](long k, bool want_v) -> cd {
      const double a1 = 1, a2 = -1;
      const double P1 = eval(q3.phi[0], k) + a1 * eval(q3.phi[1], k);
      const double P2 = eval(q3.phi[0], k) + a2 * eval(q3.phi[1], k);
      const cd e1 = std::exp(cd(0, P1 * t)), e2 = std::exp(cd(0, P2 * t));
      if (!want_v) return ((a1 * e2 - a2 * e1) * f[k] + (e1 - e2) * g[k]) / (a1 - a2);
      return (a1 * a2 * (e2 - e1) * f[k] + (a1 * e1 - a2 * e2) * g[k]) / (a1 - a2);
    };
    note("bv u", sup_diff(synthesize(m3.u, grid), naive_sum([&](long k) { return bv(k, false); }, n, grid)));
    note("bv v", sup_diff(synthesize(m3.v, grid), naive_sum([&](long k) { return bv(k, true); }, n, grid)));

    // Manakov linear part via the 2x2 matrix exponential.
    const auto ml = manakov_linear_modes(f, g, t);
    const ManakovConstants c = manakov_constants(f, g);
    auto mk = [&](long k, bool want_v) -> cd {
      const double kk = static_cast<double>(k * k);
      const cd a = -kk + c.phi1_shift, d = -kk + c.phi3_shift, b = c.phi2, cc = c.phi4;
      const cd tau = 0.5 * (a + d);
      const cd s = std::sqrt(0.25 * (a - d) * (a - d) + b * cc);
      const cd ph = std::exp(cd(0, 1) * tau * t);
      const cd cs = std::cos(s * t);
      const cd sn = std::abs(s) > 0 ? std::sin(s * t) / s : cd(t);
      const cd uu = ph * (cs + cd(0, 1) * sn * (a - tau)), uv = ph * cd(0, 1) * sn * b;
      const cd vu = ph * cd(0, 1) * sn * cc, vv = ph * (cs + cd(0, 1) * sn * (d - tau));
      return want_v ? vu * f[k] + vv * g[k] : uu * f[k] + uv * g[k];
    };
    note("Lu", sup_diff(synthesize(ml.u, grid), naive_sum([&](long k) { return mk(k, false); }, n, grid)));
    note("Lv", sup_diff(synthesize(ml.v, grid), naive_sum([&](long k) { return mk(k, true); }, n, grid)));

    // Pointwise evaluation off the grid.
    double pe = 0.0;
    for (double x : {0.1, 1.234, 3.0, 5.9}) {
      cd s{};
      for (long k = -n; k <= n; ++k) s += f[k] * std::exp(cd(0.0, static_cast<double>(k) * x));
      pe = std::max(pe, std::abs(evaluate_at(f, x) - s));
    }
    note("evaluate_at", pe);
  }
  return worst;
}

bool quantization_sweep(std::string& detail) {
  const IntegralPolynomial phi1 = IntegralPolynomial::monomial(-1, 2);
  const IntegralPolynomial phi2 = IntegralPolynomial::monomial(1, 2);
  int mismatches = 0;
  int satisfied = 0;
  for (std::int64_t alpha = -10; alpha <= 10; ++alpha) {
    for (std::int64_t beta = -10; beta <= 10; ++beta) {
      const QuantizationVerdict v = quantization_check(phi1, phi2, beta * phi2, phi1 + alpha * phi2);
      const std::int64_t disc = alpha * alpha + 4 * beta;
      std::optional<std::int64_t> root;
      for (std::int64_t s = 0; s * s <= disc; ++s) {
        if (s * s == disc) root = s;
      }
      const bool expect = root && (alpha + *root) % 2 == 0;
      bool ok = v.satisfied == expect;
      if (expect && ok) {
        ++satisfied;
        const std::int64_t a1 = (alpha + *root) / 2, a2 = (alpha - *root) / 2;
        ok = v.a1 && v.a2 && *v.a1 == a1 && *v.a2 == a2 && *v.a1 + *v.a2 == alpha && *v.a1 * *v.a2 == -beta;
      }
      if (!expect && ok) {
        const auto want = disc < 0 ? QuantizationFailure::negative_discriminant : QuantizationFailure::non_integer_root;
        ok = v.failure_reason == want;
      }
      if (!ok) ++mismatches;
    }
  }
  detail += fmt("quantization sweep: %d satisfied, %d mismatches over 441 pairs", satisfied, mismatches);
  return mismatches == 0;
}

CriterionResult brute_force() {
  CriterionResult r;
  std::string detail;
  const double worst = naive_check_all(detail);
  const bool sweep_ok = quantization_sweep(detail);
  r.passed = worst <= 1e-13 && sweep_ok;
  r.detail = fmt("max deviation %.3g (<= 1e-13); ", worst) + detail;
  return r;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all{
      {1, "fractal dimension 3/2 (linear)", fractal_linear},
      {2, "fractal dimension 3/2 (Manakov)", fractal_manakov},
      {3, "rational-time quantization (linear two-component)", quantization_linear},
      {4, "conservation drift", conservation},
      {5, "f = g symmetry", symmetry},
      {6, "plane-wave exactness", plane_wave},
      {7, "linear oracle equivalence", linear_oracle},
      {8, "Weyl sum growth", weyl_growth},
      {9, "quantization-score ordering (Manakov)", score_ordering},
      {10, "nonlinear smoothing", smoothing},
      {11, "brute-force equivalence", brute_force},
  };
  return all;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %2d %s: ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str()) + r.detail +
         fmt(" (%.1f s)", r.seconds);
}

std::vector<CriterionResult> run_acceptance(std::span<const int> ids, std::ostream& log) {
  std::vector<CriterionResult> out;
  for (const Criterion& c : acceptance_criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.id = c.id;
    r.title = c.title;
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace talbot
