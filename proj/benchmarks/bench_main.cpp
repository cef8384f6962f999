#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "talbot/analysis.hpp"
#include "talbot/fft.hpp"
#include "talbot/initial_data.hpp"
#include "talbot/linear_solver.hpp"
#include "talbot/spectral_solver.hpp"

using namespace talbot;

static void BM_FftBatched(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Fft fft(n, 2);
  ComplexBuffer buf(2 * n, std::complex<double>(1.0, 0.5));
  for (auto _ : state) {
    fft.forward(buf.data());
    fft.backward(buf.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_FftBatched)->RangeMultiplier(4)->Range(512, 8192);

static void BM_Rk4Step(benchmark::State& state) {
  SolverConfig cfg;
  cfg.grid_size = static_cast<std::size_t>(state.range(0));
  ManakovSolver solver(cfg);
  const GridField f(sample_sigma1(cfg.grid_size));
  ManakovState s{f, f, 0.0};
  for (auto _ : state) {
    s = solver.rk4_step(s);
    benchmark::DoNotOptimize(s.u.values().data());
  }
}
BENCHMARK(BM_Rk4Step)->Arg(512)->Arg(4096);

static void BM_SynthesizeStep(benchmark::State& state) {
  const long n = state.range(0);
  const FourierData c = riemann_data(n);
  const UniformGrid grid(static_cast<std::size_t>(4 * n));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(c, grid));
}
BENCHMARK(BM_SynthesizeStep)->Arg(1 << 12)->Arg(1 << 16);

static void BM_Case2Modes(benchmark::State& state) {
  const DispersionQuartet q(IntegralPolynomial::monomial(-1, 2), {}, {}, IntegralPolynomial::monomial(-1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(riemann_case2_modes(q, TimePoint::rational(1, 10), state.range(0)));
}
BENCHMARK(BM_Case2Modes)->Arg(1 << 16);

static void BM_MinkowskiDimension(benchmark::State& state) {
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = kTwoPi * double(i) / double(w.size());
    for (int j = 1; j <= 14; ++j) w[i] += std::pow(2.0, -j / 2.0) * std::cos(std::ldexp(1.0, j) * x);
  }
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_dimension(w));
}
BENCHMARK(BM_MinkowskiDimension)->Arg(1 << 16)->Arg(1 << 18);

static void BM_DetectQuantization(benchmark::State& state) {
  const auto s = sample_sigma1(static_cast<std::size_t>(state.range(0)));
  std::vector<double> re(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) re[i] = s[i].real();
  for (auto _ : state) benchmark::DoNotOptimize(detect_quantization(re, 16, 4));
}
BENCHMARK(BM_DetectQuantization)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK_MAIN();
