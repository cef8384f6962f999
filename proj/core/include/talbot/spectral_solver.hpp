#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "talbot/fft.hpp"
#include "talbot/fourier_data.hpp"

namespace talbot {

/// Samples of one component at x_m = 2 pi m / M.
class GridField {
 public:
  static constexpr std::size_t kMinSize = std::size_t{1} << 7;
  static constexpr std::size_t kMaxSize = std::size_t{1} << 14;

  GridField() = default;
  explicit GridField(std::vector<std::complex<double>> values);

  std::size_t size() const noexcept { return values_.size(); }
  UniformGrid grid() const { return UniformGrid(values_.size()); }
  std::span<const std::complex<double>> values() const noexcept { return values_; }
  const std::complex<double>& operator[](std::size_t m) const { return values_[m]; }

 private:
  std::vector<std::complex<double>> values_;
};

struct ManakovState {
  GridField u;
  GridField v;
  double t = 0.0;
};

struct SolverConfig {
  std::size_t grid_size = 512;
  /// 0 selects default_dt(grid_size).
  double dt = 0.0;
  bool dealias = false;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  bool linear_only = false;
  /// Reject dt (M/2)^2 > 1. Off only for runs that deliberately probe larger steps.
  bool enforce_envelope = true;
  std::size_t max_steps = 50'000'000;

  static double default_dt(std::size_t grid_size);
  double step() const { return dt > 0.0 ? dt : default_dt(grid_size); }
  void validate() const;
};

struct ConservedTriple {
  double norm_u_sq = 0.0;
  double norm_v_sq = 0.0;
  std::complex<double> inner_uv{};
};

/// 2 pi * mean over samples; exact for band-limited integrands.
ConservedTriple conserved(std::span<const std::complex<double>> u, std::span<const std::complex<double>> v);
ConservedTriple conserved(const ManakovState& s);

/// Spectral time derivative in DFT order (index j holds wavenumber(j, M)), coefficient normalization.
struct SpectralPair {
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> v;
};

struct Observer {
  /// Called on the initial state, every `stride` steps, and on the final state.
  std::size_t stride = 1;
  std::function<void(const ManakovState&)> on_state;
};

/// Classical RK4 on the Fourier-transformed Manakov system
///
///   u^_t = -i k^2 u^ + i F[(alpha |u|^2 + beta |v|^2) u],
///   v^_t = -i k^2 v^ + i F[(beta |u|^2 + gamma |v|^2) v],
///
/// with the cubic terms formed pointwise on the grid. One instance owns its
/// FFT plans and work buffers and must stay on one thread.
class ManakovSolver {
 public:
  explicit ManakovSolver(SolverConfig config);

  const SolverConfig& config() const noexcept { return config_; }

  SpectralPair rhs(const ManakovState& s);
  /// One step of size config().step().
  ManakovState rk4_step(const ManakovState& s);
  /// Steps from s.t to t_target (either direction); the last step is shortened to land exactly.
  ManakovState advance(const ManakovState& s, double t_target, std::span<const Observer> observers = {});

  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  using Buffer = ComplexBuffer;
  void load(const ManakovState& s, Buffer& y);
  ManakovState unload(const Buffer& y, double t);
  void evaluate(const Buffer& y, Buffer& out, double t, int stage);
  void step(Buffer& y, double t, double h);

  SolverConfig config_;
  std::size_t m_;
  Fft fft_;
  std::vector<double> k2_;
  std::vector<double> nl_scale_;  ///< 1/M on kept modes, 0 on masked ones
  Buffer k1_, k2b_, k3_, k4_, tmp_, phys_;
  std::size_t steps_ = 0;
};

/// Runs from (f, g) at t = 0 to t_final.
ManakovState simulate(const GridField& f, const GridField& g, const SolverConfig& config, double t_final,
                      std::span<const Observer> observers = {});

/// Relative changes against the first recorded triple.
struct DriftReport {
  double norm_u = 0.0;
  double norm_v = 0.0;
  double inner_abs = 0.0;
};

struct ConservationRow {
  double t;
  ConservedTriple q;
};

class ConservationMonitor {
 public:
  using Row = ConservationRow;

  void record(const ManakovState& s) { rows_.push_back({s.t, conserved(s)}); }
  Observer observer(std::size_t stride);
  const std::vector<Row>& rows() const noexcept { return rows_; }
  /// Maximum over the record of |Q(t) - Q(t0)| / |Q(t0)|.
  DriftReport max_drift() const;

 private:
  std::vector<Row> rows_;
};

}  // namespace talbot
