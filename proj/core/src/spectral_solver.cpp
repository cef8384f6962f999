#include "talbot/spectral_solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <string>

#include "talbot/error.hpp"

namespace talbot {

namespace {

using cd = std::complex<double>;

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// NaN or Inf; an integer test so the OR reduction over a buffer vectorizes
inline bool exponent_saturated(double x) {
  constexpr std::uint64_t kExp = 0x7ff0000000000000ULL;
  return (std::bit_cast<std::uint64_t>(x) & kExp) == kExp;
}

}  // namespace

GridField::GridField(std::vector<cd> values) : values_(std::move(values)) {
  const std::size_t m = values_.size();
  if (!is_power_of_two(m) || m < kMinSize || m > kMaxSize) {
    throw Error(Errc::precondition, "grid field length must be a power of two in [128, 16384], got " +
                                        std::to_string(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!finite(values_[i])) throw Error(Errc::precondition, "non-finite sample at index " + std::to_string(i));
  }
}

double SolverConfig::default_dt(std::size_t grid_size) {
  const double half = static_cast<double>(grid_size / 2);
  return 0.5 / (half * half);
}

void SolverConfig::validate() const {
  if (!is_power_of_two(grid_size) || grid_size < GridField::kMinSize || grid_size > GridField::kMaxSize) {
    throw Error(Errc::precondition, "grid size must be a power of two in [128, 16384]");
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw Error(Errc::precondition, "dt must be positive");
  const double half = static_cast<double>(grid_size / 2);
  if (enforce_envelope && step() * half * half > 1.0) {
    throw Error(Errc::precondition, "dt = " + std::to_string(step()) + " exceeds the stability envelope dt (M/2)^2 <= 1");
  }
}

ConservedTriple conserved(std::span<const cd> u, std::span<const cd> v) {
  if (u.size() != v.size() || u.empty()) throw Error(Errc::grid_mismatch, "component lengths differ");
  double nu = 0.0;
  double nv = 0.0;
  cd in{};
  for (std::size_t m = 0; m < u.size(); ++m) {
    nu += std::norm(u[m]);
    nv += std::norm(v[m]);
    in += std::conj(u[m]) * v[m];
  }
  const double w = kTwoPi / static_cast<double>(u.size());
  return {w * nu, w * nv, w * in};
}

ConservedTriple conserved(const ManakovState& s) { return conserved(s.u.values(), s.v.values()); }

ManakovSolver::ManakovSolver(SolverConfig config)
    : config_(config), m_(config.grid_size), fft_((config.validate(), config.grid_size), 2) {
  k2_.resize(m_);
  nl_scale_.resize(m_);
  const long cutoff = static_cast<long>(m_) / 3;
  for (std::size_t j = 0; j < m_; ++j) {
    const long k = wavenumber(j, m_);
    k2_[j] = static_cast<double>(k) * static_cast<double>(k);
    nl_scale_[j] = !config_.dealias || std::abs(k) <= cutoff ? 1.0 / static_cast<double>(m_) : 0.0;
  }
  for (Buffer* b : {&k1_, &k2b_, &k3_, &k4_, &tmp_, &phys_}) b->assign(2 * m_, cd{});
}

void ManakovSolver::load(const ManakovState& s, Buffer& y) {
  if (s.u.size() != m_ || s.v.size() != m_) {
    throw Error(Errc::grid_mismatch, "state length does not match solver grid " + std::to_string(m_));
  }
  y.resize(2 * m_);
  std::copy(s.u.values().begin(), s.u.values().end(), y.begin());
  std::copy(s.v.values().begin(), s.v.values().end(), y.begin() + static_cast<std::ptrdiff_t>(m_));
  fft_.forward(y.data());
  const double scale = 1.0 / static_cast<double>(m_);
  for (auto& z : y) z *= scale;
}

ManakovState ManakovSolver::unload(const Buffer& y, double t) {
  Buffer p(y.begin(), y.end());
  fft_.backward(p.data());
  const auto mid = p.begin() + static_cast<std::ptrdiff_t>(m_);
  return {GridField({p.begin(), mid}), GridField({mid, p.end()}), t};
}

void ManakovSolver::evaluate(const Buffer& y, Buffer& out, double t, int stage) {
  const bool nonlinear = !config_.linear_only;
  if (nonlinear) {
    std::copy(y.begin(), y.end(), phys_.begin());
    fft_.backward(phys_.data());
    cd* pu = phys_.data();
    cd* pv = phys_.data() + m_;
    const double a = config_.alpha;
    const double b = config_.beta;
    const double g = config_.gamma;
    for (std::size_t m = 0; m < m_; ++m) {
      const double au = std::norm(pu[m]);
      const double av = std::norm(pv[m]);
      pu[m] *= a * au + b * av;
      pv[m] *= b * au + g * av;
    }
    fft_.forward(phys_.data());
  }
  // out = i (-k^2 y + s p), written out in real arithmetic so the loop vectorizes
  std::uint64_t non_finite = 0;
  for (std::size_t half = 0; half < 2; ++half) {
    const double* yr = reinterpret_cast<const double*>(y.data() + half * m_);
    const double* pr = reinterpret_cast<const double*>(phys_.data() + half * m_);
    double* o = reinterpret_cast<double*>(out.data() + half * m_);
    for (std::size_t j = 0; j < m_; ++j) {
      const double k2 = k2_[j];
      const double s = nonlinear ? nl_scale_[j] : 0.0;
      const double re = k2 * yr[2 * j + 1] - s * pr[2 * j + 1];
      const double im = -k2 * yr[2 * j] + s * pr[2 * j];
      o[2 * j] = re;
      o[2 * j + 1] = im;
      non_finite |= static_cast<std::uint64_t>(exponent_saturated(re) | exponent_saturated(im));
    }
  }
  if (non_finite != 0) {
    throw DivergedError(t, stage, "non-finite derivative in RK4 stage " + std::to_string(stage) + " at t = " +
                                      std::to_string(t));
  }
}

void ManakovSolver::step(Buffer& y, double t, double h) {
  const std::size_t n = 2 * m_;
  evaluate(y, k1_, t, 1);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = y[j] + (0.5 * h) * k1_[j];
  evaluate(tmp_, k2b_, t + 0.5 * h, 2);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = y[j] + (0.5 * h) * k2b_[j];
  evaluate(tmp_, k3_, t + 0.5 * h, 3);
  for (std::size_t j = 0; j < n; ++j) tmp_[j] = y[j] + h * k3_[j];
  evaluate(tmp_, k4_, t + h, 4);
  const double w = h / 6.0;
  for (std::size_t j = 0; j < n; ++j) y[j] += w * (k1_[j] + 2.0 * k2b_[j] + 2.0 * k3_[j] + k4_[j]);
  ++steps_;
}

SpectralPair ManakovSolver::rhs(const ManakovState& s) {
  Buffer y;
  load(s, y);
  Buffer out(2 * m_);
  evaluate(y, out, s.t, 0);
  const auto mid = out.begin() + static_cast<std::ptrdiff_t>(m_);
  return {{out.begin(), mid}, {mid, out.end()}};
}

ManakovState ManakovSolver::rk4_step(const ManakovState& s) {
  Buffer y;
  load(s, y);
  const double h = config_.step();
  step(y, s.t, h);
  return unload(y, s.t + h);
}

ManakovState ManakovSolver::advance(const ManakovState& s, double t_target, std::span<const Observer> observers) {
  if (!std::isfinite(t_target)) throw Error(Errc::precondition, "target time must be finite");
  const double t0 = s.t;
  const double span = t_target - t0;
  const double h = std::copysign(config_.step(), span);
  const double ratio = span / h;
  auto full = static_cast<std::size_t>(std::floor(ratio));
  // Treat a remainder within roundoff of a whole step as a whole step.
  if (ratio - static_cast<double>(full) > 1.0 - 1e-9) ++full;
  if (full > config_.max_steps) {
    throw Error(Errc::precondition, "run needs " + std::to_string(full) + " steps, above max_steps");
  }

  Buffer y;
  load(s, y);
  for (const Observer& o : observers) o.on_state(s);
  const double rest = t_target - (t0 + static_cast<double>(full) * h);
  const std::size_t total = full + (rest != 0.0 ? 1 : 0);
  auto notify = [&](std::size_t i, double t) {
    if (i == total) return;
    bool due = false;
    for (const Observer& o : observers) due = due || (o.stride > 0 && i % o.stride == 0);
    if (!due) return;
    const ManakovState now = unload(y, t);
    for (const Observer& o : observers) {
      if (o.stride > 0 && i % o.stride == 0) o.on_state(now);
    }
  };

  for (std::size_t i = 0; i < full; ++i) {
    step(y, t0 + static_cast<double>(i) * h, h);
    notify(i + 1, t0 + static_cast<double>(i + 1) * h);
  }
  if (rest != 0.0) step(y, t0 + static_cast<double>(full) * h, rest);

  ManakovState out = unload(y, t_target);
  if (total > 0) {
    for (const Observer& o : observers) o.on_state(out);
  }
  return out;
}

ManakovState simulate(const GridField& f, const GridField& g, const SolverConfig& config, double t_final,
                      std::span<const Observer> observers) {
  if (t_final < 0.0) throw Error(Errc::precondition, "t_final must be >= 0");
  ManakovSolver solver(config);
  return solver.advance(ManakovState{f, g, 0.0}, t_final, observers);
}

Observer ConservationMonitor::observer(std::size_t stride) {
  return Observer{stride, [this](const ManakovState& s) { record(s); }};
}

DriftReport ConservationMonitor::max_drift() const {
  DriftReport d;
  if (rows_.empty()) return d;
  const ConservedTriple& q0 = rows_.front().q;
  auto rel = [](double now, double start) {
    return start != 0.0 ? std::abs(now - start) / std::abs(start) : std::abs(now);
  };
  for (const Row& r : rows_) {
    d.norm_u = std::max(d.norm_u, rel(r.q.norm_u_sq, q0.norm_u_sq));
    d.norm_v = std::max(d.norm_v, rel(r.q.norm_v_sq, q0.norm_v_sq));
    d.inner_abs = std::max(d.inner_abs, rel(std::abs(r.q.inner_uv), std::abs(q0.inner_uv)));
  }
  return d;
}

}  // namespace talbot
