#include "talbot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "talbot/error.hpp"
#include "talbot/fft.hpp"
#include "talbot/linear_solver.hpp"

namespace talbot {

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double b = sxy / sxx;
  const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {b, r2};
}

// ---------------------------------------------------------------------------
// Minkowski dimension

DimensionEstimate minkowski_dimension(std::span<const double> samples, std::optional<ScaleRange> range) {
  const std::size_t n = samples.size();
  if (!is_power_of_two(n) || n < 64) {
    throw Error(Errc::precondition, "dimension estimate needs a power-of-two sample count >= 64");
  }
  const double h = kTwoPi / static_cast<double>(n);
  const ScaleRange r = range.value_or(ScaleRange{4.0 * h, kTwoPi / 8.0});

  // lo/hi over columns [i w, (i+1) w], built by merging neighbouring columns.
  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = samples[i];
    const double b = samples[(i + 1) % n];
    lo[i] = std::min(a, b);
    hi[i] = std::max(a, b);
  }

  DimensionEstimate est;
  const double tiny = 1e-9 * h;
  for (std::size_t w = 1, cols = n; w <= n / 2; w *= 2) {
    const double eps = static_cast<double>(w) * h;
    if (eps >= r.epsilon_min - tiny && eps <= r.epsilon_max + tiny) {
      double count = 0.0;
      for (std::size_t i = 0; i < cols; ++i) count += std::max(1.0, std::ceil((hi[i] - lo[i]) / eps));
      est.counts.push_back({w, eps, count});
    }
    cols /= 2;
    for (std::size_t i = 0; i < cols; ++i) {
      lo[i] = std::min(lo[2 * i], lo[2 * i + 1]);
      hi[i] = std::max(hi[2 * i], hi[2 * i + 1]);
    }
  }

  auto fit_from = [&](std::size_t first) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = first; i < est.counts.size(); ++i) {
      x.push_back(-std::log(est.counts[i].epsilon));
      y.push_back(std::log(est.counts[i].count));
    }
    return fit_line(x, y);
  };

  if (est.counts.size() < 4) {
    throw Error(Errc::insufficient_scales,
                "only " + std::to_string(est.counts.size()) + " dyadic scales in range, need 4");
  }
  auto [slope, r2] = fit_from(0);
  if (r2 < 0.98 && est.counts.size() >= 6) {
    std::tie(slope, r2) = fit_from(2);
    est.dropped_fine_scales = 2;
  }
  est.slope = slope;
  est.r_squared = r2;
  est.scale_range = {est.counts[est.dropped_fine_scales].epsilon, est.counts.back().epsilon};
  est.valid = slope >= 0.9 && slope <= 2.1;
  return est;
}

// ---------------------------------------------------------------------------
// Weyl sums

WeylGrowth weyl_sum_growth(const IntegralPolynomial& p, const TimePoint& t, std::span<const long> n_list,
                           std::size_t x_resolution) {
  if (n_list.empty()) throw Error(Errc::precondition, "empty N list");
  const long n_max = *std::max_element(n_list.begin(), n_list.end());
  if (*std::min_element(n_list.begin(), n_list.end()) < 1) throw Error(Errc::precondition, "N must be >= 1");
  const std::size_t need = 8 * static_cast<std::size_t>(n_max);
  std::size_t res = x_resolution;
  if (res == 0) {
    res = 1;
    while (res < need) res *= 2;
  } else if (res < need) {
    throw Error(Errc::precondition, "x resolution below 8 N_max = " + std::to_string(need));
  }

  std::vector<std::complex<double>> phase(static_cast<std::size_t>(n_max) + 1);
  for (long k = 1; k <= n_max; ++k) phase[static_cast<std::size_t>(k)] = rotation(p(k), t);

  WeylGrowth out;
  out.x_resolution = res;
  Fft fft(res);
  ComplexBuffer buf(res);
  for (long n : n_list) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    for (long k = 1; k <= n; ++k) buf[static_cast<std::size_t>(k) % res] += phase[static_cast<std::size_t>(k)];
    fft.backward(buf.data());
    double sup = 0.0;
    for (const auto& z : buf) sup = std::max(sup, std::abs(z));
    out.rows.push_back({n, sup});
  }
  out.n_min = *std::min_element(n_list.begin(), n_list.end());
  out.n_max = n_max;
  if (out.rows.size() >= 2) {
    std::vector<double> x;
    std::vector<double> y;
    for (const WeylRow& row : out.rows) {
      x.push_back(std::log(static_cast<double>(row.n)));
      y.push_back(std::log(row.sup));
    }
    out.gamma = fit_line(x, y).first;
  } else {
    out.gamma = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantization

double lattice_distance(double x, long q) {
  const double cell = kPi / static_cast<double>(q);
  const double r = std::fmod(std::fmod(x, cell) + cell, cell);
  return std::min(r, cell - r);
}

QuantizationReport detect_quantization(std::span<const double> samples, long q_max, std::size_t gibbs_window) {
  const std::size_t n = samples.size();
  if (n < 4) throw Error(Errc::precondition, "too few samples for quantization detection");
  QuantizationReport rep;
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  rep.dynamic_range = *mx - *mn;
  // A range at roundoff level is a constant; the relative threshold would otherwise chase the noise.
  const double magnitude = std::max({1.0, std::abs(*mn), std::abs(*mx)});
  if (rep.dynamic_range <= 1e-12 * magnitude) {
    rep.plateau_count = 1;
    return rep;
  }

  std::vector<double> diff(n);
  for (std::size_t m = 0; m < n; ++m) diff[m] = std::abs(samples[(m + 1) % n] - samples[m]);
  std::vector<double> sorted = diff;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  const double median = sorted[n / 2];
  const double threshold = std::max(8.0 * median, 1e-9 * rep.dynamic_range);

  std::vector<std::size_t> cand;
  for (std::size_t m = 0; m < n; ++m) {
    if (diff[m] > threshold) cand.push_back(m);
  }

  // Cluster circularly: start after the widest gap so no cluster wraps.
  const std::size_t merge = std::max<std::size_t>(1, 2 * gibbs_window);
  if (!cand.empty()) {
    std::size_t start = 0;
    std::size_t widest = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const std::size_t next = cand[(i + 1) % cand.size()];
      const std::size_t gap = (next + n - cand[i]) % n == 0 ? n : (next + n - cand[i]) % n;
      if (gap > widest) {
        widest = gap;
        start = (i + 1) % cand.size();
      }
    }
    std::size_t best = cand[start];
    std::size_t prev = cand[start];
    for (std::size_t j = 1; j <= cand.size(); ++j) {
      const bool done = j == cand.size();
      const std::size_t c = done ? 0 : cand[(start + j) % cand.size()];
      if (!done && (c + n - prev) % n < merge) {
        if (diff[c] > diff[best]) best = c;
        prev = c;
        continue;
      }
      rep.jump_indices.push_back(best);
      if (!done) best = prev = c;
    }
    std::sort(rep.jump_indices.begin(), rep.jump_indices.end());
  }
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t m : rep.jump_indices) rep.jump_locations.push_back((static_cast<double>(m) + 0.5) * h);

  // Plateaus: samples strictly between consecutive jumps, trimmed by the Gibbs window.
  auto plateau_std = [&](std::size_t first, std::size_t len) {
    if (len == 0) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += samples[(first + i) % n];
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = samples[(first + i) % n] - mean;
      var += d * d;
    }
    return std::sqrt(var / static_cast<double>(len));
  };
  const std::size_t jumps = rep.jump_indices.size();
  if (jumps == 0) {
    rep.plateau_count = 1;
    rep.plateau_flatness = plateau_std(0, n);
  } else {
    for (std::size_t j = 0; j < jumps; ++j) {
      const std::size_t a = rep.jump_indices[j];
      const std::size_t b = rep.jump_indices[(j + 1) % jumps];
      // Samples a+1 .. b (circular); a single jump leaves one plateau of n samples.
      std::size_t len = jumps == 1 ? n : (b + n - a) % n;
      const std::size_t trim = 2 * gibbs_window;
      if (len <= trim) continue;
      len -= trim;
      ++rep.plateau_count;
      rep.plateau_flatness = std::max(rep.plateau_flatness, plateau_std(a + 1 + gibbs_window, len));
    }
  }
  rep.score = std::exp(-rep.plateau_flatness / rep.dynamic_range);

  const double tol = static_cast<double>(std::max<std::size_t>(1, gibbs_window)) * h;
  for (long q = 1; q <= q_max && !rep.jump_locations.empty(); ++q) {
    const bool aligned = std::all_of(rep.jump_locations.begin(), rep.jump_locations.end(),
                                     [&](double x) { return lattice_distance(x, q) <= tol; });
    if (aligned) {
      rep.q_hypothesis = q;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fourier tails

double fourier_tail_exponent(const FourierData& c, ModeRange range) {
  if (range.k_min < 1 || range.k_max > c.truncation() || range.k_max < 100 * range.k_min) {
    throw Error(Errc::precondition, "mode range must satisfy 1 <= k_min, 100 k_min <= k_max <= truncation");
  }
  double biggest = 0.0;
  for (long k = range.k_min; k <= range.k_max; ++k) {
    biggest = std::max({biggest, std::abs(c[k]), std::abs(c[-k])});
  }
  if (biggest == 0.0) throw Error(Errc::undefined_decay, "all coefficients in range vanish");
  const double floor = 1e-13 * biggest;

  std::vector<double> x;
  std::vector<double> y;
  for (long lo = range.k_min; lo <= range.k_max; lo *= 2) {
    const long hi = std::min(2 * lo - 1, range.k_max);
    std::vector<double> mags;
    for (long k = lo; k <= hi; ++k) {
      for (long s : {k, -k}) {
        const double a = std::abs(c[s]);
        if (a > floor) mags.push_back(a);
      }
    }
    if (mags.empty()) continue;
    const auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    double med = *mid;
    if (mags.size() % 2 == 0) med = 0.5 * (med + *std::max_element(mags.begin(), mid));
    x.push_back(0.5 * (std::log(static_cast<double>(lo)) + std::log(static_cast<double>(hi))));
    y.push_back(std::log(med));
  }
  if (x.size() < 2) throw Error(Errc::undefined_decay, "fewer than two populated dyadic bins");
  return -fit_line(x, y).first;
}

SmoothingReport smoothing_diagnostic(const ManakovState& run, const FourierData& f_hat, const FourierData& g_hat,
                                     ModeRange range) {
  const std::size_t m = run.u.size();
  if (run.v.size() != m || f_hat.truncation() != static_cast<long>(m / 2) ||
      g_hat.truncation() != static_cast<long>(m / 2)) {
    throw Error(Errc::grid_mismatch, "run grid and initial-data truncation differ");
  }
  const ModalSolution lin = manakov_linear_modes(f_hat, g_hat, run.t);
  const FourierData u_hat = FourierData::from_samples(run.u.values());
  const FourierData v_hat = FourierData::from_samples(run.v.values());
  const long n = u_hat.truncation();
  FourierData ru(n);
  FourierData rv(n);
  for (long k = -n; k <= n; ++k) {
    ru[k] = u_hat[k] - lin.u[k];
    rv[k] = v_hat[k] - lin.v[k];
  }
  const UniformGrid grid(m);
  auto sup = [&](const FourierData& r) {
    double s = 0.0;
    for (const auto& z : synthesize(r, grid)) s = std::max(s, std::abs(z));
    return s;
  };

  SmoothingReport rep;
  rep.sup_residual_u = sup(ru);
  rep.sup_residual_v = sup(rv);
  rep.l2_residual_u = std::sqrt(ru.norm_sq());
  rep.l2_residual_v = std::sqrt(rv.norm_sq());
  rep.tail_u = fourier_tail_exponent(u_hat, range);
  rep.tail_v = fourier_tail_exponent(v_hat, range);
  // A residual that vanishes identically (t = 0) has no defined decay.
  auto tail_or_inf = [&](const FourierData& r) {
    try {
      return fourier_tail_exponent(r, range);
    } catch (const Error& e) {
      if (e.code() != Errc::undefined_decay) throw;
      return std::numeric_limits<double>::infinity();
    }
  };
  rep.tail_residual_u = tail_or_inf(ru);
  rep.tail_residual_v = tail_or_inf(rv);
  return rep;
}

}  // namespace talbot
