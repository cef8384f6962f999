#include "talbot/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "scenario_json.hpp"
#include "talbot/analysis.hpp"
#include "talbot/error.hpp"
#include "talbot/linear_solver.hpp"

#ifndef TALBOT_VERSION
#define TALBOT_VERSION "0.0.0"
#endif

namespace talbot {

using detail::json;
using cd = std::complex<double>;

std::string tool_version() { return TALBOT_VERSION; }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::io, "SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string time_label(const TimePoint& t) { return t.label(); }

std::string RunManifest::to_json() const {
  json j;
  j["scenario"] = scenario_name;
  j["scenario_hash"] = scenario_hash;
  j["tool_version"] = tool_version;
  j["determinism"] = determinism;
  j["status"] = status;
  if (!message.empty()) j["message"] = message;
  if (diverged_at) j["diverged_at"] = *diverged_at;
  j["files"] = json::array();
  for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return j.dump(2) + "\n";
}

std::size_t default_workers() {
  if (const char* env = std::getenv("TALBOT_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

namespace {

constexpr std::string_view kDeterminism =
    "no randomness and no wall-clock data; identical scenario and tool version give identical bytes";

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Collects per-time analyses and rendered files for one run.
class RunContext {
 public:
  RunContext(const Scenario& s, bool emit) : s_(s), emit_(emit) {}

  void add_file(std::string name, std::string content) {
    if (emit_) files_.emplace_back(std::move(name), std::move(content));
  }

  /// Snapshot, per-observable tables and requested analyses at one time.
  void record(const TimePoint& t, std::span<const double> x, std::span<const cd> u, std::span<const cd> v,
              const ManakovState* run = nullptr, const FourierData* f_hat = nullptr,
              const FourierData* g_hat = nullptr) {
    const std::string label = time_label(t);
    json rec;
    rec["time"] = label;
    rec["t"] = t.value();
    if (emit_) {
      add_file("t_" + label + ".csv", snapshot_table(x, u, v).str());
      for (Observable o : s_.analysis.observables) {
        CsvTable tab({"x", "u", "v"});
        for (std::size_t m = 0; m < x.size(); ++m) {
          const std::array<double, 3> row{x[m], observe(u[m], o), observe(v[m], o)};
          tab.add_numbers(row);
        }
        add_file(std::string(to_string(o)) + "_t_" + label + ".csv", tab.str());
      }
    }

    if (const auto& q = s_.analysis.quantization) {
      for (const auto& [name, field] : {std::pair{"u", u}, std::pair{"v", v}}) {
        const std::vector<double> obs = observe_all(field, q->observable);
        const QuantizationReport rep = detect_quantization(obs, q->q_max, q->gibbs_window);
        json jr;
        jr["observable"] = std::string(to_string(q->observable));
        jr["jumps"] = rep.jump_locations;
        jr["plateau_count"] = rep.plateau_count;
        jr["plateau_flatness"] = jnum(rep.plateau_flatness);
        jr["score"] = jnum(rep.score);
        if (rep.q_hypothesis) jr["q_hypothesis"] = *rep.q_hypothesis;
        rec["quantization"][name] = jr;
        if (std::string_view(name) == "u") {
          summary_.score = rep.score;
          summary_.jumps = rep.jump_locations.size();
        }
        if (emit_) {
          CsvTable tab({"index", "x"});
          for (std::size_t i = 0; i < rep.jump_indices.size(); ++i) {
            tab.add_row({std::to_string(rep.jump_indices[i]), format_number(rep.jump_locations[i])});
          }
          add_file("jumps_" + std::string(name) + "_t_" + label + ".csv", tab.str());
        }
      }
    }

    if (s_.analysis.dimension) {
      for (Observable o : s_.analysis.observables) {
        const std::vector<double> obs = observe_all(u, o);
        json jd;
        try {
          const DimensionEstimate est = minkowski_dimension(obs, s_.analysis.dimension_range);
          jd = {{"slope", jnum(est.slope)},
                {"r_squared", jnum(est.r_squared)},
                {"valid", est.valid},
                {"epsilon_min", est.scale_range.epsilon_min},
                {"epsilon_max", est.scale_range.epsilon_max},
                {"dropped_fine_scales", est.dropped_fine_scales}};
          if (o == Observable::re) {
            summary_.dimension_re = est.slope;
            summary_.r_squared = est.r_squared;
          }
          if (emit_) {
            CsvTable tab({"window", "epsilon", "count"});
            for (const auto& c : est.counts) {
              tab.add_row({std::to_string(c.window), format_number(c.epsilon), format_number(c.count)});
            }
            add_file("dimension_" + std::string(to_string(o)) + "_u_t_" + label + ".csv", tab.str());
          }
        } catch (const Error& e) {
          jd = {{"error", e.what()}};
        }
        rec["dimension"][std::string(to_string(o))] = jd;
      }
    }

    if (run && f_hat && g_hat && s_.analysis.smoothing) {
      const SmoothingReport sm = smoothing_diagnostic(*run, *f_hat, *g_hat, *s_.analysis.smoothing);
      rec["smoothing"] = {{"sup_residual_u", jnum(sm.sup_residual_u)}, {"sup_residual_v", jnum(sm.sup_residual_v)},
                          {"l2_residual_u", jnum(sm.l2_residual_u)},   {"l2_residual_v", jnum(sm.l2_residual_v)},
                          {"tail_u", jnum(sm.tail_u)},                 {"tail_v", jnum(sm.tail_v)},
                          {"tail_residual_u", jnum(sm.tail_residual_u)},
                          {"tail_residual_v", jnum(sm.tail_residual_v)}};
    }
    records_.push_back(std::move(rec));
  }

  void add_record(json rec) { records_.push_back(std::move(rec)); }
  RunSummary& summary() { return summary_; }

  RunResult finish() {
    if (!records_.empty()) {
      json doc;
      doc["scenario"] = s_.name;
      doc["kind"] = std::string(to_string(s_.kind));
      doc["records"] = records_;
      if (summary_.drift) {
        doc["drift"] = {{"norm_u", jnum(summary_.drift->norm_u)},
                        {"norm_v", jnum(summary_.drift->norm_v)},
                        {"inner_abs", jnum(summary_.drift->inner_abs)}};
      }
      add_file("summary.json", doc.dump() + "\n");
    }
    return {summary_, std::move(files_)};
  }

 private:
  static std::vector<double> observe_all(std::span<const cd> z, Observable o) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = observe(z[i], o);
    return out;
  }

  const Scenario& s_;
  bool emit_;
  std::vector<std::pair<std::string, std::string>> files_;
  json records_ = json::array();
  RunSummary summary_;
};

FourierData padded(const FourierData& c, long n) {
  if (c.truncation() == n) return c;
  FourierData out(n);
  for (long k = -c.truncation(); k <= c.truncation(); ++k) out[k] = c[k];
  return out;
}

bool degenerate_everywhere(const DispersionQuartet& q, long n) {
  if (q.has_offsets()) return false;
  for (long k = -n; k <= n; ++k) {
    if (*delta_exact(q, k) != 0) return false;
  }
  return true;
}

void run_linear(const Scenario& s, RunContext& ctx) {
  const UniformGrid grid(s.grid_size);
  const std::vector<double> x = grid.points();
  const bool bv = s.kind == ScenarioKind::linear_bv;
  FourierData f_hat;
  FourierData g_hat;
  if (bv) {
    f_hat = fourier_coefficients(s.f, s.truncation);
    g_hat = fourier_coefficients(s.g, s.truncation);
    const long n = std::max(f_hat.truncation(), g_hat.truncation());
    f_hat = padded(f_hat, n);
    g_hat = padded(g_hat, n);
  }
  const bool case2 = !bv && degenerate_everywhere(s.quartet, s.truncation);
  for (const TimePoint& t : s.times) {
    ModalSolution modes = bv      ? linear_bv_modes(s.quartet, f_hat, g_hat, t)
                          : case2 ? riemann_case2_modes(s.quartet, t, s.truncation)
                                  : riemann_case1_modes(s.quartet, t, s.truncation);
    const auto u = synthesize(modes.u, grid);
    const auto v = synthesize(modes.v, grid);
    ctx.record(t, x, u, v);
  }
}

void run_dimension_study(const Scenario& s, RunContext& ctx) {
  const UniformGrid grid(s.grid_size);
  const std::vector<double> x = grid.points();
  const FourierData f_hat = fourier_coefficients(s.f, s.truncation);
  for (const TimePoint& t : s.times) {
    const auto u = synthesize(free_evolution(s.polynomial, 0.0, f_hat, t), grid);
    ctx.record(t, x, u, u);
  }
}

void run_weyl(const Scenario& s, RunContext& ctx) {
  for (const TimePoint& t : s.times) {
    const WeylGrowth w = weyl_sum_growth(s.polynomial, t, s.n_list, s.x_resolution);
    CsvTable tab({"n", "sup"});
    json rows = json::array();
    for (const auto& r : w.rows) {
      tab.add_row({std::to_string(r.n), format_number(r.sup)});
      rows.push_back({{"n", r.n}, {"sup", r.sup}});
    }
    const std::string label = time_label(t);
    ctx.add_file("weyl_t_" + label + ".csv", tab.str());
    ctx.add_record({{"time", label}, {"t", t.value()}, {"gamma", jnum(w.gamma)},
                    {"x_resolution", w.x_resolution}, {"rows", rows}});
    ctx.summary().gamma = w.gamma;
    ctx.summary().sup = w.rows.back().sup;
  }
}

void run_manakov(const Scenario& s, RunContext& ctx) {
  const std::size_t m = s.solver.grid_size;
  const GridField f(grid_samples(s.f, m));
  const GridField g(grid_samples(s.g, m));
  const std::vector<double> x = UniformGrid(m).points();
  std::optional<FourierData> f_hat;
  std::optional<FourierData> g_hat;
  if (s.analysis.smoothing) {
    f_hat = FourierData::from_samples(f.values());
    g_hat = FourierData::from_samples(g.values());
  }

  ManakovSolver solver(s.solver);
  ConservationMonitor monitor;
  std::vector<Observer> observers;
  if (s.analysis.conservation_stride > 0) observers.push_back(monitor.observer(s.analysis.conservation_stride));

  auto flush_conservation = [&] {
    if (s.analysis.conservation_stride == 0) return;
    ctx.add_file("conservation.csv", conservation_table(monitor.rows()).str());
    ctx.summary().drift = monitor.max_drift();
  };

  ManakovState state{f, g, 0.0};
  try {
    for (const TimePoint& t : s.times) {
      state = solver.advance(state, t.value(), observers);
      ctx.record(t, x, state.u.values(), state.v.values(), &state, f_hat ? &*f_hat : nullptr,
                 g_hat ? &*g_hat : nullptr);
    }
  } catch (const DivergedError&) {
    flush_conservation();
    throw;
  }
  flush_conservation();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::io, "write failed: " + path.string());
}

RunManifest write_outputs(const Scenario& s, const std::filesystem::path& out_dir,
                          const std::vector<std::pair<std::string, std::string>>& files) {
  std::filesystem::create_directories(out_dir);
  RunManifest man;
  man.scenario_name = s.name;
  man.scenario_hash = sha256_hex(s.canonical_json);
  man.tool_version = tool_version();
  man.determinism = std::string(kDeterminism);
  for (const auto& [name, content] : files) {
    write_file(out_dir / name, content);
    man.files.push_back({name, sha256_hex(content), content.size()});
  }
  return man;
}

void run_into(const Scenario& s, RunContext& ctx) {
  if (s.times.empty()) return;
  switch (s.kind) {
    case ScenarioKind::linear_riemann:
    case ScenarioKind::linear_bv: run_linear(s, ctx); break;
    case ScenarioKind::manakov: run_manakov(s, ctx); break;
    case ScenarioKind::weyl_study: run_weyl(s, ctx); break;
    case ScenarioKind::dimension_study: run_dimension_study(s, ctx); break;
  }
}

}  // namespace

RunResult execute_scenario(const Scenario& s, bool emit_files) {
  RunContext ctx(s, emit_files);
  run_into(s, ctx);
  return ctx.finish();
}

RunManifest run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  RunContext ctx(s, true);
  std::optional<DivergedError> diverged;
  try {
    run_into(s, ctx);
  } catch (const DivergedError& e) {
    diverged = e;
  }
  const RunResult res = ctx.finish();
  RunManifest man = write_outputs(s, out_dir, res.files);
  if (diverged) {
    man.status = "diverged";
    man.message = diverged->what();
    man.diverged_at = diverged->time();
  }
  write_file(out_dir / "manifest.json", man.to_json());
  return man;
}

namespace {

std::string value_label(const json& v) {
  if (v.is_object()) return time_label(detail::parse_time(v, "value"));
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_number(v.get<double>());
  return v.dump();
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

double worst(const DriftReport& d) { return std::max({d.norm_u, d.norm_v, d.inner_abs}); }

}  // namespace

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, std::span<const std::string> values,
                            std::size_t workers) {
  const json doc = json::parse(base.canonical_json);
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        const json v = json::parse(values[i]);
        row.value = value_label(v);
        json d = doc;
        d.erase("sweep");
        switch (axis) {
          case SweepAxis::time: d["times"] = json::array({v}); break;
          case SweepAxis::truncation:
            if (base.kind == ScenarioKind::weyl_study) d["n_list"] = json::array({v});
            else d["truncation"] = v;
            break;
          case SweepAxis::dt: d["solver"]["dt"] = v; break;
          case SweepAxis::grid_size:
            if (base.kind == ScenarioKind::manakov) d["solver"]["grid_size"] = v;
            else d["grid_size"] = v;
            break;
        }
        const Scenario s = detail::scenario_from_json(d, "");
        row.summary = execute_scenario(s, false).summary;
        row.status = "ok";
      } catch (const DivergedError& e) {
        row.status = "diverged";
        row.message = e.what();
      } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
      }
    }
  };

  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, values.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1].summary.drift;
    const auto& b = rows[i].summary.drift;
    if (a && b && worst(*b) > 0.0) rows[i].drift_ratio = worst(*a) / worst(*b);
  }
  return rows;
}

CsvTable sweep_table(std::span<const SweepRow> rows) {
  CsvTable t({"value", "status", "score", "jumps", "dimension_re", "r_squared", "drift_norm_u", "drift_norm_v",
              "drift_inner", "drift_ratio", "gamma", "sup", "message"});
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    const auto& s = r.summary;
    t.add_row({r.value, r.status, opt(s.score), s.jumps ? std::to_string(*s.jumps) : "", opt(s.dimension_re),
               opt(s.r_squared), s.drift ? format_number(s.drift->norm_u) : "",
               s.drift ? format_number(s.drift->norm_v) : "", s.drift ? format_number(s.drift->inner_abs) : "",
               opt(r.drift_ratio), opt(s.gamma), opt(s.sup), csv_safe(r.message)});
  }
  return t;
}

RunManifest run_sweep(const Scenario& s, const std::filesystem::path& out_dir, std::size_t workers) {
  if (!s.sweep) throw SchemaError("sweep", 0, "scenario has no sweep block");
  const auto rows = sweep(s, s.sweep->axis, s.sweep->values, workers);
  const std::string name = "sweep_" + std::string(to_string(s.sweep->axis)) + ".csv";
  RunManifest man = write_outputs(s, out_dir, {{name, sweep_table(rows).str()}});
  write_file(out_dir / "manifest.json", man.to_json());
  return man;
}

}  // namespace talbot
