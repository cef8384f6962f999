#include "talbot/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scenario_json.hpp"
#include "talbot/error.hpp"
#include "talbot/linear_solver.hpp"

#ifndef TALBOT_DEFAULT_SCENARIO_DIR
#define TALBOT_DEFAULT_SCENARIO_DIR "scenarios"
#endif

namespace talbot {

using detail::json;

std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::linear_riemann: return "linear_riemann";
    case ScenarioKind::linear_bv: return "linear_bv";
    case ScenarioKind::manakov: return "manakov";
    case ScenarioKind::weyl_study: return "weyl_study";
    case ScenarioKind::dimension_study: return "dimension_study";
  }
  return "unknown";
}

std::string_view to_string(Observable o) noexcept {
  switch (o) {
    case Observable::re: return "re";
    case Observable::im: return "im";
    case Observable::abs: return "abs";
  }
  return "unknown";
}

double observe(std::complex<double> z, Observable o) noexcept {
  switch (o) {
    case Observable::re: return z.real();
    case Observable::im: return z.imag();
    case Observable::abs: return std::abs(z);
  }
  return 0.0;
}

std::string_view to_string(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::time: return "time";
    case SweepAxis::truncation: return "N";
    case SweepAxis::dt: return "dt";
    case SweepAxis::grid_size: return "M";
  }
  return "unknown";
}

std::vector<std::complex<double>> grid_samples(const InitialDataSpec& spec, std::size_t m) {
  std::vector<std::complex<double>> out;
  switch (spec.source) {
    case InitialDataSpec::Source::named:
      if (spec.name == "sigma") out = sample_sigma(m, spec.sampling);
      else if (spec.name == "sigma1") out = sample_sigma1(m, spec.sampling);
      else if (spec.name == "sigma2") out = sample_sigma2(m, spec.sampling);
      else if (spec.name == "linear_ramp") out = sample_linear_ramp(m, spec.sampling);
      else throw Error(Errc::precondition, "unknown initial data '" + spec.name + "'");
      break;
    case InitialDataSpec::Source::coefficients:
      out = synthesize(fourier_coefficients(spec, 0), UniformGrid(m));
      break;
    case InitialDataSpec::Source::samples:
      if (spec.samples.size() != m) {
        throw Error(Errc::grid_mismatch, "initial samples have length " + std::to_string(spec.samples.size()) +
                                             ", grid has " + std::to_string(m));
      }
      out = spec.samples;
      break;
    case InitialDataSpec::Source::plane_wave: {
      const UniformGrid grid(m);
      out.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double phase = static_cast<double>(spec.wavenumber) * grid.x(i);
        out[i] = spec.amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
      }
      break;
    }
  }
  for (auto& z : out) z *= spec.scale;
  return out;
}

FourierData fourier_coefficients(const InitialDataSpec& spec, long truncation) {
  using cd = std::complex<double>;
  FourierData c;
  switch (spec.source) {
    case InitialDataSpec::Source::named: {
      c = FourierData(truncation);
      for (long k = -truncation; k <= truncation; ++k) {
        if (spec.name == "sigma") {
          c[k] = riemann_coefficient(k);
        } else if (spec.name == "sigma1" || spec.name == "sigma2") {
          cd v = 2.0 * riemann_coefficient(k);
          if (k == 0) v -= 1.0;
          c[k] = spec.name == "sigma2" ? v / 10.0 : v;
        } else if (spec.name == "linear_ramp") {
          // x/10 on [-pi, pi): i (-1)^k / (10 k)
          if (k != 0) c[k] = cd(0.0, (k % 2 == 0 ? 1.0 : -1.0) / (10.0 * static_cast<double>(k)));
        } else {
          throw Error(Errc::precondition, "unknown initial data '" + spec.name + "'");
        }
      }
      break;
    }
    case InitialDataSpec::Source::coefficients: {
      long n = truncation;
      for (const auto& [k, v] : spec.coefficients) n = std::max(n, std::abs(k));
      c = FourierData(n);
      for (const auto& [k, v] : spec.coefficients) c[k] += v;
      break;
    }
    case InitialDataSpec::Source::samples:
      c = FourierData::from_samples(std::span<const cd>(spec.samples));
      break;
    case InitialDataSpec::Source::plane_wave:
      c = FourierData(std::max(truncation, std::abs(spec.wavenumber)));
      c[spec.wavenumber] = spec.amplitude;
      break;
  }
  if (spec.scale != 1.0) {
    FourierData scaled(c.truncation());
    for (long k = -c.truncation(); k <= c.truncation(); ++k) scaled[k] = spec.scale * c[k];
    return scaled;
  }
  return c;
}

std::filesystem::path scenario_directory() {
  if (const char* env = std::getenv("TALBOT_SCENARIO_DIR"); env && *env) return env;
  return TALBOT_DEFAULT_SCENARIO_DIR;
}

namespace detail {

namespace {

std::size_t line_at(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Best-effort line of a dot path: follow the key names in order through the text.
std::size_t line_of(std::string_view text, const std::string& path) {
  std::size_t pos = 0;
  bool found = false;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    const auto bracket = part.find('[');
    const std::string key = part.substr(0, bracket);
    if (key.empty() || std::all_of(key.begin(), key.end(), ::isdigit)) continue;
    const auto hit = text.find("\"" + key + "\"", pos);
    if (hit == std::string_view::npos) break;
    pos = hit;
    found = true;
  }
  return found ? line_at(text, pos) : 0;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw SchemaError(field, line_of(text_, field), field + ": " + msg);
  }

  const json& require(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.contains(key)) fail(join(path, key), "required field missing");
    return obj.at(key);
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) const {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(join(path, k), "unknown field");
    }
  }

  std::int64_t integer(const json& j, const std::string& field) const {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<std::int64_t>();
  }

  std::size_t positive(const json& j, const std::string& field) const {
    const auto v = integer(j, field);
    if (v <= 0) fail(field, "expected a positive integer");
    return static_cast<std::size_t>(v);
  }

  double number(const json& j, const std::string& field) const {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
  }

  bool boolean(const json& j, const std::string& field) const {
    if (!j.is_boolean()) fail(field, "expected true or false");
    return j.get<bool>();
  }

  std::string string(const json& j, const std::string& field) const {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
  }

  std::complex<double> complex(const json& j, const std::string& field) const {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(field, "expected a number or [re, im]");
  }

  IntegralPolynomial polynomial(const json& j, const std::string& field) const {
    if (!j.is_array()) fail(field, "expected an integer coefficient array [c0, c1, ...]");
    std::vector<std::int64_t> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(integer(j[i], field + "[" + std::to_string(i) + "]"));
    try {
      return IntegralPolynomial(c);
    } catch (const Error& e) {
      fail(field, e.what());
    }
  }

  TimePoint time(const json& j, const std::string& field) const {
    if (j.is_number()) {
      const double t = j.get<double>();
      if (!std::isfinite(t)) fail(field, "time must be finite");
      return t;
    }
    if (j.is_object()) {
      only_keys(j, {"p", "q"}, field);
      const auto p = integer(require(j, "p", field), join(field, "p"));
      const auto q = integer(require(j, "q", field), join(field, "q"));
      if (q <= 0) fail(join(field, "q"), "q must be positive");
      return TimePoint::rational(p, q);
    }
    fail(field, "expected a number or {\"p\": int, \"q\": int}");
  }

  Observable observable(const json& j, const std::string& field) const {
    const std::string s = string(j, field);
    if (s == "re") return Observable::re;
    if (s == "im") return Observable::im;
    if (s == "abs") return Observable::abs;
    fail(field, "expected one of re, im, abs");
  }

  InitialDataSpec initial(const json& j, const std::string& field) const {
    InitialDataSpec s;
    if (j.is_string()) {
      s.name = j.get<std::string>();
      check_name(s.name, field);
      return s;
    }
    only_keys(j, {"named", "coefficients", "samples", "plane_wave", "sampling", "scale"}, field);
    int sources = 0;
    if (j.contains("named")) {
      ++sources;
      s.source = InitialDataSpec::Source::named;
      s.name = string(j["named"], join(field, "named"));
      check_name(s.name, join(field, "named"));
    }
    if (j.contains("coefficients")) {
      ++sources;
      s.source = InitialDataSpec::Source::coefficients;
      const std::string f = join(field, "coefficients");
      const json& arr = j["coefficients"];
      if (!arr.is_array()) fail(f, "expected [[k, re, im], ...]");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string fi = f + "[" + std::to_string(i) + "]";
        const json& e = arr[i];
        if (!e.is_array() || e.size() < 2 || e.size() > 3) fail(fi, "expected [k, re] or [k, re, im]");
        const long k = integer(e[0], fi);
        const double re = number(e[1], fi);
        const double im = e.size() == 3 ? number(e[2], fi) : 0.0;
        s.coefficients.emplace_back(k, std::complex<double>(re, im));
      }
    }
    if (j.contains("samples")) {
      ++sources;
      s.source = InitialDataSpec::Source::samples;
      const std::string f = join(field, "samples");
      if (!j["samples"].is_array()) fail(f, "expected an array of samples");
      for (std::size_t i = 0; i < j["samples"].size(); ++i) {
        s.samples.push_back(complex(j["samples"][i], f + "[" + std::to_string(i) + "]"));
      }
    }
    if (j.contains("plane_wave")) {
      ++sources;
      s.source = InitialDataSpec::Source::plane_wave;
      const std::string f = join(field, "plane_wave");
      const json& pw = j["plane_wave"];
      only_keys(pw, {"k", "amplitude"}, f);
      if (pw.contains("k")) s.wavenumber = integer(pw["k"], join(f, "k"));
      if (pw.contains("amplitude")) s.amplitude = complex(pw["amplitude"], join(f, "amplitude"));
    }
    if (sources != 1) fail(field, "give exactly one of named, coefficients, samples, plane_wave");
    if (j.contains("sampling")) {
      const std::string f = join(field, "sampling");
      const std::string v = string(j["sampling"], f);
      if (v == "midpoint") s.sampling = StepSampling::midpoint;
      else if (v == "left_closed") s.sampling = StepSampling::left_closed;
      else fail(f, "expected midpoint or left_closed");
    }
    if (j.contains("scale")) s.scale = number(j["scale"], join(field, "scale"));
    return s;
  }

 private:
  void check_name(const std::string& name, const std::string& field) const {
    if (name != "sigma" && name != "sigma1" && name != "sigma2" && name != "linear_ramp") {
      fail(field, "unknown named data '" + name + "' (sigma, sigma1, sigma2, linear_ramp)");
    }
  }

  std::string_view text_;
};

}  // namespace

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("<document>", line_at(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SchemaError(assignment, 0, "override must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      if (p.empty() || !std::all_of(p.begin(), p.end(), ::isdigit)) {
        throw SchemaError(path, 0, "array index expected at '" + p + "'");
      }
      const auto idx = static_cast<std::size_t>(std::stoul(p));
      if (idx >= node->size()) throw SchemaError(path, 0, "index " + p + " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object() && !node->is_null()) throw SchemaError(path, 0, "cannot descend into a scalar");
      node = &(*node)[p];
    }
    if (last) *node = value;
  }
}

TimePoint parse_time(const json& j, const std::string& field) { return Reader("").time(j, field); }

Scenario scenario_from_json(const json& doc, std::string_view text) {
  const Reader r(text);
  r.only_keys(doc,
              {"name", "kind", "description", "dispersion", "polynomial", "initial_data", "times", "truncation",
               "grid_size", "solver", "n_list", "x_resolution", "analysis", "sweep"},
              "");
  Scenario s;
  s.name = r.string(r.require(doc, "name", ""), "name");
  const std::string kind = r.string(r.require(doc, "kind", ""), "kind");
  if (kind == "linear_riemann") s.kind = ScenarioKind::linear_riemann;
  else if (kind == "linear_bv") s.kind = ScenarioKind::linear_bv;
  else if (kind == "manakov") s.kind = ScenarioKind::manakov;
  else if (kind == "weyl_study") s.kind = ScenarioKind::weyl_study;
  else if (kind == "dimension_study") s.kind = ScenarioKind::dimension_study;
  else r.fail("kind", "expected linear_riemann, linear_bv, manakov, weyl_study or dimension_study");

  const bool linear = s.kind == ScenarioKind::linear_riemann || s.kind == ScenarioKind::linear_bv;
  if (linear) {
    const json& d = r.require(doc, "dispersion", "");
    r.only_keys(d, {"phi1", "phi2", "phi3", "phi4"}, "dispersion");
    s.quartet = DispersionQuartet(r.polynomial(r.require(d, "phi1", "dispersion"), "dispersion.phi1"),
                                  r.polynomial(r.require(d, "phi2", "dispersion"), "dispersion.phi2"),
                                  r.polynomial(r.require(d, "phi3", "dispersion"), "dispersion.phi3"),
                                  r.polynomial(r.require(d, "phi4", "dispersion"), "dispersion.phi4"));
  } else if (doc.contains("dispersion")) {
    r.fail("dispersion", "only used by linear kinds");
  }
  if (s.kind == ScenarioKind::weyl_study || s.kind == ScenarioKind::dimension_study) {
    s.polynomial = r.polynomial(r.require(doc, "polynomial", ""), "polynomial");
  }

  if (doc.contains("initial_data")) {
    const json& id = doc["initial_data"];
    r.only_keys(id, {"f", "g"}, "initial_data");
    if (id.contains("f")) s.f = r.initial(id["f"], "initial_data.f");
    if (id.contains("g")) s.g = r.initial(id["g"], "initial_data.g");
    else s.g = s.f;
  } else if (s.kind == ScenarioKind::linear_bv || s.kind == ScenarioKind::manakov ||
             s.kind == ScenarioKind::dimension_study) {
    r.fail("initial_data", "required field missing");
  }

  if (doc.contains("times")) {
    const json& ts = doc["times"];
    if (!ts.is_array()) r.fail("times", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string f = "times[" + std::to_string(i) + "]";
      s.times.push_back(r.time(ts[i], f));
      if (s.times.back().value() < 0.0) r.fail(f, "times must be >= 0");
      if (i > 0 && s.times[i].value() < s.times[i - 1].value()) r.fail(f, "times must be sorted ascending");
    }
  } else if (s.kind != ScenarioKind::weyl_study) {
    r.fail("times", "required field missing");
  }

  if (doc.contains("truncation")) s.truncation = static_cast<long>(r.positive(doc["truncation"], "truncation"));
  if (doc.contains("grid_size")) {
    s.grid_size = r.positive(doc["grid_size"], "grid_size");
    if (!is_power_of_two(s.grid_size) || s.grid_size < 2) r.fail("grid_size", "must be a power of two");
  }

  if (doc.contains("solver")) {
    const json& sv = doc["solver"];
    r.only_keys(sv, {"grid_size", "dt", "dealias", "coupling", "linear_only", "enforce_envelope", "max_steps"},
                "solver");
    if (sv.contains("grid_size")) s.solver.grid_size = r.positive(sv["grid_size"], "solver.grid_size");
    if (sv.contains("dt")) s.solver.dt = r.number(sv["dt"], "solver.dt");
    if (sv.contains("dealias")) s.solver.dealias = r.boolean(sv["dealias"], "solver.dealias");
    if (sv.contains("linear_only")) s.solver.linear_only = r.boolean(sv["linear_only"], "solver.linear_only");
    if (sv.contains("enforce_envelope")) {
      s.solver.enforce_envelope = r.boolean(sv["enforce_envelope"], "solver.enforce_envelope");
    }
    if (sv.contains("max_steps")) s.solver.max_steps = r.positive(sv["max_steps"], "solver.max_steps");
    if (sv.contains("coupling")) {
      const json& c = sv["coupling"];
      if (!c.is_array() || c.size() != 3) r.fail("solver.coupling", "expected [alpha, beta, gamma]");
      s.solver.alpha = r.number(c[0], "solver.coupling");
      s.solver.beta = r.number(c[1], "solver.coupling");
      s.solver.gamma = r.number(c[2], "solver.coupling");
    }
    try {
      s.solver.validate();
    } catch (const Error& e) {
      r.fail("solver", e.what());
    }
  }

  if (doc.contains("n_list")) {
    const json& nl = doc["n_list"];
    if (!nl.is_array() || nl.empty()) r.fail("n_list", "expected a non-empty integer array");
    for (std::size_t i = 0; i < nl.size(); ++i) {
      s.n_list.push_back(static_cast<long>(r.positive(nl[i], "n_list[" + std::to_string(i) + "]")));
    }
  } else if (s.kind == ScenarioKind::weyl_study) {
    r.fail("n_list", "required field missing");
  }
  if (doc.contains("x_resolution")) s.x_resolution = r.positive(doc["x_resolution"], "x_resolution");

  if (doc.contains("analysis")) {
    const json& a = doc["analysis"];
    r.only_keys(a, {"observables", "quantization", "dimension", "conservation_stride", "smoothing"}, "analysis");
    if (a.contains("observables")) {
      s.analysis.observables.clear();
      const json& o = a["observables"];
      if (!o.is_array()) r.fail("analysis.observables", "expected an array");
      for (std::size_t i = 0; i < o.size(); ++i) {
        s.analysis.observables.push_back(r.observable(o[i], "analysis.observables[" + std::to_string(i) + "]"));
      }
    }
    if (a.contains("quantization")) {
      const json& q = a["quantization"];
      r.only_keys(q, {"q_max", "gibbs_window", "observable"}, "analysis.quantization");
      QuantizationRequest req;
      if (s.kind == ScenarioKind::manakov) req.gibbs_window = 4;
      else req.gibbs_window = 8;
      if (q.contains("q_max")) req.q_max = static_cast<long>(r.integer(q["q_max"], "analysis.quantization.q_max"));
      if (q.contains("gibbs_window")) {
        req.gibbs_window = static_cast<std::size_t>(r.integer(q["gibbs_window"], "analysis.quantization.gibbs_window"));
      }
      if (q.contains("observable")) req.observable = r.observable(q["observable"], "analysis.quantization.observable");
      s.analysis.quantization = req;
    }
    if (a.contains("dimension")) {
      const json& d = a["dimension"];
      if (d.is_boolean()) {
        s.analysis.dimension = d.get<bool>();
      } else {
        r.only_keys(d, {"epsilon_min", "epsilon_max"}, "analysis.dimension");
        s.analysis.dimension = true;
        s.analysis.dimension_range = ScaleRange{r.number(r.require(d, "epsilon_min", "analysis.dimension"),
                                                         "analysis.dimension.epsilon_min"),
                                                r.number(r.require(d, "epsilon_max", "analysis.dimension"),
                                                         "analysis.dimension.epsilon_max")};
      }
    }
    if (a.contains("conservation_stride")) {
      s.analysis.conservation_stride =
          static_cast<std::size_t>(r.integer(a["conservation_stride"], "analysis.conservation_stride"));
    }
    if (a.contains("smoothing")) {
      const json& sm = a["smoothing"];
      r.only_keys(sm, {"k_min", "k_max"}, "analysis.smoothing");
      s.analysis.smoothing = ModeRange{static_cast<long>(r.positive(r.require(sm, "k_min", "analysis.smoothing"),
                                                                    "analysis.smoothing.k_min")),
                                       static_cast<long>(r.positive(r.require(sm, "k_max", "analysis.smoothing"),
                                                                    "analysis.smoothing.k_max"))};
    }
  }

  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    r.only_keys(sw, {"axis", "values"}, "sweep");
    SweepSpec spec;
    const std::string axis = r.string(r.require(sw, "axis", "sweep"), "sweep.axis");
    if (axis == "time") spec.axis = SweepAxis::time;
    else if (axis == "N") spec.axis = SweepAxis::truncation;
    else if (axis == "dt") spec.axis = SweepAxis::dt;
    else if (axis == "M") spec.axis = SweepAxis::grid_size;
    else r.fail("sweep.axis", "expected time, N, dt or M");
    const json& vals = r.require(sw, "values", "sweep");
    if (!vals.is_array()) r.fail("sweep.values", "expected an array");
    for (const auto& v : vals) spec.values.push_back(v.dump());
    s.sweep = spec;
  }

  s.canonical_json = doc.dump();
  return s;
}

}  // namespace detail

Scenario parse_scenario(std::string_view text, std::span<const std::string> overrides) {
  json doc = detail::parse_document(text);
  for (const auto& o : overrides) detail::apply_override(doc, o);
  return detail::scenario_from_json(doc, text);
}

Scenario load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot read scenario " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), overrides);
}

}  // namespace talbot
