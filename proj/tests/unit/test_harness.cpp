#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "talbot/csv.hpp"
#include "talbot/error.hpp"
#include "talbot/harness.hpp"
#include "talbot/scenario.hpp"

using namespace talbot;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kSmall = R"({
  "name": "small",
  "kind": "manakov",
  "initial_data": {"f": {"named": "sigma1"}, "g": {"named": "sigma2"}},
  "times": [0.001, {"p": 1, "q": 1000}],
  "solver": {"grid_size": 128},
  "analysis": {"observables": ["re", "abs"], "quantization": {"q_max": 4}, "conservation_stride": 5}
})";

SchemaError schema_error(std::string_view text, std::vector<std::string> overrides = {}) {
  try {
    (void)parse_scenario(text, overrides);
  } catch (const SchemaError& e) {
    return e;
  }
  FAIL("expected a schema error");
  return SchemaError("", 0, "");
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("talbot_unit_" + name);
  fs::remove_all(p);
  return p;
}

const std::string* find_file(const RunResult& r, const std::string& name) {
  for (const auto& [n, c] : r.files) {
    if (n == name) return &c;
  }
  return nullptr;
}

std::size_t data_rows(const std::string& csv) {
  return static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-300) == "1e-300");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b"});
  const std::vector<double> row{1.5, 2.0};
  t.add_numbers(row);
  t.add_row({"x", "y"});
  CHECK(t.str() == "a,b\n1.5,2\nx,y\n");
  CHECK_THROWS(t.add_row({"only"}));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(kSmall);
  CHECK(s.name == "small");
  CHECK(s.kind == ScenarioKind::manakov);
  REQUIRE(s.times.size() == 2);
  CHECK(s.times[1].is_rational());
  CHECK(s.times[1].as_rational()->q() == 1000);
  CHECK(s.solver.grid_size == 128);
  CHECK(s.analysis.observables.size() == 2);
  CHECK(s.analysis.quantization->gibbs_window == 4);
  CHECK(s.g.name == "sigma2");

  const std::vector<std::string> ov{"solver.grid_size=256", "name=renamed", "times.0=0.0005"};
  const Scenario o = parse_scenario(kSmall, ov);
  CHECK(o.solver.grid_size == 256);
  CHECK(o.name == "renamed");
  CHECK(o.times[0].value() == 0.0005);
  CHECK(o.canonical_json != s.canonical_json);
}

TEST_CASE("schema errors name the field and line") {
  std::string text = kSmall;
  text.replace(text.find("\"times\""), 7, "\"tmies\"");
  const SchemaError e = schema_error(text);
  CHECK(e.code() == Errc::schema);
  CHECK(std::string(e.what()).find("tmies") != std::string::npos);

  const SchemaError grid = schema_error(kSmall, {"solver.grid_size=100"});
  CHECK(grid.field().rfind("solver", 0) == 0);

  const SchemaError q = schema_error(kSmall, {"times.1.q=0"});
  CHECK(q.field() == "times[1].q");

  const SchemaError order = schema_error(kSmall, {"times.0=0.5"});
  CHECK(order.field().rfind("times", 0) == 0);

  const SchemaError bad_name = schema_error(kSmall, {"initial_data.f.named=sigma3"});
  CHECK(bad_name.field() == "initial_data.f.named");
  CHECK(bad_name.line() == 4);

  CHECK(schema_error("{ not json").line() == 1);
  CHECK(schema_error(kSmall, {"no_equals_sign"}).field() == "no_equals_sign");
  CHECK(schema_error(R"({"name": "x", "kind": "weyl_study", "times": [1.0]})").field() == "polynomial");
}

TEST_CASE("named data coefficients") {
  InitialDataSpec ramp;
  ramp.name = "linear_ramp";
  const FourierData c = fourier_coefficients(ramp, 50);
  // x/10 on [-pi, pi): i (-1)^k / (10 k)
  CHECK(std::abs(c[3] - std::complex<double>(0, -1.0 / 30)) < 1e-15);
  CHECK(std::abs(c[0]) == 0.0);

  InitialDataSpec s1;
  s1.name = "sigma1";
  const FourierData d = fourier_coefficients(s1, 9);
  CHECK(std::abs(d[0]) == 0.0);
  CHECK(std::abs(d[1] - std::complex<double>(0, 2 / M_PI)) < 1e-15);
}

TEST_CASE("runs are deterministic and checksummed") {
  const Scenario s = parse_scenario(kSmall);
  const fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  const RunManifest ma = run_scenario(s, a);
  const RunManifest mb = run_scenario(s, b);
  CHECK_FALSE(ma.diverged());
  REQUIRE(ma.files.size() == mb.files.size());
  for (std::size_t i = 0; i < ma.files.size(); ++i) {
    CHECK(ma.files[i].path == mb.files[i].path);
    CHECK(ma.files[i].sha256 == mb.files[i].sha256);
    std::ifstream in(a / ma.files[i].path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(sha256_hex(ss.str()) == ma.files[i].sha256);
  }
  CHECK(ma.to_json() == mb.to_json());
  CHECK(ma.scenario_hash == sha256_hex(s.canonical_json));

  // 2 times x (snapshot + 2 observables + 2 jump tables) + conservation + summary
  CHECK(ma.files.size() == 2 * 5 + 2);
  const json man = json::parse(ma.to_json());
  CHECK(man["status"] == "ok");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("empty time list") {
  const Scenario s = parse_scenario(kSmall, std::vector<std::string>{"times=[]"});
  const fs::path out = temp_dir("empty");
  const RunManifest m = run_scenario(s, out);
  CHECK(m.files.empty());
  CHECK(m.status == "ok");
  CHECK(fs::exists(out / "manifest.json"));
  fs::remove_all(out);
}

TEST_CASE("divergence is flagged in the manifest") {
  const std::vector<std::string> ov{"solver.dt=0.5", "solver.enforce_envelope=false", "times=[200.0]"};
  const Scenario s = parse_scenario(kSmall, ov);
  const fs::path out = temp_dir("diverged");
  const RunManifest m = run_scenario(s, out);
  CHECK(m.diverged());
  CHECK(m.diverged_at.has_value());
  fs::remove_all(out);
}

TEST_CASE("sweeps keep order and isolate failures") {
  const Scenario s = parse_scenario(kSmall);
  const std::vector<std::string> values{"256", "100", "128"};
  const auto rows = sweep(s, SweepAxis::grid_size, values, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == "256");
  CHECK(rows[0].status == "ok");
  CHECK(rows[1].status == "error");
  CHECK(rows[2].status == "ok");
  CHECK(rows[2].summary.score.has_value());
  CHECK(sweep_table(rows).rows() == 3);

  const auto serial = sweep(s, SweepAxis::grid_size, values, 1);
  CHECK(sweep_table(serial).str() == sweep_table(rows).str());
}

TEST_CASE("weyl and linear scenarios") {
  const Scenario w = parse_scenario(R"({
    "name": "w", "kind": "weyl_study", "polynomial": [0, 0, 1],
    "times": [0.0], "n_list": [8, 16, 32]
  })");
  const RunResult r = execute_scenario(w, true);
  REQUIRE(r.summary.gamma.has_value());
  CHECK(*r.summary.gamma == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(find_file(r, "weyl_t_0.csv") != nullptr);
  CHECK(data_rows(*find_file(r, "weyl_t_0.csv")) == 3);

  const Scenario lin = parse_scenario(R"({
    "name": "l", "kind": "linear_riemann",
    "dispersion": {"phi1": [0, 0, -1], "phi2": [0], "phi3": [0], "phi4": [0, 0, -1]},
    "times": [{"p": 1, "q": 2}], "truncation": 20000, "grid_size": 32768,
    "analysis": {"observables": ["re", "im"], "quantization": {"q_max": 4, "observable": "im"}}
  })");
  CHECK(lin.analysis.quantization->gibbs_window == 8);
  const RunResult lr = execute_scenario(lin, true);
  REQUIRE(lr.summary.jumps.has_value());
  CHECK(*lr.summary.jumps >= 2);
  CHECK(find_file(lr, "t_1pi_2.csv") != nullptr);
}

TEST_CASE("bundled scenarios parse") {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(scenario_directory())) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW((void)load_scenario(entry.path()));
    ++n;
  }
  CHECK(n >= 6);
}

TEST_CASE("snapshot scenario yields four snapshots of three observables") {
  const Scenario s = load_scenario(scenario_directory() / "manakov_sigma1_snapshots.json");
  const RunResult r = execute_scenario(s, true);
  std::size_t observable_tables = 0;
  for (const auto& [name, content] : r.files) {
    for (const char* o : {"re_t_", "im_t_", "abs_t_"}) {
      if (name.rfind(o, 0) == 0) ++observable_tables;
    }
  }
  CHECK(observable_tables == 12);
  CHECK(find_file(r, "re_t_1pi_10.csv") != nullptr);
  CHECK(find_file(r, "t_0.314.csv") != nullptr);
}

TEST_CASE("mixed step and ramp data shows jumps in v") {
  const Scenario s = load_scenario(scenario_directory() / "mixed_step_ramp.json");
  const RunResult r = execute_scenario(s, true);
  const std::string* jumps = find_file(r, "jumps_v_t_1pi_10.csv");
  REQUIRE(jumps != nullptr);
  CHECK(data_rows(*jumps) >= 2);
}
