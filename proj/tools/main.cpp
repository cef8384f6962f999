#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "talbot/acceptance.hpp"
#include "talbot/error.hpp"
#include "talbot/harness.hpp"
#include "talbot/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kSchemaError = 2;
constexpr int kDiverged = 3;
constexpr int kAcceptanceFailed = 4;

fs::path resolve_scenario(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  for (const fs::path& candidate : {talbot::scenario_directory() / arg, talbot::scenario_directory() / (arg + ".json")}) {
    if (fs::exists(candidate)) return candidate;
  }
  throw talbot::SchemaError("scenario", 0, "scenario not found: " + arg);
}

std::vector<std::string> split_values(const std::string& s) {
  // "0.3,0.314,1pi/10" -> JSON texts; "<p>pi/<q>" becomes a rational time.
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto pi = item.find("pi/");
    if (pi != std::string::npos) {
      const std::string p = pi == 0 ? "1" : item.substr(0, pi);
      out.push_back("{\"p\":" + p + ",\"q\":" + item.substr(pi + 3) + "}");
    } else {
      out.push_back(item);
    }
  }
  return out;
}

void print_manifest(const talbot::RunManifest& m, const fs::path& out) {
  std::cout << m.scenario_name << ": " << m.files.size() << " file(s) in " << out.string() << ", status " << m.status
            << "\n";
  if (!m.message.empty()) std::cout << "  " << m.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Talbot-effect simulations for two-component dispersive systems"};
  app.set_version_flag("--version", talbot::tool_version());
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "talbot_out";
  std::vector<std::string> overrides;
  std::size_t workers = talbot::default_workers();

  auto* run = app.add_subcommand("run", "run one scenario and write CSV outputs plus manifest.json");
  run->add_option("--scenario", scenario, "scenario file or bundled scenario name")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--override", overrides, "dot-path override key=value (repeatable)");
  run->add_option("--workers", workers, "worker threads (unused by single runs)");

  std::string axis;
  std::string values;
  auto* sw = app.add_subcommand("sweep", "run a scenario over one axis and aggregate scalar summaries");
  sw->add_option("--scenario", scenario, "scenario file or bundled scenario name")->required();
  sw->add_option("--out", out_dir, "output directory");
  sw->add_option("--override", overrides, "dot-path override key=value (repeatable)");
  sw->add_option("--workers", workers, "worker threads (default: TALBOT_WORKERS or 1)");
  sw->add_option("--axis", axis, "time, N, dt or M (overrides the scenario's sweep block)");
  sw->add_option("--values", values, "comma-separated values; rational times as <p>pi/<q>");

  std::vector<int> criteria;
  auto* check = app.add_subcommand("check", "run the acceptance suite");
  check->add_option("--criterion", criteria, "criterion id to run (repeatable; default all)");

  auto* list = app.add_subcommand("list-scenarios", "list bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const fs::path path = resolve_scenario(scenario);
      const talbot::Scenario s = talbot::load_scenario(path, overrides);
      const talbot::RunManifest m = talbot::run_scenario(s, out_dir);
      print_manifest(m, out_dir);
      return m.diverged() ? kDiverged : 0;
    }
    if (*sw) {
      const fs::path path = resolve_scenario(scenario);
      std::vector<std::string> ov = overrides;
      if (!axis.empty()) ov.push_back("sweep.axis=\"" + axis + "\"");
      if (!values.empty()) {
        std::string arr = "sweep.values=[";
        const auto vs = split_values(values);
        for (std::size_t i = 0; i < vs.size(); ++i) arr += (i ? "," : "") + vs[i];
        ov.push_back(arr + "]");
      }
      const talbot::Scenario s = talbot::load_scenario(path, ov);
      const talbot::RunManifest m = talbot::run_sweep(s, out_dir, workers);
      print_manifest(m, out_dir);
      return 0;
    }
    if (*check) {
      const auto results = talbot::run_acceptance(criteria, std::cout);
      std::size_t failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : kAcceptanceFailed;
    }
    if (*list) {
      const fs::path dir = talbot::scenario_directory();
      std::vector<fs::path> files;
      if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
          if (e.path().extension() == ".json") files.push_back(e.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        try {
          const talbot::Scenario s = talbot::load_scenario(f);
          std::cout << f.stem().string() << "\t" << talbot::to_string(s.kind) << "\n";
        } catch (const talbot::Error& e) {
          std::cout << f.stem().string() << "\tinvalid: " << e.what() << "\n";
        }
      }
      return 0;
    }
  } catch (const talbot::SchemaError& e) {
    std::cerr << "schema error";
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << e.what() << "\n";
    return kSchemaError;
  } catch (const talbot::DivergedError& e) {
    std::cerr << "diverged at t = " << e.time() << ": " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
