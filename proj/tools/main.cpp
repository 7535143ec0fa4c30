#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "finsler/scenario.hpp"

namespace {

std::string load_scenario_text(const std::string& arg) {
  std::ifstream f(arg);
  if (f.good()) {
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  return finsler::bundled_scenario_text(arg);  // fall back to bundled ids
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler comparison engine: runs declarative verification scenarios"};
  app.require_subcommand(1);

  std::string config;
  finsler::RunOptions opts;
  uint64_t seed_value = 0;
  bool seed_set = false;

  auto* run = app.add_subcommand("run", "run a scenario (path to a config file or a bundled id)");
  run->add_option("config", config, "scenario config file or bundled scenario id")->required();
  run->add_option("--out-dir", opts.out_dir, "directory for reports and tables");
  run->add_option("--workers", opts.workers, "worker thread cap (0 = hardware)");
  run->add_option("--seed", seed_value, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--tolerance-scale", opts.tolerance_scale,
                  "multiply all check tolerances by this factor");

  std::string filter;
  auto* list = app.add_subcommand("list", "list bundled scenarios");
  list->add_option("--check", filter, "only scenarios that include this check name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& [id, desc] : finsler::bundled_scenario_index()) {
        if (!filter.empty()) {
          finsler::Scenario sc = finsler::parse_scenario(finsler::bundled_scenario_text(id));
          auto names = sc.list("checks", "names");
          if (std::find(names.begin(), names.end(), filter) == names.end()) continue;
        }
        std::cout << id << "  -  " << desc << "\n";
      }
      return 0;
    }
    if (seed_set) opts.seed = seed_value;
    finsler::Scenario sc = finsler::parse_scenario(load_scenario_text(config));
    finsler::ScenarioResult result = finsler::run_scenario(sc, opts);
    int failed = 0;
    for (const auto& c : result.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << result.id << "." << c.check
                << "  measured=" << c.measured << " bound=" << c.bound
                << " margin=" << c.margin << (c.conditional ? "  (conditional)" : "") << "\n";
      if (!c.pass) ++failed;
    }
    for (const auto& inv : result.invariants) {
      std::cout << (inv.pass ? "[PASS] " : "[FAIL] ") << result.id << ".invariant."
                << inv.name << "  max_violation=" << inv.max_violation
                << " tolerance=" << inv.tolerance << "\n";
      if (!inv.pass) ++failed;
    }
    for (const auto& note : result.notes) std::cout << "note: " << note << "\n";
    std::cout << (result.pass ? "PASS " : "FAIL ") << result.id << " (" << failed
              << " failing checks)\n";
    return result.pass ? 0 : 1;
  } catch (const finsler::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == finsler::Err::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
