#pragma once

#include <map>
#include <optional>

#include "finsler/families.hpp"
#include "finsler/submanifold.hpp"
#include "finsler/volume.hpp"

namespace finsler {

// One declarative scenario: a metric family, an optional submanifold, a set
// of named checks, and numeric configuration. Parsed from a small
// section/key-value text format:
//
//   id = sphere-point
//   [metric]
//   family = round-sphere
//   [checks]
//   names = invariants, thm_1_1
//   [numeric]
//   seed = 42
struct Scenario {
  std::string id;
  std::string description;
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string str(const std::string& section, const std::string& key,
                  const std::string& dflt = "") const;
  double num(const std::string& section, const std::string& key, double dflt) const;
  int integer(const std::string& section, const std::string& key, int dflt) const;
  std::vector<std::string> list(const std::string& section, const std::string& key) const;
  std::map<std::string, double> numeric_params(const std::string& section) const;
};

Scenario parse_scenario(const std::string& text);

struct RunOptions {
  std::string out_dir = "out";
  int workers = 0;
  std::optional<uint64_t> seed;
  double tolerance_scale = 1.0;
};

struct InvariantResult {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  bool pass = false;
};

// Conormal frame snapshot included in reports for the featured solves.
struct FrameRecord {
  std::string check;
  std::vector<double> x, xi, n;
  double co_mean = 0.0;
};

struct ScenarioResult {
  std::string id;
  bool pass = true;
  std::vector<ComparisonReport> checks;
  std::vector<InvariantResult> invariants;
  std::vector<FrameRecord> frames;
  std::vector<std::string> tables;  // file names written next to the report
  std::vector<std::string> notes;
};

ScenarioResult run_scenario(const Scenario& sc, const RunOptions& opts);

// Serialized report (deterministic given identical results).
std::string render_report_json(const ScenarioResult& r, uint64_t seed);

// Bundled scenarios by id, with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& bundled_scenario_index();
std::string bundled_scenario_text(const std::string& id);

// Shared invariant battery (also driven directly by the acceptance suite).
std::vector<InvariantResult> run_invariant_suite(const BuiltMetric& built,
                                                 const std::optional<SubmanifoldSpec>& sub,
                                                 const Scenario& sc, uint64_t seed,
                                                 double tol_scale);

}  // namespace finsler
