#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chemostab/config.hpp"
#include "chemostab/report.hpp"

namespace chemostab {

/// Named experiments. Each preset fills in parameters for its target statement;
/// entries from the user's config override the preset. Hypotheses are checked
/// before anything runs, and a failed check raises HypothesisNotMet naming the
/// inequality.
const std::vector<std::string>& scenario_names();

/// Preset entries for a scenario, before user overrides.
Config scenario_preset(const std::string& name);

struct ScenarioOutcome {
  std::string name;
  Json verdict;  // {scenario, theorem, hypotheses_checked, measured, expected, pass}
  bool pass = false;
  std::vector<std::string> files;
};

/// Runs the scenario and writes <dir>/<name>_trajectory.csv, <name>_diagnostics.csv
/// and <name>_verdict.json, where dir is output.dir (default ".").
ScenarioOutcome run_scenario(const std::string& name, const Config& user, std::uint64_t seed);

/// Threshold inputs from thresholds.* and minimal.* entries: C* table or the
/// stub, M0 supplied or estimated from the seed, ū0 and v̱0 when given.
ThresholdInputs threshold_inputs_from(const Config& cfg, const ModelParams& p,
                                      const GridDomain& grid, std::uint64_t seed);

/// Cartesian sweep over sweep.<key> axes ("v1, v2, ..." or "lo:hi:count"); one
/// row of threshold and stability scalars per tuple. Rows run in parallel.
CsvTable sweep_table(const Config& cfg, std::uint64_t seed);

}  // namespace chemostab
