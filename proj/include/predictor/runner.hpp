#pragma once

#include "predictor/metrics.hpp"
#include "predictor/scenario.hpp"
#include "predictor/simulator.hpp"

#include <optional>
#include <string>

namespace predictor {

struct RunResult {
  Scenario scenario;
  SimTrace trace;
  RunMetrics metrics;
};

/// Runs a scenario (with optional policy/seed overrides) and, if `out_dir`
/// is non-empty, writes rates.csv, backlog.csv, latency_hist.csv and
/// summary.json there, creating the directory if needed.
RunResult run_scenario(Scenario scenario, const std::string& out_dir,
                       std::optional<Policy> policy_override = {},
                       std::optional<uint64_t> seed_override = {});

RunResult run_scenario_file(const std::string& path, const std::string& out_dir,
                            std::optional<Policy> policy_override = {},
                            std::optional<uint64_t> seed_override = {});

}  // namespace predictor
