#include "predictor/runner.hpp"

#include <filesystem>

namespace predictor {

RunResult run_scenario(Scenario scenario, const std::string& out_dir,
                       std::optional<Policy> policy_override,
                       std::optional<uint64_t> seed_override) {
  if (policy_override) scenario.policy = *policy_override;
  if (seed_override) scenario.seed = *seed_override;

  RunResult res;
  res.trace = run(scenario);
  res.metrics = compute(res.trace);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_outputs(out_dir, res.trace, res.metrics, scenario.name,
                  scenario.policy == Policy::Predictor ? "predictor"
                                                       : "baseline");
  }
  res.scenario = std::move(scenario);
  return res;
}

RunResult run_scenario_file(const std::string& path, const std::string& out_dir,
                            std::optional<Policy> policy_override,
                            std::optional<uint64_t> seed_override) {
  return run_scenario(load_scenario(path), out_dir, policy_override,
                      seed_override);
}

}  // namespace predictor
