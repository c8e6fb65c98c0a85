#pragma once

#include "predictor/simulator.hpp"

#include <stdexcept>
#include <string>

namespace predictor {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the TOML subset used by the bundled scenario files:
/// [section] tables, [[section]] arrays of tables, string / number /
/// boolean scalars and (nested) arrays. Unknown sections or keys are
/// rejected; errors carry a line number.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);

/// Inverse of parse_scenario for the supported schema.
std::string serialize_scenario(const Scenario& s);

}  // namespace predictor
