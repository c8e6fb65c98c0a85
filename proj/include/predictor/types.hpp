#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace predictor {

/// Thrown by validation and parsing routines; carries a human-readable
/// description of the first violated invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Traffic source attached to the first node of a circuit.
// "infinite" offers packets at `rate` for the whole run; "onoff" only
// inside its active windows.
struct SourceModel {
  enum class Kind { Infinite, OnOff };
  Kind kind = Kind::Infinite;
  double rate = 0.0;  // offered load, packets/s
  std::vector<std::pair<double, double>> windows;  // active [start, stop) in s

  bool active_at(double t) const;
};

struct NodeSpec {
  std::string id;
  double capacity_in = 0.0;   // packets/s
  double capacity_out = 0.0;  // packets/s
  double queue_limit = 0.0;   // packets, per circuit queue

  // Single capacity used by the definitional feasibility check.
  double capacity() const { return capacity_in < capacity_out ? capacity_in : capacity_out; }
};

struct LinkSpec {
  std::string from;
  std::string to;
  double delay = 0.0;  // seconds
};

struct Circuit {
  int id = 0;
  std::vector<std::string> path;  // ordered relay node ids, length >= 1
  SourceModel source;
};

struct NetworkTopology {
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<Circuit> circuits;

  int node_index(const std::string& id) const;  // -1 if unknown
  bool has_link(const std::string& from, const std::string& to) const;
  /// Circuit ids traversing the given node.
  std::vector<int> circuits_at(const std::string& node_id) const;
};

struct RateVector {
  std::map<int, double> rates;  // circuit id -> packets/s
};

// Per-circuit queue levels at one node, plus the offset state used for
// predecessor-queue estimation.
struct NodeState {
  std::string node_id;
  std::map<int, double> queue;     // circuit id -> s_{alpha,i}
  std::map<int, double> delta_s;   // circuit id -> offset vs predecessor
};

/// Checks all type invariants and returns the topology unchanged.
/// Throws ValidationError describing the first violation found.
const NetworkTopology& validate_topology(const NetworkTopology& t);

/// Definitional feasibility: all rates nonnegative and per-node sums
/// within the single capacity min(C_in, C_out).
bool is_feasible(const RateVector& r, const NetworkTopology& t);

/// Total packets queued across all nodes and circuits.
double total_backlog(const std::vector<NodeState>& states);

}  // namespace predictor
