#pragma once

#include "predictor/simulator.hpp"

#include <map>
#include <string>
#include <vector>

namespace predictor {

struct CircuitMetrics {
  int64_t delivered = 0;
  int64_t delivered_steady = 0;  // packets entering after the transient cutoff
  double mean_latency_ms = 0.0;
  int64_t dropped = 0;
};

struct RunMetrics {
  std::map<int, CircuitMetrics> circuits;
  std::map<int, int64_t> latency_hist;  // bin start (ms, width 10) -> count
  std::vector<double> backlog;          // per step, packets
  double jain = 0.0;                    // over steady-state delivered counts
  bool jain_defined = false;
  double overhead_pct = 0.0;            // control bytes / data bytes delivered
  int64_t delivered_total = 0;
  int64_t control_bytes = 0;
  double mean_latency_ms = 0.0;
  double transient_skip_s = 2.0;
};

/// Jain fairness index (sum x)^2 / (p * sum x^2). Returns false in
/// `defined` for all-zero input.
double jain_index(const std::vector<double>& delivered, bool& defined);

RunMetrics compute(const SimTrace& trace);

/// Writes rates.csv, backlog.csv, latency_hist.csv and summary.json.
/// Output is byte-deterministic for a given trace.
void write_outputs(const std::string& dir, const SimTrace& trace,
                   const RunMetrics& m, const std::string& scenario_name,
                   const std::string& policy);

}  // namespace predictor
