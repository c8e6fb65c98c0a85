#pragma once

#include "predictor/exchange.hpp"
#include "predictor/ocp.hpp"
#include "predictor/qp.hpp"
#include "predictor/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace predictor {

enum class Policy { Predictor, Baseline };

struct Scenario {
  std::string name;
  NetworkTopology topology;
  ControllerConfig controller;
  double duration = 0.0;  // s
  Policy policy = Policy::Predictor;
  uint64_t seed = 0;
  int packet_bytes = 512;
  int baseline_queue_cap = 1000;  // packets per circuit queue, baseline only
};

// Fractional-credit rate shaper. Capacity is fixed at two ticks worth of
// the current rate.
struct TokenBucket {
  double tokens = 0.0;
  double rate = 0.0;      // packets/s
  double capacity = 0.0;  // packets

  void set_rate(double r, double dt) {
    rate = r;
    capacity = 2.0 * r * dt;
    if (tokens > capacity) {
      tokens = capacity;
    }
  }
};

/// Refills the bucket for one tick and returns the number of whole
/// packets to forward given the current queue length.
int token_bucket_forward(TokenBucket& b, int queue_len, double dt);

/// Packets offered by a source inside [t0, t1).
double source_emit(const SourceModel& m, double t0, double t1);

struct PacketEvent {
  int circuit = 0;
  int64_t seq = 0;
  double enter = 0.0;
  double leave = -1.0;  // -1 while still in the network
};

struct QueueSample {
  int step = 0;
  int node = 0;
  int circuit = 0;
  int queue = 0;
};

struct RateRecord {
  int step = 0;
  int node = 0;
  int circuit = 0;
  double r_in_plan = 0.0;
  double r_out_plan = 0.0;
  int forwarded = 0;
};

struct SolverLogEntry {
  int step = 0;
  int node = 0;
  double objective = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  KktResiduals residuals;
};

struct SimTrace {
  std::vector<std::string> node_ids;
  double dt = 0.0;
  int steps = 0;
  int packet_bytes = 0;
  std::vector<PacketEvent> packets;
  std::vector<QueueSample> queue_samples;
  std::vector<RateRecord> rates;
  std::vector<SolverLogEntry> solver_log;
  std::vector<MessageLogEntry> messages;
  std::vector<int> inflight;          // per step, packets on links
  std::vector<int64_t> drops;         // per circuit (baseline overflow)
  int64_t total_dropped = 0;
};

/// Deterministic discrete-event run of a validated scenario.
SimTrace run(const Scenario& scenario);

}  // namespace predictor
