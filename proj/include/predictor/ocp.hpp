#pragma once

#include "predictor/qp.hpp"

#include <string>
#include <vector>

namespace predictor {

using RateTrajectory = std::vector<double>;  // packets/s per step

struct ControllerConfig {
  int horizon = 20;          // steps
  double dt = 0.04;          // s
  double d0 = 1.0 / 3.0;     // discount base, (0, 1/3]
  double r_max = 0.0;        // packets/s
  double queue_limit = 50.0; // packets per circuit queue (s_max)
};

// Everything a single node needs for one control step. All trajectories
// are horizon-length and indexed per local circuit.
struct ControllerInputs {
  std::vector<double> s_init;                 // measured circuit queues
  std::vector<RateTrajectory> pred_out_rate;  // predecessor outgoing plan
  std::vector<RateTrajectory> pred_queue;     // predecessor queue plan
  std::vector<RateTrajectory> succ_in_rate;   // successor intake plan, one step stale
  double capacity_in = 0.0;
  double capacity_out = 0.0;
};

struct OcpSolution {
  std::vector<RateTrajectory> r_in;    // admitted/incoming rates
  std::vector<RateTrajectory> r_out;   // outgoing rates; element 0 is applied
  std::vector<std::vector<double>> s_pred;   // queue trajectory, index 0 = s_init
  std::vector<std::vector<double>> delta_s;  // offset trajectory, index 0 = 0
  double objective = 0.0;
  QpStatus status = QpStatus::NumericalFailure;
  int iterations = 0;
  KktResiduals residuals;
  QpSolution raw;  // kept for warm starting the next step
};

/// Geometric weights [1, d0, d0^2, ...] of length n.
std::vector<double> discount_sequence(double d0, int n);

/// Offset-based estimate of the predecessor queue as seen by this node:
/// s~(k) = s_beta(k) - ds(k) with ds(0) = 0 and
/// ds(k+1) = ds(k) + dt*(r_in(k) - r_out_beta(k)).
std::vector<double> predict_predecessor_queue(const std::vector<double>& s_beta,
                                              const std::vector<double>& r_in,
                                              const std::vector<double>& r_out_beta,
                                              double dt);

/// Assembles the per-node optimal control problem over the horizon:
/// discounted rate-shortfall objective, queue and offset dynamics,
/// delayed successor cap, capacity sums, queue boxes, and predecessor
/// availability.
QpInstance build_ocp(const ControllerConfig& cfg, const ControllerInputs& in);

/// Builds and solves the node problem; recovers rate/state trajectories.
/// `context` is prepended to error messages on solver failure.
OcpSolution solve_node_step(const ControllerConfig& cfg, const ControllerInputs& in,
                            const QpSolution* warm_start = nullptr,
                            const std::string& context = {});

}  // namespace predictor
