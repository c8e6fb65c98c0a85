#pragma once

#include "predictor/qp.hpp"
#include "predictor/types.hpp"

namespace predictor {

struct FairnessProblem {
  NetworkTopology topology;
  double r_max = 0.0;  // upper rate limit, packets/s
};

struct FairnessSolution {
  RateVector rates;
  double objective = 0.0;  // sum of (r_max - r_i)^2
  KktResiduals residuals;
  QpStatus status = QpStatus::NumericalFailure;
};

/// True iff r_max is at least the largest node capacity, the requirement
/// for the optimization-based construction to yield the max-min vector.
bool rmax_bound_ok(const FairnessProblem& p);

/// Max-min fair rates computed by a sequence of certified QP stages:
/// each stage minimizes the common shortfall (r_max - level)^2 of the
/// unfrozen circuits subject to residual node capacities, then freezes
/// the circuits of saturated nodes. residuals holds the worst stage
/// certificate. Throws ValidationError on solver failure (every stage
/// is feasible, so failure indicates a solver defect).
FairnessSolution solve_maxmin_qp(const FairnessProblem& p);

/// Progressive-filling reference construction: raise all unfrozen rates
/// uniformly, freeze the circuits of each node as it saturates. Built
/// without any QP; serves as the independent oracle.
RateVector water_filling(const FairnessProblem& p);

/// Bottleneck check: every circuit must traverse a saturated node where
/// its rate is maximal among that node's circuits.
bool verify_maxmin(const RateVector& r, const NetworkTopology& t);

}  // namespace predictor
