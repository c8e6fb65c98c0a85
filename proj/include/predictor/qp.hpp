#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <limits>
#include <optional>

namespace predictor {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Convex QP in the canonical form
//   min 1/2 x'Px + q'x
//   s.t. al <= Ax <= au,  xl <= x <= xu
// Rows with al == au act as equality constraints; infinite bounds drop
// the corresponding side.
struct QpInstance {
  Eigen::SparseMatrix<double> P;  // n x n, PSD
  Eigen::VectorXd q;              // n
  Eigen::SparseMatrix<double> A;  // m x n
  Eigen::VectorXd al, au;         // m
  Eigen::VectorXd xl, xu;         // n

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_rows() const { return static_cast<int>(al.size()); }

  /// Plain-text dump (dimensions, dense matrices, bounds) for offline
  /// inspection.
  void dump(std::ostream& os) const;
};

enum class QpStatus { Optimal, MaxIterations, NumericalFailure };

struct QpSolution {
  Eigen::VectorXd x;
  // One dual per constraint row / variable box. Positive part pushes at
  // the upper bound, negative part at the lower bound; equality rows may
  // take either sign.
  Eigen::VectorXd row_duals;
  Eigen::VectorXd box_duals;
  QpStatus status = QpStatus::NumericalFailure;
  int iterations = 0;
  double objective = 0.0;
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;          // max violation relative to 1 + |bound|
  double dual = 0.0;            // sign violations of the duals
  double complementarity = 0.0; // normalized by 1 + |dual| + |slack|

  bool within_tolerance() const {
    return primal <= 1e-8 && stationarity <= 1e-6 && dual <= 1e-6 &&
           complementarity <= 1e-6;
  }
};

/// Primal-dual interior-point solve. Deterministic: identical instance
/// and warm start produce an identical iterate sequence.
QpSolution solve(const QpInstance& q, const std::optional<QpSolution>& warm_start = {});

/// Residuals of a candidate solution, computed directly from the
/// instance data without reference to solver internals.
KktResiduals kkt_residuals(const QpInstance& q, const QpSolution& s);

}  // namespace predictor
