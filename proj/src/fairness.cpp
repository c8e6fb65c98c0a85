#include "predictor/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace predictor {

bool rmax_bound_ok(const FairnessProblem& p) {
  double cmax = 0.0;
  for (const auto& n : p.topology.nodes) {
    cmax = std::max(cmax, std::max(n.capacity_in, n.capacity_out));
  }
  return p.r_max >= cmax;
}

// The max-min vector is computed as a sequence of small QPs, each one
// pushing the common rate of the still-unfrozen circuits as high as the
// residual capacities allow (equivalently: minimizing the shared
// shortfall dr = r_max - level). Circuits of every node saturated by a
// stage are frozen at the stage level, and the next stage continues with
// the rest. A single QP over per-circuit shortfalls does not work: the
// minimizer of sum dr_i^2 can trade one circuit down to raise several
// others (one per shared node), which max-min fairness forbids.
FairnessSolution solve_maxmin_qp(const FairnessProblem& p) {
  const auto& t = p.topology;
  const size_t nc = t.circuits.size();
  std::vector<bool> frozen(nc, false);
  std::vector<double> rate(nc, 0.0);

  FairnessSolution out;
  out.status = QpStatus::Optimal;

  while (true) {
    // rows: one per node that carries at least one unfrozen circuit
    std::vector<double> row_coeff, row_lo;
    for (const auto& n : t.nodes) {
      double used_frozen = 0.0;
      int active = 0;
      for (int cid : t.circuits_at(n.id)) {
        if (frozen[static_cast<size_t>(cid)]) {
          used_frozen += rate[static_cast<size_t>(cid)];
        } else {
          ++active;
        }
      }
      if (active == 0) {
        continue;
      }
      // active * (r_max - x) + used_frozen <= C  =>  active * x >= ...
      row_coeff.push_back(static_cast<double>(active));
      row_lo.push_back(static_cast<double>(active) * p.r_max + used_frozen -
                       n.capacity());
    }
    if (row_coeff.empty()) {
      break;
    }

    QpInstance qp;
    qp.P.resize(1, 1);
    qp.P.insert(0, 0) = 2.0;
    qp.q = Eigen::VectorXd::Zero(1);
    qp.xl = Eigen::VectorXd::Zero(1);
    qp.xu = Eigen::VectorXd::Constant(1, p.r_max);
    const int m = static_cast<int>(row_coeff.size());
    qp.A.resize(m, 1);
    qp.al.resize(m);
    qp.au.resize(m);
    for (int i = 0; i < m; ++i) {
      qp.A.insert(i, 0) = row_coeff[static_cast<size_t>(i)];
      qp.al(i) = row_lo[static_cast<size_t>(i)];
      qp.au(i) = kInf;
    }

    QpSolution s = solve(qp);
    if (s.status != QpStatus::Optimal) {
      throw ValidationError(
          "fairness QP stage did not reach optimality (solver defect: "
          "dr = r_max is always feasible)");
    }
    const KktResiduals res = kkt_residuals(qp, s);
    out.residuals.stationarity = std::max(out.residuals.stationarity, res.stationarity);
    out.residuals.primal = std::max(out.residuals.primal, res.primal);
    out.residuals.dual = std::max(out.residuals.dual, res.dual);
    out.residuals.complementarity =
        std::max(out.residuals.complementarity, res.complementarity);

    const double level = p.r_max - s.x(0);
    for (size_t i = 0; i < nc; ++i) {
      if (!frozen[i]) {
        rate[i] = level;
      }
    }
    // freeze every circuit of each node its stage saturated
    bool froze = false;
    for (const auto& n : t.nodes) {
      double used = 0.0;
      for (int cid : t.circuits_at(n.id)) {
        used += rate[static_cast<size_t>(cid)];
      }
      if (used >= n.capacity() - 1e-9 * std::max(1.0, n.capacity())) {
        for (int cid : t.circuits_at(n.id)) {
          if (!frozen[static_cast<size_t>(cid)]) {
            frozen[static_cast<size_t>(cid)] = true;
            froze = true;
          }
        }
      }
    }
    if (!froze) {
      break;  // the r_max cap was reached before any node saturated
    }
  }

  out.objective = 0.0;
  for (size_t i = 0; i < nc; ++i) {
    const double dr = p.r_max - rate[i];
    out.objective += dr * dr;
    out.rates.rates[t.circuits[i].id] = rate[i];
  }
  return out;
}

RateVector water_filling(const FairnessProblem& p) {
  const auto& t = p.topology;
  std::vector<bool> frozen(t.circuits.size(), false);
  std::vector<double> rate(t.circuits.size(), 0.0);

  while (true) {
    bool any_active = false;
    // smallest uniform increment that saturates some node
    double step = std::numeric_limits<double>::infinity();
    for (const auto& n : t.nodes) {
      double used = 0.0;
      int active = 0;
      for (int cid : t.circuits_at(n.id)) {
        used += rate[cid];
        if (!frozen[cid]) {
          ++active;
        }
      }
      if (active == 0) {
        continue;
      }
      any_active = true;
      step = std::min(step, (n.capacity() - used) / active);
    }
    if (!any_active) {
      break;
    }
    step = std::max(step, 0.0);
    double level_cap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rate.size(); ++i) {
      if (!frozen[i]) {
        level_cap = std::min(level_cap, p.r_max - rate[i]);
      }
    }
    step = std::min(step, level_cap);
    for (size_t i = 0; i < rate.size(); ++i) {
      if (!frozen[i]) {
        rate[i] += step;
      }
    }
    // freeze all circuits of every node that is now saturated
    bool froze = false;
    for (const auto& n : t.nodes) {
      double used = 0.0;
      for (int cid : t.circuits_at(n.id)) {
        used += rate[cid];
      }
      if (used >= n.capacity() - 1e-12 * std::max(1.0, n.capacity())) {
        for (int cid : t.circuits_at(n.id)) {
          if (!frozen[cid]) {
            frozen[cid] = true;
            froze = true;
          }
        }
      }
    }
    if (!froze) {
      // only possible when the r_max cap was hit first
      for (size_t i = 0; i < rate.size(); ++i) {
        frozen[i] = true;
      }
    }
  }

  RateVector out;
  for (size_t i = 0; i < t.circuits.size(); ++i) {
    out.rates[t.circuits[i].id] = rate[i];
  }
  return out;
}

bool verify_maxmin(const RateVector& r, const NetworkTopology& t) {
  for (const auto& c : t.circuits) {
    const double ri = r.rates.at(c.id);
    bool has_bottleneck = false;
    for (const auto& node_id : c.path) {
      const auto& n = t.nodes[t.node_index(node_id)];
      const double eps = 1e-6 * n.capacity();
      double sum = 0.0;
      double rmaxn = 0.0;
      for (int cid : t.circuits_at(node_id)) {
        sum += r.rates.at(cid);
        rmaxn = std::max(rmaxn, r.rates.at(cid));
      }
      if (sum >= n.capacity() - eps && ri >= rmaxn - eps) {
        has_bottleneck = true;
        break;
      }
    }
    if (!has_bottleneck) {
      return false;
    }
  }
  return true;
}

}  // namespace predictor
