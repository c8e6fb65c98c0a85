#include "predictor/ocp.hpp"

#include "predictor/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace predictor {

std::vector<double> discount_sequence(double d0, int n) {
  std::vector<double> d(static_cast<size_t>(n));
  double w = 1.0;
  for (int k = 0; k < n; ++k) {
    d[static_cast<size_t>(k)] = w;
    w *= d0;
  }
  return d;
}

std::vector<double> predict_predecessor_queue(const std::vector<double>& s_beta,
                                              const std::vector<double>& r_in,
                                              const std::vector<double>& r_out_beta,
                                              double dt) {
  if (s_beta.size() != r_in.size() || s_beta.size() != r_out_beta.size()) {
    throw ValidationError("predict_predecessor_queue: trajectory lengths differ");
  }
  std::vector<double> est(s_beta.size());
  double ds = 0.0;
  for (size_t k = 0; k < s_beta.size(); ++k) {
    est[k] = s_beta[k] - ds;
    ds += dt * (r_in[k] - r_out_beta[k]);
  }
  return est;
}

namespace {

void check_inputs(const ControllerConfig& cfg, const ControllerInputs& in) {
  if (cfg.horizon < 2 || cfg.dt <= 0.0 || cfg.d0 <= 0.0 || cfg.d0 > 1.0 / 3.0 + 1e-12) {
    throw ValidationError("controller config out of range");
  }
  const size_t nc = in.s_init.size();
  if (in.pred_out_rate.size() != nc || in.pred_queue.size() != nc ||
      in.succ_in_rate.size() != nc) {
    throw ValidationError("ocp inputs: circuit count mismatch");
  }
  const size_t h = static_cast<size_t>(cfg.horizon);
  for (size_t c = 0; c < nc; ++c) {
    if (in.pred_out_rate[c].size() != h || in.pred_queue[c].size() != h ||
        in.succ_in_rate[c].size() != h) {
      throw ValidationError("ocp inputs: trajectory length != horizon");
    }
  }
}

}  // namespace

QpInstance build_ocp(const ControllerConfig& cfg, const ControllerInputs& in) {
  check_inputs(cfg, in);
  const int nc = static_cast<int>(in.s_init.size());
  const int h = cfg.horizon;
  const double dt = cfg.dt;
  const double rmax = cfg.r_max;

  // variable layout: [dr_in | dr_out | s(1..H) | ds(1..H)], each block c*H + k
  const int n = 4 * nc * h;
  const auto vin = [&](int c, int k) { return c * h + k; };
  const auto vout = [&](int c, int k) { return nc * h + c * h + k; };
  const auto vs = [&](int c, int k) { return 2 * nc * h + c * h + k; };
  const auto vds = [&](int c, int k) { return 3 * nc * h + c * h + k; };

  QpInstance qp;
  qp.q = Eigen::VectorXd::Zero(n);
  qp.xl = Eigen::VectorXd::Constant(n, -kInf);
  qp.xu = Eigen::VectorXd::Constant(n, kInf);

  const auto d = discount_sequence(cfg.d0, h);
  std::vector<Eigen::Triplet<double>> tp;
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < h; ++k) {
      tp.emplace_back(vin(c, k), vin(c, k), 2.0 * d[static_cast<size_t>(k)]);
      tp.emplace_back(vout(c, k), vout(c, k), 2.0 * d[static_cast<size_t>(k)]);
    }
  }
  qp.P.resize(n, n);
  qp.P.setFromTriplets(tp.begin(), tp.end());

  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < h; ++k) {
      // rate shortfalls in [0, r_max]; outgoing additionally capped by the
      // delayed successor allowance (one-step shift, tail repeated)
      qp.xl(vin(c, k)) = 0.0;
      qp.xu(vin(c, k)) = rmax;
      const double allow =
          std::max(0.0, in.succ_in_rate[c][static_cast<size_t>(std::min(k + 1, h - 1))]);
      qp.xl(vout(c, k)) = std::max(0.0, rmax - allow);
      qp.xu(vout(c, k)) = rmax;
      // queue box
      qp.xl(vs(c, k)) = 0.0;
      qp.xu(vs(c, k)) = cfg.queue_limit;
      // availability: ds(k+1) <= s_beta(k+1), tail repeated
      qp.xu(vds(c, k)) =
          in.pred_queue[c][static_cast<size_t>(std::min(k + 1, h - 1))];
    }
  }

  const int m = 2 * nc * h + 2 * h;
  std::vector<Eigen::Triplet<double>> ta;
  Eigen::VectorXd al = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd au = Eigen::VectorXd::Zero(m);
  int row = 0;

  // queue dynamics: s(k+1) = s(k) + dt*(dr_out - dr_in)
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < h; ++k, ++row) {
      ta.emplace_back(row, vs(c, k), 1.0);
      ta.emplace_back(row, vin(c, k), dt);
      ta.emplace_back(row, vout(c, k), -dt);
      double rhs = 0.0;
      if (k == 0) {
        rhs = in.s_init[static_cast<size_t>(c)];
      } else {
        ta.emplace_back(row, vs(c, k - 1), -1.0);
      }
      al(row) = rhs;
      au(row) = rhs;
    }
  }
  // offset dynamics: ds(k+1) = ds(k) + dt*(r_max - dr_in - r_out_beta(k))
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k < h; ++k, ++row) {
      ta.emplace_back(row, vds(c, k), 1.0);
      ta.emplace_back(row, vin(c, k), dt);
      if (k > 0) {
        ta.emplace_back(row, vds(c, k - 1), -1.0);
      }
      const double rhs = dt * (rmax - in.pred_out_rate[c][static_cast<size_t>(k)]);
      al(row) = rhs;
      au(row) = rhs;
    }
  }
  // capacity sums: sum_c (r_max - dr) <= C
  for (int k = 0; k < h; ++k, ++row) {
    for (int c = 0; c < nc; ++c) {
      ta.emplace_back(row, vin(c, k), 1.0);
    }
    al(row) = nc * rmax - in.capacity_in;
    au(row) = kInf;
  }
  for (int k = 0; k < h; ++k, ++row) {
    for (int c = 0; c < nc; ++c) {
      ta.emplace_back(row, vout(c, k), 1.0);
    }
    al(row) = nc * rmax - in.capacity_out;
    au(row) = kInf;
  }

  qp.A.resize(m, n);
  qp.A.setFromTriplets(ta.begin(), ta.end());
  qp.al = al;
  qp.au = au;
  return qp;
}

OcpSolution solve_node_step(const ControllerConfig& cfg, const ControllerInputs& in,
                            const QpSolution* warm_start, const std::string& context) {
  const QpInstance qp = build_ocp(cfg, in);
  std::optional<QpSolution> warm;
  if (warm_start != nullptr && warm_start->x.size() == qp.num_vars()) {
    warm = *warm_start;
  }
  QpSolution s = solve(qp, warm);
  if (s.status != QpStatus::Optimal) {
    throw ValidationError(context + "node OCP solve failed (status " +
                          std::to_string(static_cast<int>(s.status)) + ", " +
                          std::to_string(s.iterations) + " iterations)");
  }

  const int nc = static_cast<int>(in.s_init.size());
  const int h = cfg.horizon;
  OcpSolution out;
  out.status = s.status;
  out.iterations = s.iterations;
  out.objective = s.objective;
  out.residuals = kkt_residuals(qp, s);
  out.raw = s;
  out.r_in.assign(nc, RateTrajectory(static_cast<size_t>(h)));
  out.r_out.assign(nc, RateTrajectory(static_cast<size_t>(h)));
  out.s_pred.assign(nc, std::vector<double>(static_cast<size_t>(h) + 1));
  out.delta_s.assign(nc, std::vector<double>(static_cast<size_t>(h) + 1));
  for (int c = 0; c < nc; ++c) {
    out.s_pred[c][0] = in.s_init[static_cast<size_t>(c)];
    out.delta_s[c][0] = 0.0;
    for (int k = 0; k < h; ++k) {
      out.r_in[c][static_cast<size_t>(k)] = cfg.r_max - s.x(c * h + k);
      out.r_out[c][static_cast<size_t>(k)] = cfg.r_max - s.x(nc * h + c * h + k);
      out.s_pred[c][static_cast<size_t>(k) + 1] = s.x(2 * nc * h + c * h + k);
      out.delta_s[c][static_cast<size_t>(k) + 1] = s.x(3 * nc * h + c * h + k);
    }
  }
  return out;
}

}  // namespace predictor
