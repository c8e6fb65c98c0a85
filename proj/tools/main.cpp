#include "predictor/fairness.hpp"
#include "predictor/runner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace predictor;

bool log_enabled() {
  const char* v = std::getenv("PREDICTOR_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

std::optional<Policy> parse_policy_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "predictor") return Policy::Predictor;
  if (s == "baseline") return Policy::Baseline;
  throw CLI::ValidationError("--policy", "must be 'predictor' or 'baseline'");
}

void print_summary(const RunResult& r, bool quiet) {
  if (quiet) return;
  const auto& m = r.metrics;
  std::printf("scenario: %s  policy: %s  steps: %d\n", r.scenario.name.c_str(),
              r.scenario.policy == Policy::Predictor ? "predictor" : "baseline",
              r.trace.steps);
  std::printf("delivered: %lld  dropped: %lld  mean latency: %.2f ms\n",
              static_cast<long long>(m.delivered_total),
              static_cast<long long>(r.trace.total_dropped), m.mean_latency_ms);
  if (m.jain_defined) {
    std::printf("jain index: %.6f\n", m.jain);
  } else {
    std::printf("jain index: undefined (nothing delivered)\n");
  }
  std::printf("control overhead: %.3f%%\n", m.overhead_pct);
  for (const auto& [cid, c] : m.circuits) {
    std::printf("  circuit %d: delivered %lld, mean latency %.2f ms, dropped %lld\n",
                cid, static_cast<long long>(c.delivered), c.mean_latency_ms,
                static_cast<long long>(c.dropped));
  }
}

int cmd_run(const std::string& scenario, const std::string& out,
            const std::string& policy, std::optional<uint64_t> seed,
            bool quiet) {
  RunResult r =
      run_scenario_file(scenario, out, parse_policy_flag(policy), seed);
  print_summary(r, quiet);
  if (log_enabled()) {
    for (const auto& e : r.trace.solver_log) {
      std::fprintf(stderr,
                   "[solve] step=%d node=%d obj=%.6g iters=%d wall=%.3fms\n",
                   e.step, e.node, e.objective, e.iterations, e.wall_ms);
    }
  }
  return 0;
}

int cmd_compare(const std::string& scenario, const std::string& out,
                std::optional<uint64_t> seed, bool quiet) {
  RunResult a = run_scenario_file(
      scenario, out.empty() ? "" : out + "/predictor", Policy::Predictor, seed);
  RunResult b = run_scenario_file(
      scenario, out.empty() ? "" : out + "/baseline", Policy::Baseline, seed);
  if (!quiet) {
    std::printf("%-12s %14s %14s\n", "metric", "predictor", "baseline");
    std::printf("%-12s %14lld %14lld\n", "delivered",
                static_cast<long long>(a.metrics.delivered_total),
                static_cast<long long>(b.metrics.delivered_total));
    std::printf("%-12s %14lld %14lld\n", "dropped",
                static_cast<long long>(a.trace.total_dropped),
                static_cast<long long>(b.trace.total_dropped));
    std::printf("%-12s %14.2f %14.2f\n", "latency_ms", a.metrics.mean_latency_ms,
                b.metrics.mean_latency_ms);
    std::printf("%-12s %14.6f %14.6f\n", "jain", a.metrics.jain, b.metrics.jain);
  }
  return 0;
}

int cmd_fairness(const std::string& scenario, double r_max, bool quiet) {
  Scenario s = load_scenario(scenario);
  FairnessProblem p{s.topology, r_max > 0.0 ? r_max : s.controller.r_max};
  if (!rmax_bound_ok(p)) {
    std::fprintf(stderr,
                 "warning: r_max below the largest node capacity; the "
                 "optimization may not reach the max-min vector\n");
  }
  FairnessSolution sol = solve_maxmin_qp(p);
  RateVector wf = water_filling(p);
  double max_dev = 0.0;
  for (const auto& [cid, r] : sol.rates.rates) {
    max_dev = std::max(max_dev, std::abs(r - wf.rates.at(cid)));
  }
  const bool ok = verify_maxmin(sol.rates, p.topology);
  if (!quiet) {
    std::printf("max-min fair rates (r_max = %.2f):\n", p.r_max);
    for (const auto& [cid, r] : sol.rates.rates) {
      std::printf("  circuit %d: %.4f packets/s (water-filling %.4f)\n", cid, r,
                  wf.rates.at(cid));
    }
    std::printf("bottleneck check: %s  max deviation vs water-filling: %.3g\n",
                ok ? "pass" : "FAIL", max_dev);
  }
  return ok ? 0 : 1;
}

int cmd_selftest(bool quiet) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    if (!quiet || !ok) {
      std::printf("%-40s %s\n", name, ok ? "ok" : "FAIL");
    }
    if (!ok) ++failures;
  };

  // Round-trip a tiny wire message.
  {
    DownstreamMsg m;
    m.sender = 3;
    m.step = 17;
    m.circuit_ids = {0};
    m.r_out = {{12.34, 0.0, 99.99}};
    m.s_queue = {{5.0, 4.5, 4.0}};
    DownstreamMsg back = decode_downstream(encode(m));
    bool ok = back.sender == m.sender && back.step == m.step;
    for (size_t k = 0; ok && k < 3; ++k) {
      ok = back.r_out[0][k] == m.r_out[0][k] &&
           back.s_queue[0][k] == m.s_queue[0][k];
    }
    check("wire round trip", ok);
  }

  // Water filling against the closed form for one shared node.
  {
    NetworkTopology t;
    t.nodes.push_back({"n", 90.0, 90.0, 50.0});
    for (int i = 0; i < 3; ++i) {
      t.circuits.push_back({i, {"n"}, {}});
    }
    FairnessProblem p{t, 120.0};
    RateVector wf = water_filling(p);
    bool ok = true;
    for (const auto& [cid, r] : wf.rates) {
      (void)cid;
      ok = ok && std::abs(r - 30.0) < 1e-9;
    }
    check("water filling equal split", ok);
  }

  // QP solver on a bound-constrained scalar problem.
  {
    QpInstance qp;
    qp.P.resize(1, 1);
    qp.P.insert(0, 0) = 2.0;
    qp.q = Eigen::VectorXd::Zero(1);
    qp.A.resize(0, 1);
    qp.al.resize(0);
    qp.au.resize(0);
    qp.xl = Eigen::VectorXd::Constant(1, 1.0);
    qp.xu = Eigen::VectorXd::Constant(1, 2.0);
    QpSolution s = solve(qp);
    check("qp scalar bound",
          s.status == QpStatus::Optimal && std::abs(s.x[0] - 1.0) < 1e-7);
  }

  // One short end-to-end run must be deterministic.
  {
    Scenario s;
    s.name = "selftest";
    s.topology.nodes.push_back({"a", 200.0, 220.0, 10.0});
    s.topology.circuits.push_back(
        {0, {"a"}, {SourceModel::Kind::Infinite, 300.0, {}}});
    s.controller.r_max = 300.0;
    s.controller.queue_limit = 10.0;
    s.duration = 2.0;
    SimTrace t1 = run(s);
    SimTrace t2 = run(s);
    bool ok = t1.packets.size() == t2.packets.size() && !t1.packets.empty();
    for (size_t i = 0; ok && i < t1.packets.size(); ++i) {
      ok = t1.packets[i].enter == t2.packets[i].enter &&
           t1.packets[i].leave == t2.packets[i].leave;
    }
    check("deterministic short run", ok);
  }

  if (!quiet) {
    std::printf(failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed predictive congestion control simulator"};
  app.require_subcommand(1);

  std::string scenario, out, policy;
  std::optional<uint64_t> seed;
  bool quiet = false;
  double r_max = 0.0;
  app.add_flag("--quiet", quiet, "suppress normal output");

  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", seed, "override the scenario seed");
  };

  CLI::App* c_run = app.add_subcommand("run", "simulate one scenario");
  c_run->add_option("--scenario", scenario, "scenario file")->required();
  c_run->add_option("--out", out, "output directory for csv/json artifacts");
  c_run->add_option("--policy", policy, "predictor|baseline");
  add_seed(c_run);

  CLI::App* c_cmp =
      app.add_subcommand("compare", "run both policies on one scenario");
  c_cmp->add_option("--scenario", scenario, "scenario file")->required();
  c_cmp->add_option("--out", out, "output directory root");
  add_seed(c_cmp);

  CLI::App* c_fair =
      app.add_subcommand("fairness", "max-min rates for a topology");
  c_fair->add_option("--scenario", scenario, "scenario file")->required();
  c_fair->add_option("--r-max", r_max, "override the rate upper limit");

  app.add_subcommand("selftest", "quick built-in consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) {
      return cmd_run(scenario, out, policy, seed, quiet);
    }
    if (app.got_subcommand("compare")) {
      return cmd_compare(scenario, out, seed, quiet);
    }
    if (app.got_subcommand("fairness")) {
      return cmd_fairness(scenario, r_max, quiet);
    }
    return cmd_selftest(quiet);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
