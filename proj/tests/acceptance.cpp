// Acceptance suite: one pass/fail line per criterion, exit code 0 only if
// all pass. Heavier than the unit tests; runs the bundled scenarios
// end-to-end and exercises the real CLI binary.

#include "predictor/fairness.hpp"
#include "predictor/metrics.hpp"
#include "predictor/ocp.hpp"
#include "predictor/runner.hpp"
#include "predictor/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace predictor;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;
};

std::map<int, Criterion> results;

void fail(int n, const std::string& why) {
  results[n].ok = false;
  if (!results[n].detail.empty()) results[n].detail += "; ";
  results[n].detail += why;
}

void note(int n, const std::string& what) {
  if (results[n].ok && results[n].detail.empty()) results[n].detail = what;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Residuals from every QP solved anywhere in this binary, swept by
// criterion 2 at the end.
std::vector<KktResiduals> all_residuals;
int64_t qp_count = 0;

void record(const KktResiduals& r) {
  all_residuals.push_back(r);
  ++qp_count;
}

NetworkTopology random_topology(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cap(1.0, 100.0);
  std::uniform_int_distribution<int> nn(1, 6);
  const int n = nn(rng);
  NetworkTopology t;
  for (int i = 0; i < n; ++i) {
    const double c = cap(rng);
    t.nodes.push_back({"n" + std::to_string(i), c, c, 50.0});
  }
  for (int i = 0; i + 1 < n; ++i) {
    t.links.push_back({t.nodes[static_cast<size_t>(i)].id,
                       t.nodes[static_cast<size_t>(i + 1)].id, 0.04});
  }
  std::uniform_int_distribution<int> np(1, 5);
  std::uniform_int_distribution<int> start(0, n - 1);
  const int p = np(rng);
  for (int i = 0; i < p; ++i) {
    const int a = start(rng);
    std::uniform_int_distribution<int> stop(a, n - 1);
    const int b = stop(rng);
    Circuit c;
    c.id = i;
    for (int j = a; j <= b; ++j) {
      c.path.push_back(t.nodes[static_cast<size_t>(j)].id);
    }
    c.source.rate = 1.0;
    t.circuits.push_back(std::move(c));
  }
  validate_topology(t);
  return t;
}

// ---------------------------------------------------------------- 1 ----
void criterion_1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 100; ++trial) {
    NetworkTopology t = random_topology(rng);
    double rmax = 0.0;
    for (const auto& n : t.nodes) {
      rmax = std::max(rmax, std::max(n.capacity_in, n.capacity_out));
    }
    FairnessProblem p{t, rmax + 1.0};
    FairnessSolution qp = solve_maxmin_qp(p);
    record(qp.residuals);
    if (qp.status != QpStatus::Optimal) {
      fail(1, "solver failed on trial " + std::to_string(trial));
      return;
    }
    RateVector wf = water_filling(p);
    for (const auto& [cid, r] : wf.rates) {
      if (std::abs(qp.rates.rates.at(cid) - r) > 1e-4 * p.r_max) {
        fail(1, "oracle mismatch on trial " + std::to_string(trial));
      }
    }
    if (!verify_maxmin(wf, t) || !verify_maxmin(qp.rates, t)) {
      fail(1, "bottleneck verification failed on trial " + std::to_string(trial));
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 10.0) {
    fail(1, "took " + fmt(secs) + " s (limit 10)");
  }
  note(1, "100 topologies in " + fmt(secs) + " s");
}

// ---------------------------------------------------------------- 3 ----
void criterion_3() {
  // Full-plan discounted cost of a shortfall trajectory, and the effect
  // of shifting shortfall mass m from step k to k+1 (front-loading the
  // rates). On nondecreasing shortfall plans within the regime
  // dr[k+1] <= 3 dr[k] - 2m that makes the discount-bound derivation
  // tight, the exchange never raises the cost at d0 = 1/3; the same
  // exchanges at d0 = 0.9 produce strict increases.
  const int h = 20;
  auto cost = [&](const std::vector<double>& dr, double d0) {
    double c = 0.0, d = 1.0;
    for (int j = 0; j < h; ++j, d *= d0) c += d * dr[static_cast<size_t>(j)] * dr[static_cast<size_t>(j)];
    return c;
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, h - 2);
  int counterexamples = 0;
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> dr(h);
    double level = 1.0 + u(rng) * 50.0;
    for (int j = 0; j < h; ++j) {
      dr[static_cast<size_t>(j)] = level;
      level *= 1.0 + 1.9 * u(rng);  // nondecreasing shortfalls
    }
    const int k = pick(rng);
    const double drk = dr[static_cast<size_t>(k)];
    const double drk1 = dr[static_cast<size_t>(k) + 1];
    const double m = u(rng) * std::min(drk, (3.0 * drk - drk1) / 2.0);
    if (m <= 0.0) continue;
    ++tested;
    std::vector<double> moved = dr;
    moved[static_cast<size_t>(k)] -= m;
    moved[static_cast<size_t>(k) + 1] += m;
    if (cost(moved, 1.0 / 3.0) - cost(dr, 1.0 / 3.0) > 1e-9) {
      fail(3, "cost increased at d0=1/3, trial " + std::to_string(trial));
      return;
    }
    if (cost(moved, 0.9) - cost(dr, 0.9) > 0.0) {
      ++counterexamples;
    }
  }
  if (tested < 900) fail(3, "too few valid exchanges sampled");
  if (counterexamples == 0) {
    fail(3, "no counterexamples found at d0=0.9");
  }
  note(3, std::to_string(tested) + " plans ok at d0=1/3, " +
              std::to_string(counterexamples) + " counterexamples at d0=0.9");
}

// ---------------------------------------------------------------- 9 ----
void criterion_9() {
  ControllerConfig cfg;
  cfg.horizon = 20;
  cfg.dt = 0.04;
  cfg.d0 = 1.0 / 3.0;
  cfg.r_max = 1500.0;
  cfg.queue_limit = 50.0;
  const int h = cfg.horizon;
  const double cap = 1000.0;

  // Middle node of the hub topology with three circuits:
  //  - circuit 0: modest supply that dries up after five steps
  //  - circuit 1: steady supply below the fair share, large local queue
  //  - circuit 2: ample supply, successor allowance dropping mid-horizon
  ControllerInputs in;
  in.capacity_in = cap;
  in.capacity_out = cap;
  in.s_init = {20.0, 40.0, 10.0};
  in.pred_out_rate.assign(3, RateTrajectory(static_cast<size_t>(h), 0.0));
  in.pred_queue.assign(3, RateTrajectory(static_cast<size_t>(h), 0.0));
  in.succ_in_rate.assign(3, RateTrajectory(static_cast<size_t>(h), cap));
  for (int k = 0; k < h; ++k) {
    const auto ks = static_cast<size_t>(k);
    in.pred_out_rate[0][ks] = k < 5 ? 150.0 : 0.0;
    in.pred_queue[0][ks] = 10.0;
    in.pred_out_rate[1][ks] = 150.0;
    in.pred_queue[1][ks] = 5.0;
    in.pred_out_rate[2][ks] = 420.0;
    in.pred_queue[2][ks] = 5.0;
    if (k >= 10) in.succ_in_rate[2][ks] = 400.0;
  }
  OcpSolution sol = solve_node_step(cfg, in);
  record(sol.residuals);
  if (sol.status != QpStatus::Optimal) {
    fail(9, "open-loop solve failed");
    return;
  }
  const double tol = 1e-6;
  auto allowance = [&](int c, int k) {
    return in.succ_in_rate[static_cast<size_t>(c)]
                          [static_cast<size_t>(std::min(k + 1, h - 1))];
  };

  // (1) first-step rates respect one-step-delayed neighbor information
  for (int c = 0; c < 3; ++c) {
    const auto cs = static_cast<size_t>(c);
    if (sol.r_out[cs][0] > allowance(c, 0) + tol) fail(9, "(1) r_out[0]");
    const double intake_cap =
        in.pred_queue[cs][0] / cfg.dt + in.pred_out_rate[cs][0];
    if (sol.r_in[cs][0] > intake_cap + tol) fail(9, "(1) r_in[0]");
  }
  // (2) circuit 0 drains its predecessor queue estimate to exactly 0
  const auto est = predict_predecessor_queue(in.pred_queue[0], sol.r_in[0],
                                             in.pred_out_rate[0], cfg.dt);
  double est_min = 1e18;
  for (double v : est) est_min = std::min(est_min, v);
  if (est_min < -tol) fail(9, "(2) availability violated");
  if (est.back() > tol) fail(9, "(2) predecessor queue not drained");
  // (3) equal first-step outgoing rates across competing circuits
  const double share = cap / 3.0;
  const double hi = std::max({sol.r_out[0][0], sol.r_out[1][0], sol.r_out[2][0]});
  const double lo = std::min({sol.r_out[0][0], sol.r_out[1][0], sol.r_out[2][0]});
  if (hi - lo > 0.02 * share) fail(9, "(3) first-step spread " + fmt(hi - lo));
  // (4) circuit 0's queue empties and its outgoing rate is cut first
  if (sol.s_pred[0][static_cast<size_t>(h)] > tol) fail(9, "(4) queue not emptied");
  auto first_below = [&](int c, double level) {
    for (int k = 0; k < h; ++k) {
      if (sol.r_out[static_cast<size_t>(c)][static_cast<size_t>(k)] < level) return k;
    }
    return h;
  };
  if (first_below(0, 250.0) >= first_below(1, 250.0)) {
    fail(9, "(4) circuit 0 not reduced first");
  }
  // (5) circuit 0's incoming rate vanishes with its supply
  for (int k = 5; k < h; ++k) {
    if (sol.r_in[0][static_cast<size_t>(k)] > tol) fail(9, "(5) r_in not vanished");
  }
  // (6) circuit 1's outgoing rate settles to exactly its incoming rate
  for (int k = 6; k < h; ++k) {
    const double gap = std::abs(sol.r_out[1][static_cast<size_t>(k)] -
                                sol.r_in[1][static_cast<size_t>(k)]);
    if (gap > (k < 12 ? tol : 1e-3)) fail(9, "(6) r_out != r_in at k=" + std::to_string(k));
  }
  // (7) per-circuit outgoing cap obeyed and binding once it drops
  for (int k = 0; k < h; ++k) {
    if (sol.r_out[2][static_cast<size_t>(k)] > allowance(2, k) + tol) {
      fail(9, "(7) allowance violated");
    }
  }
  for (int k = 9; k < h; ++k) {
    if (std::abs(sol.r_out[2][static_cast<size_t>(k)] - 400.0) > 1e-3) {
      fail(9, "(7) allowance not binding at k=" + std::to_string(k));
    }
  }
  // (8)/(9) capacity sums obeyed at every step
  for (int k = 0; k < h; ++k) {
    double si = 0.0, so = 0.0;
    for (int c = 0; c < 3; ++c) {
      si += sol.r_in[static_cast<size_t>(c)][static_cast<size_t>(k)];
      so += sol.r_out[static_cast<size_t>(c)][static_cast<size_t>(k)];
    }
    if (si > cap + tol) fail(9, "(8) incoming capacity violated");
    if (so > cap + tol) fail(9, "(9) outgoing capacity violated");
  }
  note(9, "all nine open-loop observations hold");
}

// -------------------------------------------------------------- runs ---
int node_index_of(const SimTrace& t, const std::string& id) {
  for (size_t i = 0; i < t.node_ids.size(); ++i) {
    if (t.node_ids[i] == id) return static_cast<int>(i);
  }
  return -1;
}

void sweep_solver_log(const SimTrace& t) {
  for (const auto& e : t.solver_log) {
    all_residuals.push_back(e.residuals);
    ++qp_count;
  }
}

void criterion_4(const RunResult& s2, double wall_s) {
  const double dur = s2.scenario.duration;
  const double steady_window = dur - s2.metrics.transient_skip_s;
  const double share = 1000.0 / 3.0;
  std::vector<double> rates;
  for (const auto& [cid, c] : s2.metrics.circuits) {
    const double r = static_cast<double>(c.delivered_steady) / steady_window;
    rates.push_back(r);
    if (std::abs(r - share) > 0.02 * share) {
      fail(4, "circuit " + std::to_string(cid) + " throughput " + fmt(r));
    }
  }
  if (rates.size() != 3) fail(4, "expected 3 circuits");
  const double hi = *std::max_element(rates.begin(), rates.end());
  const double lo = *std::min_element(rates.begin(), rates.end());
  if (lo <= 0.0 || (hi - lo) / hi > 0.02) fail(4, "throughputs not equal within 2%");
  if (!s2.metrics.jain_defined || s2.metrics.jain < 0.999) {
    fail(4, "jain " + fmt(s2.metrics.jain));
  }

  // Bottleneck utilization: mean outgoing rate of the middle node over
  // the steady window, reconstructed from forwarded packet counts.
  const int mid = node_index_of(s2.trace, "m");
  const int skip = static_cast<int>(s2.metrics.transient_skip_s / s2.trace.dt);
  std::map<int, int64_t> fwd_per_step;
  for (const auto& r : s2.trace.rates) {
    if (r.node == mid && r.step >= skip) fwd_per_step[r.step] += r.forwarded;
  }
  double total = 0.0;
  for (const auto& [step, n] : fwd_per_step) total += static_cast<double>(n);
  const double mean_rate =
      total / (static_cast<double>(fwd_per_step.size()) * s2.trace.dt);
  if (std::abs(mean_rate - 1000.0) > 0.02 * 1000.0) {
    fail(4, "bottleneck outgoing " + fmt(mean_rate) + " pkts/s");
  }
  if (wall_s >= 120.0) fail(4, "run took " + fmt(wall_s) + " s");
  note(4, "jain " + fmt(s2.metrics.jain) + ", bottleneck " + fmt(mean_rate) +
              " pkts/s, " + fmt(wall_s) + " s wall");
}

void criterion_5(const RunResult& s1) {
  const int mid = node_index_of(s1.trace, "m");
  const int steps = s1.trace.steps;
  std::vector<std::map<int, double>> plan(static_cast<size_t>(steps));
  for (const auto& r : s1.trace.rates) {
    if (r.node == mid) plan[static_cast<size_t>(r.step)][r.circuit] = r.r_in_plan;
  }
  const auto& windows = s1.scenario.topology.circuits[1].source.windows;
  const double dt = s1.trace.dt;
  auto c1_active = [&](int step) {
    const double t = step * dt;
    for (const auto& [a, b] : windows) {
      if (t >= a && t < b) return true;
    }
    return false;
  };
  auto meets = [&](int step) {
    const auto& p = plan[static_cast<size_t>(step)];
    if (c1_active(step)) {
      for (int c = 0; c < 3; ++c) {
        if (std::abs(p.at(c) - 1000.0 / 3.0) > 0.02 * 1000.0 / 3.0) return false;
      }
    } else {
      if (std::abs(p.at(0) - 500.0) > 0.02 * 500.0) return false;
      if (std::abs(p.at(2) - 500.0) > 0.02 * 500.0) return false;
    }
    return true;
  };
  int worst_transition = 0;
  int seg_start = 0;
  for (int s = 0; s <= steps; ++s) {
    if (s == steps || (s > 0 && c1_active(s) != c1_active(s - 1))) {
      // segment [seg_start, s)
      int settle = seg_start;
      while (settle < s && !meets(settle)) ++settle;
      const int transition = settle - seg_start;
      worst_transition = std::max(worst_transition, transition);
      if (transition > 10) {
        fail(5, "transition at step " + std::to_string(seg_start) + " took " +
                    std::to_string(transition) + " steps");
      }
      for (int k = settle; k < s; ++k) {
        if (!meets(k)) {
          fail(5, "rates left the 2% band at step " + std::to_string(k));
          break;
        }
      }
      seg_start = s;
    }
  }
  note(5, "worst transition " + std::to_string(worst_transition) + " steps");
}

void criterion_6(const RunResult& s2, const RunResult& s2b) {
  const double floor_ms = 80.0;  // two links at 40 ms each
  const double lat = s2.metrics.mean_latency_ms;
  if (lat > 1.5 * floor_ms) fail(6, "mean latency " + fmt(lat) + " ms");
  const double base = s2b.metrics.mean_latency_ms;
  if (base < 3.0 * lat) {
    fail(6, "baseline " + fmt(base) + " ms < 3x " + fmt(lat) + " ms");
  }
  note(6, fmt(lat) + " ms vs baseline " + fmt(base) + " ms");
}

void criterion_7(const RunResult& s1, const RunResult& s2, const RunResult& s2b) {
  const double smax = s2.scenario.controller.queue_limit;
  int64_t queue_slots = 0;
  for (const auto& c : s2.scenario.topology.circuits) {
    queue_slots += static_cast<int64_t>(c.path.size());
  }
  const double backlog_bound = static_cast<double>(queue_slots) * smax;
  for (const RunResult* run : {&s1, &s2}) {
    for (const auto& q : run->trace.queue_samples) {
      if (q.queue > smax) {
        fail(7, "queue " + std::to_string(q.queue) + " above s_max at node " +
                    run->trace.node_ids[static_cast<size_t>(q.node)]);
        break;
      }
    }
    for (double b : run->metrics.backlog) {
      if (b >= backlog_bound) {
        fail(7, "total backlog " + fmt(b) + " reached the bound");
        break;
      }
    }
  }
  const int skip = static_cast<int>(2.0 / s2.trace.dt);
  auto steady_mean = [&](const std::vector<double>& v) {
    double sum = 0.0;
    int n = 0;
    for (size_t i = static_cast<size_t>(skip); i < v.size(); ++i, ++n) sum += v[i];
    return n > 0 ? sum / n : 0.0;
  };
  const double pred = steady_mean(s2.metrics.backlog);
  const double base = steady_mean(s2b.metrics.backlog);
  if (base < 5.0 * pred) {
    fail(7, "baseline backlog " + fmt(base) + " < 5x " + fmt(pred));
  }
  note(7, "steady backlog " + fmt(pred) + " vs baseline " + fmt(base));
}

void criterion_8(const RunResult& s1, const RunResult& s2,
                 const std::string& summary_path) {
  for (const RunResult* run : {&s1, &s2}) {
    if (run->metrics.overhead_pct > 10.0) {
      fail(8, "overhead " + fmt(run->metrics.overhead_pct) + " %");
    }
  }
  std::ifstream f(summary_path);
  std::stringstream ss;
  ss << f.rdbuf();
  if (ss.str().find("\"overhead_pct\"") == std::string::npos) {
    fail(8, "overhead_pct missing from " + summary_path);
  }
  note(8, "overhead " + fmt(s2.metrics.overhead_pct) + " % (scenario 2)");
}

// --------------------------------------------------------------- 10 ----
std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion_10() {
  const std::string scenario = std::string(SCENARIO_DIR) + "/single_bottleneck.toml";
  const std::string out1 = "acceptance_out/det1";
  const std::string out2 = "acceptance_out/det2";
  for (const std::string& out : {out1, out2}) {
    std::filesystem::remove_all(out);
    const std::string cmd = std::string("\"") + CLI_PATH +
                            "\" --quiet run --scenario \"" + scenario +
                            "\" --out \"" + out + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      fail(10, "CLI run failed");
      return;
    }
  }
  for (const char* f :
       {"rates.csv", "backlog.csv", "latency_hist.csv", "summary.json"}) {
    const std::string a = read_file(std::filesystem::path(out1) / f);
    const std::string b = read_file(std::filesystem::path(out2) / f);
    if (a.empty() || a != b) {
      fail(10, std::string(f) + " differs between runs");
    }
  }
  note(10, "two CLI runs byte-identical");
}

// --------------------------------------------------------------- 11 ----
double median_solve_ms(int circuits, double capacity) {
  ControllerConfig cfg;
  cfg.horizon = 20;
  cfg.dt = 0.04;
  cfg.d0 = 1.0 / 3.0;
  cfg.r_max = 1500.0;
  cfg.queue_limit = 50.0;
  const int h = cfg.horizon;
  ControllerInputs in;
  in.capacity_in = capacity;
  in.capacity_out = capacity;
  in.s_init.assign(static_cast<size_t>(circuits), 10.0);
  in.pred_out_rate.assign(static_cast<size_t>(circuits),
                          RateTrajectory(static_cast<size_t>(h), 400.0));
  in.pred_queue.assign(static_cast<size_t>(circuits),
                       RateTrajectory(static_cast<size_t>(h), 20.0));
  in.succ_in_rate.assign(static_cast<size_t>(circuits),
                         RateTrajectory(static_cast<size_t>(h), capacity));
  std::vector<double> times;
  for (int rep = 0; rep < 31; ++rep) {
    const auto t0 = Clock::now();
    OcpSolution sol = solve_node_step(cfg, in);
    times.push_back(seconds_since(t0) * 1000.0);
    record(sol.residuals);
    if (sol.status != QpStatus::Optimal) {
      fail(11, "solve failed at " + std::to_string(circuits) + " circuits");
    }
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void criterion_11() {
  const double m3 = median_solve_ms(3, 1000.0);
  const double m6 = median_solve_ms(6, 2000.0);
  if (m3 >= 50.0) fail(11, "median " + fmt(m3) + " ms at 3 circuits");
  if (m6 >= 3.0 * m3) {
    fail(11, "6-circuit median " + fmt(m6) + " ms >= 3x " + fmt(m3));
  }
  note(11, "median " + fmt(m3) + " ms (3 circuits), " + fmt(m6) +
               " ms (6 circuits)");
}

// ---------------------------------------------------------------- 2 ----
void criterion_2() {
  int64_t bad = 0;
  double worst_stat = 0.0, worst_primal = 0.0;
  for (const auto& r : all_residuals) {
    worst_stat = std::max({worst_stat, r.stationarity, r.dual, r.complementarity});
    worst_primal = std::max(worst_primal, r.primal);
    if (!(r.primal <= 1e-8 && r.stationarity <= 1e-6 && r.dual <= 1e-6 &&
          r.complementarity <= 1e-6)) {
      ++bad;
    }
  }
  if (qp_count == 0) fail(2, "no QP solves recorded");
  if (bad > 0) {
    fail(2, std::to_string(bad) + " of " + std::to_string(qp_count) +
                " solves out of tolerance");
  }
  note(2, std::to_string(qp_count) + " solves, worst residuals " +
              fmt(worst_stat * 1e6) + "e-6 / " + fmt(worst_primal * 1e8) + "e-8");
}

const char* names[] = {
    "",
    "fairness oracle equivalence on 100 random topologies",
    "KKT certification of every QP solved in this suite",
    "discount-bound inequality on 1000 randomized plans",
    "scenario 2 steady-state fairness and utilization",
    "scenario 1 adaptation to on/off traffic",
    "latency ratios versus the propagation floor and baseline",
    "backlog boundedness under backpressure",
    "control overhead reported and bounded",
    "open-loop prediction assertion suite",
    "deterministic CLI outputs",
    "solve-time budget and scaling",
};

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  criterion_1();
  criterion_3();
  criterion_9();

  const std::string sdir = SCENARIO_DIR;
  Scenario sc1 = load_scenario(sdir + "/fig2_scenario1.toml");
  Scenario sc2 = load_scenario(sdir + "/fig2_scenario2.toml");

  auto t0 = Clock::now();
  RunResult s2 = run_scenario(sc2, "acceptance_out/scenario2");
  const double s2_wall = seconds_since(t0);
  RunResult s1 = run_scenario(sc1, "acceptance_out/scenario1");
  RunResult s2b = run_scenario(sc2, "", Policy::Baseline);
  sweep_solver_log(s1.trace);
  sweep_solver_log(s2.trace);

  criterion_4(s2, s2_wall);
  criterion_5(s1);
  criterion_6(s2, s2b);
  criterion_7(s1, s2, s2b);
  criterion_8(s1, s2, "acceptance_out/scenario2/summary.json");
  criterion_10();
  criterion_11();
  criterion_2();

  int failures = 0;
  for (int n = 1; n <= 11; ++n) {
    const auto& c = results[n];
    if (!c.ok) ++failures;
    std::printf("[%s] criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", n,
                names[n], c.detail.empty() ? "" : " -- ", c.detail.c_str());
  }
  if (failures > 0) {
    std::printf("%d of 11 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
