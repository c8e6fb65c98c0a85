#include "predictor/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace predictor {

int token_bucket_forward(TokenBucket& b, int queue_len, double dt) {
  b.tokens = std::min(b.tokens + b.rate * dt, b.capacity);
  const int send = std::min(static_cast<int>(std::floor(b.tokens + 1e-9)), queue_len);
  b.tokens -= send;
  return send;
}

double source_emit(const SourceModel& m, double t0, double t1) {
  if (m.kind == SourceModel::Kind::Infinite) {
    return m.rate * (t1 - t0);
  }
  double total = 0.0;
  for (const auto& [start, stop] : m.windows) {
    const double lo = std::max(t0, start);
    const double hi = std::min(t1, stop);
    if (hi > lo) {
      total += m.rate * (hi - lo);
    }
  }
  return total;
}

namespace {

double quantize(double v) { return std::round(std::max(v, 0.0) * 100.0) / 100.0; }

std::vector<double> quantize_all(const std::vector<double>& v, size_t n) {
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = quantize(v[i]);
  }
  return out;
}

// Shift a received trajectory left by `by` steps, repeating the final
// element to keep horizons aligned.
std::vector<double> shift_tail_pad(const std::vector<double>& t, int by) {
  std::vector<double> out(t.size());
  for (size_t k = 0; k < t.size(); ++k) {
    out[k] = t[std::min(k + static_cast<size_t>(by), t.size() - 1)];
  }
  return out;
}

struct LocalCircuit {
  int cid = 0;
  int pred = -1;  // node index, -1 = source
  int succ = -1;  // node index, -1 = sink
  std::deque<int> queue;  // packet indices
  TokenBucket out_bucket;
  TokenBucket admit_bucket;  // entry admission shaper
  TokenBucket src_bucket;    // offered-load shaper
  // last received control-plane state
  std::vector<double> last_down_rate, last_down_queue;
  std::vector<double> last_up_rate;
  int down_step = -1, up_step = -1;
};

struct NodeRt {
  std::vector<LocalCircuit> circuits;
  QpSolution warm;
  bool has_warm = false;
};

struct Arrival {
  int node = 0;
  int circuit = 0;
  int packet = 0;
};

// Order nodes so data-plane predecessors solve before their successors;
// downstream messages then arrive within the same control step.
std::vector<int> topo_order(const NetworkTopology& t) {
  const int n = static_cast<int>(t.nodes.size());
  std::vector<std::vector<int>> adj(n);
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const auto& c : t.circuits) {
    for (size_t k = 0; k + 1 < c.path.size(); ++k) {
      const int a = t.node_index(c.path[k]);
      const int b = t.node_index(c.path[k + 1]);
      if (!seen[a][b]) {
        seen[a][b] = true;
        adj[a].push_back(b);
        ++indeg[b];
      }
    }
  }
  std::vector<int> order;
  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end());
    const int v = ready.front();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int w : adj[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  for (int i = 0; i < n; ++i) {  // cycle fallback
    if (std::find(order.begin(), order.end(), i) == order.end()) {
      order.push_back(i);
    }
  }
  return order;
}

class Simulation {
 public:
  explicit Simulation(const Scenario& sc) : sc_(sc) {
    validate_topology(sc_.topology);
    const auto& t = sc_.topology;
    nodes_.resize(t.nodes.size());
    for (const auto& c : t.circuits) {
      for (size_t pos = 0; pos < c.path.size(); ++pos) {
        LocalCircuit lc;
        lc.cid = c.id;
        lc.pred = pos > 0 ? t.node_index(c.path[pos - 1]) : -1;
        lc.succ = pos + 1 < c.path.size() ? t.node_index(c.path[pos + 1]) : -1;
        nodes_[static_cast<size_t>(t.node_index(c.path[pos]))].circuits.push_back(lc);
      }
    }
    order_ = topo_order(t);
    steps_ = static_cast<int>(std::llround(sc_.duration / sc_.controller.dt));
    for (const auto& l : t.links) {
      const int ticks = std::max(1, static_cast<int>(std::llround(l.delay / sc_.controller.dt)));
      link_ticks_[{t.node_index(l.from), t.node_index(l.to)}] = ticks;
    }
    arrivals_.resize(static_cast<size_t>(steps_) + 16);
    trace_.dt = sc_.controller.dt;
    trace_.steps = steps_;
    trace_.packet_bytes = sc_.packet_bytes;
    for (const auto& n : t.nodes) trace_.node_ids.push_back(n.id);
    trace_.drops.assign(t.circuits.size(), 0);
    seqs_.assign(t.circuits.size(), 0);
  }

  SimTrace run() {
    for (int step = 0; step < steps_; ++step) {
      deliver_arrivals(step);
      if (sc_.policy == Policy::Predictor) {
        control_step(step);
        admit_predictor(step);
        forward_predictor(step);
      } else {
        admit_baseline(step);
        forward_baseline(step);
      }
      sample(step);
    }
    trace_.messages = plane_.log();
    return std::move(trace_);
  }

 private:
  int delay_ticks(int from, int to) const { return link_ticks_.at({from, to}); }

  void deliver_arrivals(int step) {
    for (const auto& a : arrivals_[static_cast<size_t>(step)]) {
      for (auto& lc : nodes_[static_cast<size_t>(a.node)].circuits) {
        if (lc.cid == a.circuit) {
          lc.queue.push_back(a.packet);
          break;
        }
      }
      --inflight_;
    }
    arrivals_[static_cast<size_t>(step)].clear();
  }

  void control_step(int step) {
    const auto& t = sc_.topology;
    const int h = sc_.controller.horizon;
    for (int node : order_) {
      auto& rt = nodes_[static_cast<size_t>(node)];
      if (rt.circuits.empty()) continue;

      for (const auto& m : plane_.collect_downstream(node, static_cast<uint32_t>(step))) {
        for (size_t i = 0; i < m.circuit_ids.size(); ++i) {
          for (auto& lc : rt.circuits) {
            if (lc.cid == m.circuit_ids[i]) {
              lc.last_down_rate = m.r_out[i];
              lc.last_down_queue = m.s_queue[i];
              lc.down_step = static_cast<int>(m.step);
            }
          }
        }
      }
      for (const auto& m : plane_.collect_upstream(node, static_cast<uint32_t>(step))) {
        for (size_t i = 0; i < m.circuit_ids.size(); ++i) {
          for (auto& lc : rt.circuits) {
            if (lc.cid == m.circuit_ids[i]) {
              lc.last_up_rate = m.r_in[i];
              lc.up_step = static_cast<int>(m.step);
            }
          }
        }
      }

      ControllerInputs in;
      in.capacity_in = t.nodes[static_cast<size_t>(node)].capacity_in;
      in.capacity_out = t.nodes[static_cast<size_t>(node)].capacity_out;
      for (auto& lc : rt.circuits) {
        in.s_init.push_back(static_cast<double>(lc.queue.size()));
        if (lc.pred < 0) {
          // synthetic predecessor: the source offers its scheduled load
          // and keeps no backlog of unsent data
          std::vector<double> offered(static_cast<size_t>(h));
          const auto& src = t.circuits[static_cast<size_t>(lc.cid)].source;
          for (int k = 0; k < h; ++k) {
            const double tk = (step + k) * sc_.controller.dt;
            offered[static_cast<size_t>(k)] = src.active_at(tk) ? src.rate : 0.0;
          }
          in.pred_out_rate.push_back(offered);
          in.pred_queue.push_back(std::vector<double>(static_cast<size_t>(h), 0.0));
        } else if (lc.down_step >= 0) {
          const int stale = step - lc.down_step;
          in.pred_out_rate.push_back(shift_tail_pad(lc.last_down_rate, stale));
          in.pred_queue.push_back(shift_tail_pad(lc.last_down_queue, stale));
        } else {
          in.pred_out_rate.push_back(std::vector<double>(static_cast<size_t>(h), 0.0));
          in.pred_queue.push_back(std::vector<double>(static_cast<size_t>(h), 0.0));
        }
        if (lc.succ < 0) {
          // synthetic successor grants the full outgoing capacity
          in.succ_in_rate.push_back(
              std::vector<double>(static_cast<size_t>(h), in.capacity_out));
        } else if (lc.up_step >= 0) {
          const int stale = step - 1 - lc.up_step;
          in.succ_in_rate.push_back(shift_tail_pad(lc.last_up_rate, stale));
        } else {
          in.succ_in_rate.push_back(std::vector<double>(static_cast<size_t>(h), 0.0));
        }
      }

      const auto t0 = std::chrono::steady_clock::now();
      OcpSolution plan = solve_node_step(
          sc_.controller, in, rt.has_warm ? &rt.warm : nullptr,
          "node " + t.nodes[static_cast<size_t>(node)].id + " step " +
              std::to_string(step) + ": ");
      const auto t1 = std::chrono::steady_clock::now();
      rt.warm = plan.raw;
      rt.has_warm = true;

      SolverLogEntry log;
      log.step = step;
      log.node = node;
      log.objective = plan.objective;
      log.iterations = plan.iterations;
      log.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      log.residuals = plan.residuals;
      trace_.solver_log.push_back(log);

      // apply first elements, remember plan rates for the trace
      for (size_t i = 0; i < rt.circuits.size(); ++i) {
        auto& lc = rt.circuits[i];
        lc.out_bucket.set_rate(std::max(0.0, plan.r_out[i][0]), sc_.controller.dt);
        if (lc.pred < 0) {
          lc.admit_bucket.set_rate(std::max(0.0, plan.r_in[i][0]), sc_.controller.dt);
        }
        RateRecord rec;
        rec.step = step;
        rec.node = node;
        rec.circuit = lc.cid;
        rec.r_in_plan = plan.r_in[i][0];
        rec.r_out_plan = plan.r_out[i][0];
        rate_index_[{step, node, lc.cid}] = trace_.rates.size();
        trace_.rates.push_back(rec);
      }

      emit_messages(node, rt, plan, step);
    }
  }

  void emit_messages(int node, const NodeRt& rt, const OcpSolution& plan, int step) {
    const size_t h = static_cast<size_t>(sc_.controller.horizon);
    std::map<int, DownstreamMsg> down;
    std::map<int, UpstreamMsg> up;
    for (size_t i = 0; i < rt.circuits.size(); ++i) {
      const auto& lc = rt.circuits[i];
      if (lc.succ >= 0) {
        auto& m = down[lc.succ];
        m.circuit_ids.push_back(lc.cid);
        m.r_out.push_back(quantize_all(plan.r_out[i], h));
        m.s_queue.push_back(quantize_all(plan.s_pred[i], h));
      }
      if (lc.pred >= 0) {
        auto& m = up[lc.pred];
        m.circuit_ids.push_back(lc.cid);
        m.r_in.push_back(quantize_all(plan.r_in[i], h));
      }
    }
    for (auto& [to, m] : down) {
      m.sender = static_cast<uint16_t>(node);
      m.step = static_cast<uint32_t>(step);
      plane_.post(to, m);
    }
    for (auto& [to, m] : up) {
      m.sender = static_cast<uint16_t>(node);
      m.step = static_cast<uint32_t>(step);
      plane_.post(to, m);
    }
  }

  void admit_predictor(int step) {
    const auto& t = sc_.topology;
    for (int node : order_) {
      for (auto& lc : nodes_[static_cast<size_t>(node)].circuits) {
        if (lc.pred >= 0) continue;
        const auto& src = t.circuits[static_cast<size_t>(lc.cid)].source;
        const double t0 = step * sc_.controller.dt;
        const double offered = source_emit(src, t0, t0 + sc_.controller.dt);
        lc.src_bucket.rate = offered / sc_.controller.dt;
        lc.src_bucket.capacity = 2.0 * offered;
        lc.src_bucket.tokens = std::min(lc.src_bucket.tokens + offered, lc.src_bucket.capacity);
        lc.admit_bucket.tokens = std::min(
            lc.admit_bucket.tokens + lc.admit_bucket.rate * sc_.controller.dt,
            lc.admit_bucket.capacity);
        const double limit = t.nodes[static_cast<size_t>(node)].queue_limit;
        const int space = std::max(
            0, static_cast<int>(std::floor(limit)) - static_cast<int>(lc.queue.size()));
        const int n = std::min(
            space, static_cast<int>(std::floor(
                       std::min(lc.admit_bucket.tokens, lc.src_bucket.tokens) + 1e-9)));
        lc.admit_bucket.tokens -= n;
        lc.src_bucket.tokens -= n;
        for (int i = 0; i < n; ++i) {
          enqueue_new_packet(lc);
        }
      }
    }
  }

  void enqueue_new_packet(LocalCircuit& lc) {
    PacketEvent p;
    p.circuit = lc.cid;
    p.seq = seqs_[static_cast<size_t>(lc.cid)]++;
    // enter is stamped when the entry relay transmits the packet into the
    // overlay; until then it waits in the backpressured entry queue.
    p.enter = -1.0;
    lc.queue.push_back(static_cast<int>(trace_.packets.size()));
    trace_.packets.push_back(p);
  }

  void send_packets(int node, LocalCircuit& lc, int n, int step) {
    for (int i = 0; i < n; ++i) {
      const int pkt = lc.queue.front();
      lc.queue.pop_front();
      if (trace_.packets[static_cast<size_t>(pkt)].enter < 0.0) {
        trace_.packets[static_cast<size_t>(pkt)].enter = step * sc_.controller.dt;
      }
      if (lc.succ < 0) {
        trace_.packets[static_cast<size_t>(pkt)].leave = step * sc_.controller.dt;
      } else {
        const int at = step + delay_ticks(node, lc.succ);
        if (at < static_cast<int>(arrivals_.size())) {
          arrivals_[static_cast<size_t>(at)].push_back({lc.succ, lc.cid, pkt});
          ++inflight_;
        } else {
          ++inflight_;  // leaves the simulated window in flight
        }
      }
    }
  }

  void forward_predictor(int step) {
    for (int node : order_) {
      for (auto& lc : nodes_[static_cast<size_t>(node)].circuits) {
        const int n = token_bucket_forward(lc.out_bucket,
                                           static_cast<int>(lc.queue.size()),
                                           sc_.controller.dt);
        auto it = rate_index_.find({step, node, lc.cid});
        if (it != rate_index_.end()) {
          trace_.rates[it->second].forwarded = n;
        }
        send_packets(node, lc, n, step);
      }
    }
  }

  void admit_baseline(int step) {
    const auto& t = sc_.topology;
    for (int node : order_) {
      for (auto& lc : nodes_[static_cast<size_t>(node)].circuits) {
        if (lc.pred >= 0) continue;
        const auto& src = t.circuits[static_cast<size_t>(lc.cid)].source;
        const double t0 = step * sc_.controller.dt;
        const double offered = source_emit(src, t0, t0 + sc_.controller.dt);
        const double cap = t.nodes[static_cast<size_t>(node)].capacity_in * sc_.controller.dt;
        lc.src_bucket.tokens = std::min(lc.src_bucket.tokens + std::min(offered, cap),
                                        2.0 * std::max(offered, cap));
        int n = static_cast<int>(std::floor(lc.src_bucket.tokens + 1e-9));
        lc.src_bucket.tokens -= n;
        for (int i = 0; i < n; ++i) {
          if (static_cast<int>(lc.queue.size()) >= sc_.baseline_queue_cap) {
            ++trace_.drops[static_cast<size_t>(lc.cid)];
            ++trace_.total_dropped;
          } else {
            enqueue_new_packet(lc);
          }
        }
      }
    }
  }

  void forward_baseline(int step) {
    const auto& t = sc_.topology;
    for (int node : order_) {
      auto& rt = nodes_[static_cast<size_t>(node)];
      if (rt.circuits.empty()) continue;
      auto& carry = baseline_carry_[node];
      carry += t.nodes[static_cast<size_t>(node)].capacity_out * sc_.controller.dt;
      int budget = static_cast<int>(std::floor(carry + 1e-9));
      carry -= budget;
      auto& rr = baseline_rr_[node];
      // round-robin one packet at a time across circuit queues
      int idle_passes = 0;
      while (budget > 0 && idle_passes < static_cast<int>(rt.circuits.size())) {
        auto& lc = rt.circuits[rr % rt.circuits.size()];
        rr = (rr + 1) % rt.circuits.size();
        if (lc.queue.empty()) {
          ++idle_passes;
          continue;
        }
        idle_passes = 0;
        const int pkt = lc.queue.front();
        lc.queue.pop_front();
        --budget;
        if (trace_.packets[static_cast<size_t>(pkt)].enter < 0.0) {
          trace_.packets[static_cast<size_t>(pkt)].enter = step * sc_.controller.dt;
        }
        if (lc.succ < 0) {
          trace_.packets[static_cast<size_t>(pkt)].leave = step * sc_.controller.dt;
        } else {
          // downstream queue cap applies on arrival
          const int at = step + delay_ticks(node, lc.succ);
          if (at < static_cast<int>(arrivals_.size())) {
            arrivals_[static_cast<size_t>(at)].push_back({lc.succ, lc.cid, pkt});
            ++inflight_;
          } else {
            ++inflight_;
          }
        }
      }
    }
    // enforce per-circuit caps for next step's arrivals
    enforce_baseline_caps(step + 1);
  }

  void enforce_baseline_caps(int step) {
    if (step >= static_cast<int>(arrivals_.size())) return;
    auto& list = arrivals_[static_cast<size_t>(step)];
    std::map<std::pair<int, int>, int> pending;
    std::vector<Arrival> kept;
    for (const auto& a : list) {
      auto& lc_queue_len = pending[{a.node, a.circuit}];
      int current = 0;
      for (const auto& lc : nodes_[static_cast<size_t>(a.node)].circuits) {
        if (lc.cid == a.circuit) current = static_cast<int>(lc.queue.size());
      }
      if (current + lc_queue_len >= sc_.baseline_queue_cap) {
        ++trace_.drops[static_cast<size_t>(a.circuit)];
        ++trace_.total_dropped;
        --inflight_;
      } else {
        ++lc_queue_len;
        kept.push_back(a);
      }
    }
    list = std::move(kept);
  }

  void sample(int step) {
    for (size_t node = 0; node < nodes_.size(); ++node) {
      for (const auto& lc : nodes_[node].circuits) {
        QueueSample qs;
        qs.step = step;
        qs.node = static_cast<int>(node);
        qs.circuit = lc.cid;
        qs.queue = static_cast<int>(lc.queue.size());
        trace_.queue_samples.push_back(qs);
      }
    }
    trace_.inflight.push_back(inflight_);
  }

  Scenario sc_;
  std::vector<NodeRt> nodes_;
  std::vector<int> order_;
  std::map<std::pair<int, int>, int> link_ticks_;
  std::vector<std::vector<Arrival>> arrivals_;
  std::map<std::tuple<int, int, int>, size_t> rate_index_;
  std::map<int, double> baseline_carry_;
  std::map<int, size_t> baseline_rr_;
  ControlPlane plane_;
  SimTrace trace_;
  std::vector<int64_t> seqs_;
  int steps_ = 0;
  int inflight_ = 0;
};

}  // namespace

SimTrace run(const Scenario& scenario) {
  Simulation sim(scenario);
  return sim.run();
}

}  // namespace predictor
