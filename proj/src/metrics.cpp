#include "predictor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace predictor {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return f;
}

}  // namespace

double jain_index(const std::vector<double>& delivered, bool& defined) {
  double sum = 0.0, sumsq = 0.0;
  for (double x : delivered) {
    sum += x;
    sumsq += x * x;
  }
  if (delivered.empty() || sumsq <= 0.0) {
    defined = false;
    return 0.0;
  }
  defined = true;
  return (sum * sum) / (static_cast<double>(delivered.size()) * sumsq);
}

RunMetrics compute(const SimTrace& trace) {
  RunMetrics m;
  const double cutoff = m.transient_skip_s;

  std::map<int, double> latency_sum;
  for (const auto& p : trace.packets) {
    auto& c = m.circuits[p.circuit];
    if (p.leave < 0.0) {
      continue;
    }
    ++c.delivered;
    ++m.delivered_total;
    const double lat_ms = (p.leave - p.enter) * 1000.0;
    latency_sum[p.circuit] += lat_ms;
    const int bin = static_cast<int>(std::floor(lat_ms / 10.0)) * 10;
    ++m.latency_hist[bin];
    if (p.enter >= cutoff) {
      ++c.delivered_steady;
    }
  }
  double all_latency = 0.0;
  for (auto& [cid, c] : m.circuits) {
    if (c.delivered > 0) {
      c.mean_latency_ms = latency_sum[cid] / static_cast<double>(c.delivered);
    }
    all_latency += latency_sum[cid];
  }
  if (m.delivered_total > 0) {
    m.mean_latency_ms = all_latency / static_cast<double>(m.delivered_total);
  }

  for (size_t cid = 0; cid < trace.drops.size(); ++cid) {
    if (trace.drops[cid] > 0) {
      m.circuits[static_cast<int>(cid)].dropped = trace.drops[cid];
    }
  }

  // Backlog: total queued packets per sampled step.
  m.backlog.assign(static_cast<size_t>(trace.steps), 0.0);
  for (const auto& s : trace.queue_samples) {
    if (s.step >= 0 && s.step < trace.steps) {
      m.backlog[static_cast<size_t>(s.step)] += s.queue;
    }
  }

  std::vector<double> steady;
  steady.reserve(m.circuits.size());
  for (const auto& [cid, c] : m.circuits) {
    (void)cid;
    steady.push_back(static_cast<double>(c.delivered_steady));
  }
  m.jain = jain_index(steady, m.jain_defined);

  for (const auto& e : trace.messages) {
    m.control_bytes += static_cast<int64_t>(e.bytes);
  }
  const double data_bytes =
      static_cast<double>(m.delivered_total) * trace.packet_bytes;
  if (data_bytes > 0.0) {
    m.overhead_pct = 100.0 * static_cast<double>(m.control_bytes) / data_bytes;
  }
  return m;
}

void write_outputs(const std::string& dir, const SimTrace& trace,
                   const RunMetrics& m, const std::string& scenario_name,
                   const std::string& policy) {
  {
    auto f = open_out(dir + "/rates.csv");
    f << "step,node,circuit,r_in_plan,r_out_plan,forwarded\n";
    for (const auto& r : trace.rates) {
      f << r.step << ',' << trace.node_ids.at(static_cast<size_t>(r.node))
        << ',' << r.circuit << ',' << fmt(r.r_in_plan) << ','
        << fmt(r.r_out_plan) << ',' << r.forwarded << '\n';
    }
  }
  {
    auto f = open_out(dir + "/backlog.csv");
    f << "step,node,circuit,queue\n";
    for (const auto& s : trace.queue_samples) {
      f << s.step << ',' << trace.node_ids.at(static_cast<size_t>(s.node))
        << ',' << s.circuit << ',' << s.queue << '\n';
    }
  }
  {
    auto f = open_out(dir + "/latency_hist.csv");
    f << "bin_start_ms,bin_end_ms,count\n";
    for (const auto& [bin, count] : m.latency_hist) {
      f << bin << ',' << bin + 10 << ',' << count << '\n';
    }
  }
  {
    auto f = open_out(dir + "/summary.json");
    std::ostringstream j;
    j << "{\n";
    j << "  \"scenario\": \"" << scenario_name << "\",\n";
    j << "  \"policy\": \"" << policy << "\",\n";
    j << "  \"steps\": " << trace.steps << ",\n";
    j << "  \"dt\": " << fmt(trace.dt) << ",\n";
    j << "  \"delivered_total\": " << m.delivered_total << ",\n";
    j << "  \"dropped_total\": " << trace.total_dropped << ",\n";
    j << "  \"mean_latency_ms\": " << fmt(m.mean_latency_ms) << ",\n";
    j << "  \"jain_index\": "
      << (m.jain_defined ? fmt(m.jain) : std::string("null")) << ",\n";
    j << "  \"control_bytes\": " << m.control_bytes << ",\n";
    j << "  \"overhead_pct\": " << fmt(m.overhead_pct) << ",\n";
    j << "  \"circuits\": {\n";
    bool first = true;
    for (const auto& [cid, c] : m.circuits) {
      if (!first) j << ",\n";
      first = false;
      j << "    \"" << cid << "\": {\"delivered\": " << c.delivered
        << ", \"delivered_steady\": " << c.delivered_steady
        << ", \"mean_latency_ms\": " << fmt(c.mean_latency_ms)
        << ", \"dropped\": " << c.dropped << "}";
    }
    j << "\n  }\n}\n";
    f << j.str();
  }
}

}  // namespace predictor
