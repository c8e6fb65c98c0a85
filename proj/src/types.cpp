#include "predictor/types.hpp"

#include <set>

namespace predictor {

bool SourceModel::active_at(double t) const {
  if (kind == Kind::Infinite) {
    return true;
  }
  for (const auto& [start, stop] : windows) {
    if (t >= start && t < stop) {
      return true;
    }
  }
  return false;
}

int NetworkTopology::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

bool NetworkTopology::has_link(const std::string& from, const std::string& to) const {
  for (const auto& l : links) {
    if (l.from == from && l.to == to) {
      return true;
    }
  }
  return false;
}

std::vector<int> NetworkTopology::circuits_at(const std::string& node_id) const {
  std::vector<int> out;
  for (const auto& c : circuits) {
    for (const auto& n : c.path) {
      if (n == node_id) {
        out.push_back(c.id);
        break;
      }
    }
  }
  return out;
}

const NetworkTopology& validate_topology(const NetworkTopology& t) {
  std::set<std::string> ids;
  for (const auto& n : t.nodes) {
    if (!ids.insert(n.id).second) {
      throw ValidationError("duplicate node id: " + n.id);
    }
    if (n.capacity_in <= 0.0) {
      throw ValidationError("node " + n.id + ": capacity_in must be positive");
    }
    if (n.capacity_out <= 0.0) {
      throw ValidationError("node " + n.id + ": capacity_out must be positive");
    }
    if (n.queue_limit <= 0.0) {
      throw ValidationError("node " + n.id + ": queue_limit must be positive");
    }
  }
  for (const auto& l : t.links) {
    if (t.node_index(l.from) < 0) {
      throw ValidationError("link references missing node: " + l.from);
    }
    if (t.node_index(l.to) < 0) {
      throw ValidationError("link references missing node: " + l.to);
    }
    if (l.delay <= 0.0) {
      throw ValidationError("link " + l.from + "->" + l.to + ": delay must be positive");
    }
  }
  for (size_t i = 0; i < t.circuits.size(); ++i) {
    const auto& c = t.circuits[i];
    if (c.id != static_cast<int>(i)) {
      throw ValidationError("circuit ids must be dense 0..p-1 (found " +
                            std::to_string(c.id) + " at position " + std::to_string(i) + ")");
    }
    if (c.path.empty()) {
      throw ValidationError("circuit " + std::to_string(c.id) + ": empty path");
    }
    std::set<std::string> seen;
    for (const auto& n : c.path) {
      if (t.node_index(n) < 0) {
        throw ValidationError("circuit " + std::to_string(c.id) +
                              " references missing node: " + n);
      }
      if (!seen.insert(n).second) {
        throw ValidationError("circuit " + std::to_string(c.id) +
                              ": path is not simple (repeats " + n + ")");
      }
    }
    for (size_t k = 0; k + 1 < c.path.size(); ++k) {
      if (!t.has_link(c.path[k], c.path[k + 1])) {
        throw ValidationError("circuit " + std::to_string(c.id) + ": no link " +
                              c.path[k] + "->" + c.path[k + 1]);
      }
    }
    if (c.source.rate < 0.0) {
      throw ValidationError("circuit " + std::to_string(c.id) + ": negative source rate");
    }
    double prev_stop = -1.0;
    for (const auto& [start, stop] : c.source.windows) {
      if (stop <= start || start < prev_stop) {
        throw ValidationError("circuit " + std::to_string(c.id) +
                              ": source windows must be ordered and non-overlapping");
      }
      prev_stop = stop;
    }
  }
  return t;
}

bool is_feasible(const RateVector& r, const NetworkTopology& t) {
  for (const auto& c : t.circuits) {
    auto it = r.rates.find(c.id);
    if (it == r.rates.end() || it->second < 0.0) {
      return false;
    }
  }
  for (const auto& n : t.nodes) {
    double sum = 0.0;
    for (int cid : t.circuits_at(n.id)) {
      sum += r.rates.at(cid);
    }
    if (sum > n.capacity()) {
      return false;
    }
  }
  return true;
}

double total_backlog(const std::vector<NodeState>& states) {
  double b = 0.0;
  for (const auto& s : states) {
    for (const auto& [cid, q] : s.queue) {
      (void)cid;
      b += q;
    }
  }
  return b;
}

}  // namespace predictor
