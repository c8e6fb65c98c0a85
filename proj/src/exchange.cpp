#include "predictor/exchange.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace predictor {

namespace {

constexpr size_t kHeaderBytes = 8;

void put_u16(std::vector<uint8_t>& b, uint16_t v) {
  b.push_back(static_cast<uint8_t>(v & 0xff));
  b.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& b, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    b.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  }
}

uint32_t get_u32(const std::vector<uint8_t>& b, size_t off) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(b.at(off + static_cast<size_t>(i))) << (8 * i);
  }
  return v;
}

// 0.01 packets/s fixed point, clamped to nonnegative
uint32_t to_fixed(double v) {
  const double c = std::max(v, 0.0) * 100.0;
  return static_cast<uint32_t>(std::llround(c));
}

double from_fixed(uint32_t v) { return static_cast<double>(v) / 100.0; }

void put_header(std::vector<uint8_t>& b, uint16_t sender, uint32_t step,
                size_t circuits, size_t horizon) {
  put_u16(b, sender);
  put_u32(b, step);
  b.push_back(static_cast<uint8_t>(circuits));
  b.push_back(static_cast<uint8_t>(horizon));
}

void put_trajectories(std::vector<uint8_t>& b,
                      const std::vector<std::vector<double>>& ts) {
  for (const auto& t : ts) {
    for (double v : t) {
      put_u32(b, to_fixed(v));
    }
  }
}

}  // namespace

std::vector<uint8_t> encode(const DownstreamMsg& m) {
  std::vector<uint8_t> b;
  const size_t h = m.r_out.empty() ? 0 : m.r_out[0].size();
  b.reserve(wire_size(m));
  put_header(b, m.sender, m.step, m.r_out.size(), h);
  put_trajectories(b, m.r_out);
  put_trajectories(b, m.s_queue);
  return b;
}

std::vector<uint8_t> encode(const UpstreamMsg& m) {
  std::vector<uint8_t> b;
  const size_t h = m.r_in.empty() ? 0 : m.r_in[0].size();
  b.reserve(wire_size(m));
  put_header(b, m.sender, m.step, m.r_in.size(), h);
  put_trajectories(b, m.r_in);
  return b;
}

DownstreamMsg decode_downstream(const std::vector<uint8_t>& buf) {
  if (buf.size() < kHeaderBytes) {
    throw std::runtime_error("downstream message truncated");
  }
  DownstreamMsg m;
  m.sender = static_cast<uint16_t>(buf[0] | (buf[1] << 8));
  m.step = get_u32(buf, 2);
  const size_t nc = buf[6], h = buf[7];
  if (buf.size() != kHeaderBytes + 2 * nc * h * 4) {
    throw std::runtime_error("downstream message size mismatch");
  }
  size_t off = kHeaderBytes;
  auto read_block = [&](std::vector<std::vector<double>>& out) {
    out.assign(nc, std::vector<double>(h));
    for (size_t c = 0; c < nc; ++c) {
      for (size_t k = 0; k < h; ++k, off += 4) {
        out[c][k] = from_fixed(get_u32(buf, off));
      }
    }
  };
  read_block(m.r_out);
  read_block(m.s_queue);
  return m;
}

UpstreamMsg decode_upstream(const std::vector<uint8_t>& buf) {
  if (buf.size() < kHeaderBytes) {
    throw std::runtime_error("upstream message truncated");
  }
  UpstreamMsg m;
  m.sender = static_cast<uint16_t>(buf[0] | (buf[1] << 8));
  m.step = get_u32(buf, 2);
  const size_t nc = buf[6], h = buf[7];
  if (buf.size() != kHeaderBytes + nc * h * 4) {
    throw std::runtime_error("upstream message size mismatch");
  }
  size_t off = kHeaderBytes;
  m.r_in.assign(nc, std::vector<double>(h));
  for (size_t c = 0; c < nc; ++c) {
    for (size_t k = 0; k < h; ++k, off += 4) {
      m.r_in[c][k] = from_fixed(get_u32(buf, off));
    }
  }
  return m;
}

size_t wire_size(const DownstreamMsg& m) {
  const size_t h = m.r_out.empty() ? 0 : m.r_out[0].size();
  return kHeaderBytes + 2 * m.r_out.size() * h * 4;
}

size_t wire_size(const UpstreamMsg& m) {
  const size_t h = m.r_in.empty() ? 0 : m.r_in[0].size();
  return kHeaderBytes + m.r_in.size() * h * 4;
}

std::string to_json(const DownstreamMsg& m) {
  nlohmann::json j{{"sender", m.sender}, {"step", m.step},
                   {"circuits", m.circuit_ids}, {"r_out", m.r_out},
                   {"s_queue", m.s_queue}};
  return j.dump();
}

std::string to_json(const UpstreamMsg& m) {
  nlohmann::json j{{"sender", m.sender}, {"step", m.step},
                   {"circuits", m.circuit_ids}, {"r_in", m.r_in}};
  return j.dump();
}

void ControlPlane::post(int to_node, const DownstreamMsg& m) {
  down_[to_node].push_back(m);
  log_.push_back({MessageLogEntry::Direction::Downstream, wire_size(m), m.step, m.step});
}

void ControlPlane::post(int to_node, const UpstreamMsg& m) {
  up_[to_node].push_back(m);
  log_.push_back({MessageLogEntry::Direction::Upstream, wire_size(m), m.step, m.step + 1});
}

std::vector<DownstreamMsg> ControlPlane::collect_downstream(int node, uint32_t step) {
  std::vector<DownstreamMsg> out;
  auto& box = down_[node];
  auto it = box.begin();
  while (it != box.end()) {
    if (it->step == step) {
      out.push_back(*it);
      it = box.erase(it);
    } else if (it->step < step) {
      it = box.erase(it);  // stale, superseded
    } else {
      ++it;
    }
  }
  return out;
}

std::vector<UpstreamMsg> ControlPlane::collect_upstream(int node, uint32_t step) {
  std::vector<UpstreamMsg> out;
  auto& box = up_[node];
  auto it = box.begin();
  while (it != box.end()) {
    if (it->step + 1 == step) {
      out.push_back(*it);
      it = box.erase(it);
    } else if (it->step + 1 < step) {
      it = box.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

}  // namespace predictor
