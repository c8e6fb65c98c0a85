#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace predictor {

// Control-plane trajectory messages (Fig. 1 style exchange).
// Downstream travels with the data and is usable in the same control
// step; upstream travels against it and arrives one step late.

struct DownstreamMsg {
  uint16_t sender = 0;                     // node index
  uint32_t step = 0;                       // control step of emission
  std::vector<int> circuit_ids;            // circuits carried on this link
  std::vector<std::vector<double>> r_out;  // per circuit, horizon entries
  std::vector<std::vector<double>> s_queue;
};

struct UpstreamMsg {
  uint16_t sender = 0;
  uint32_t step = 0;
  std::vector<int> circuit_ids;
  std::vector<std::vector<double>> r_in;
};

struct MessageLogEntry {
  enum class Direction { Downstream, Upstream };
  Direction direction;
  size_t bytes = 0;
  uint32_t send_step = 0;
  uint32_t deliver_step = 0;
};

// Binary wire encoding: header {sender u16, step u32, circuit count u8,
// horizon u8}, then per trajectory entry a u32 fixed-point value at 0.01
// resolution. Downstream carries rates then queues; upstream rates only.
std::vector<uint8_t> encode(const DownstreamMsg& m);
std::vector<uint8_t> encode(const UpstreamMsg& m);
DownstreamMsg decode_downstream(const std::vector<uint8_t>& buf);
UpstreamMsg decode_upstream(const std::vector<uint8_t>& buf);

size_t wire_size(const DownstreamMsg& m);
size_t wire_size(const UpstreamMsg& m);

std::string to_json(const DownstreamMsg& m);
std::string to_json(const UpstreamMsg& m);

// Lossless in-order control plane owned by the simulation loop.
// Downstream posts are visible to the receiver in the emission step,
// upstream posts one step later.
class ControlPlane {
 public:
  void post(int to_node, const DownstreamMsg& m);
  void post(int to_node, const UpstreamMsg& m);

  /// Messages visible to `node` when solving at `step`.
  std::vector<DownstreamMsg> collect_downstream(int node, uint32_t step);
  std::vector<UpstreamMsg> collect_upstream(int node, uint32_t step);

  const std::vector<MessageLogEntry>& log() const { return log_; }

 private:
  std::map<int, std::vector<DownstreamMsg>> down_;
  std::map<int, std::vector<UpstreamMsg>> up_;
  std::vector<MessageLogEntry> log_;
};

}  // namespace predictor
