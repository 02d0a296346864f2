#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/arch.hpp"

namespace hpdp {

struct TraceOptions {
  bool enabled = false;
  uint64_t cycle_lo = 1;
  uint64_t cycle_hi = UINT64_MAX;
  bool include_firings = false;
};

struct PaeStats {
  uint64_t firings = 0;
  uint64_t stalls = 0;
};

struct SimReport {
  uint64_t total_cycles = 0;
  int64_t clock_hz = 250'000'000;
  int active_elements = 0; // placed ALU + RAM elements
  std::vector<std::pair<std::string, PaeStats>> pae;       // deterministic order
  std::vector<std::pair<std::string, uint64_t>> stream_in; // packets consumed from host queues
  std::vector<std::pair<std::string, uint64_t>> stream_out;

  double latency_ms() const {
    return static_cast<double>(total_cycles) / (static_cast<double>(clock_hz) / 1000.0);
  }
  uint64_t total_firings() const;
  double utilization() const;
  void merge(const SimReport& other);
};

struct CycleSummary {
  uint64_t cycle = 0;
  bool activity = false;
  int firings = 0;
  int packets_moved = 0;
};

struct ChannelStat {
  std::string src;
  std::string dst;
  uint64_t produced = 0;
  uint64_t consumed = 0;
  bool valid_at_end = false;
};

// Cycle-stepped execution of an ArrayConfig.
//
// Each cycle runs in two phases. Phase one evaluates, against the
// cycle-start channel state, which elements fire: an element fires when every
// input it would consume is valid and every channel it would write is free.
// "Free" chains through same-cycle consumption — a full channel whose
// consumer also fires this cycle counts as free — computed as a least
// fixpoint, so a full pipeline advances one packet per cycle and evaluation
// order never matters. Phase two commits: consumed registers clear, latched
// results land in output registers, output streams drain.
class Simulator {
public:
  explicit Simulator(ArrayConfig config, TraceOptions trace = {});

  void push_input(const std::string& stream, std::span<const int32_t> words);

  CycleSummary step();

  // Steps until a cycle passes with no activity, or throws errc::timeout
  // naming still-active and stalled elements once max_cycles is exceeded.
  SimReport run_until_idle(uint64_t max_cycles);

  const std::vector<int32_t>& output(const std::string& stream) const;
  std::vector<int32_t> take_output(const std::string& stream);

  uint64_t current_cycle() const { return cycle_; }
  SimReport report() const;
  std::vector<ChannelStat> channel_stats() const;

  // Formats recorded packet movements in [lo, hi]; requires tracing enabled.
  std::string trace_text(uint64_t lo = 1, uint64_t hi = UINT64_MAX) const;

  const ArrayConfig& config() const { return config_; }

private:
  enum class NodeKind { stream_in, stream_out, alu, ram };

  struct Node {
    NodeKind kind;
    int cfg_index; // into config_.alus / rams / streams
    std::string id;
    int in_ch[3] = {-1, -1, -1};
    int out_ch[2] = {-1, -1};
    // runtime state
    int32_t acc = 0;
    int mac_pos = 0;
    int64_t counter_remaining = 0;
    int32_t counter_next = 0;
    std::vector<int32_t> mem;  // ram words or fifo ring
    int fifo_head = 0;
    int fifo_size = 0;
    size_t queue_head = 0; // stream_in
    std::vector<int32_t> queue;
    std::vector<int32_t> collected; // stream_out
    PaeStats stats;
  };

  struct Wire {
    int src_node, src_port;
    int dst_node, dst_port;
    std::string src_name, dst_name; // endpoint spellings for traces
    int32_t value = 0;
    bool valid = false;
    uint64_t produced = 0;
    uint64_t consumed = 0;
  };

  struct TraceEvent {
    uint64_t cycle;
    int wire;
    int32_t value;
  };

  int node_index(const std::string& id) const;
  void wire_up(const ArrayConfig& cfg);
  [[noreturn]] void runtime_error(const Node& n, const std::string& msg) const;

  ArrayConfig config_;
  TraceOptions trace_;
  std::vector<Node> nodes_; // ordered: in-streams, ALUs row-major, RAMs, out-streams
  std::vector<Wire> wires_;
  uint64_t cycle_ = 0;
  uint64_t last_active_cycle_ = 0;

  // per-cycle scratch, sized once
  std::vector<uint8_t> desire_, fires_, accepts_;
  std::vector<uint8_t> consume_mask_; // 3 per node
  struct Emit {
    int32_t v[2];
    uint8_t mask = 0;
  };
  std::vector<Emit> emits_;
  std::vector<TraceEvent> events_;
  std::vector<std::pair<uint64_t, std::vector<int>>> fired_log_;
};

// Convenience matching the architecture vocabulary: validates and constructs.
Simulator build_array(const ArrayConfig& config, TraceOptions trace = {});

// Human-readable occupancy map, opcode list, channel list and resource totals.
std::string config_report(const ArrayConfig& config);

} // namespace hpdp
