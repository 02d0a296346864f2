#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace hpdp {

// Grid geometry. Defaults model the 5x8 ALU matrix flanked by two columns of
// eight RAM banks (40 ALU elements, 16 RAM elements).
struct ArrayDims {
  int alu_rows = 5;
  int alu_cols = 8;
  int ram_banks = 16; // split evenly over sides L and R
  int64_t clock_hz = 250'000'000;

  int alu_capacity() const { return alu_rows * alu_cols; }
  int ram_rows_per_side() const { return (ram_banks + 1) / 2; }
};

inline constexpr int kDefaultRamCapacity = 4096;

enum class Op {
  constant,
  route,
  add,
  sub,
  mul,
  mac,
  shl,
  shr_round,
  clamp,
  counter,
  mux,
  dup,
};

struct OpInfo {
  Op op;
  const char* name;
  int min_in;
  int max_in;
  int min_out;
  int max_out;
};

const std::vector<OpInfo>& op_table();
const OpInfo& op_info(Op op);
const OpInfo* op_info_by_name(const std::string& name);

struct AluPae {
  std::string id;
  int row = 0;
  int col = 0;
  Op op = Op::route;
  std::optional<int32_t> imm0;
  std::optional<int32_t> imm1;
};

enum class RamMode { fifo, ram };

struct RamPae {
  std::string id;
  int side = 0; // 0 = L, 1 = R
  int row = 0;
  RamMode mode = RamMode::fifo;
  int capacity = kDefaultRamCapacity;
  std::vector<int32_t> preload;
};

enum class StreamDir { in, out };

struct StreamBinding {
  std::string name;
  StreamDir dir = StreamDir::in;
};

// One end of a channel: a PAE port or a stream port.
struct Endpoint {
  std::string node; // ALU id, RAM id, or stream name
  std::string port; // canonical port name

  bool operator==(const Endpoint&) const = default;
  std::string str() const { return node + "." + port; }
};

// Capacity-1 handshake link. The register itself lives in the simulator; the
// config only names the two endpoints.
struct Channel {
  Endpoint src;
  Endpoint dst;
};

struct ArrayConfig {
  std::string name = "config";
  ArrayDims dims;
  std::vector<AluPae> alus;
  std::vector<RamPae> rams;
  std::vector<StreamBinding> streams;
  std::vector<Channel> channels;
};

// Canonical port-name helpers. ALU inputs are in0..in2 (compass aliases
// w0/n0/s0), outputs out0..out1 (e0/e1). RAM ports: push/pop in fifo mode,
// addr/din/dout in ram mode. Stream ports: an input stream produces on "out",
// an output stream consumes on "in".
std::optional<int> alu_in_port(const std::string& name);
std::optional<int> alu_out_port(const std::string& name);
const std::vector<std::string>& ram_port_names();

} // namespace hpdp
