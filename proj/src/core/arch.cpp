#include "core/arch.hpp"

namespace hpdp {

const std::vector<OpInfo>& op_table() {
  // {op, name, min_in, max_in, min_out, max_out}
  static const std::vector<OpInfo> table = {
      {Op::constant, "const", 1, 1, 1, 1},
      {Op::route, "route", 1, 1, 1, 1},
      {Op::add, "add", 1, 2, 1, 1},
      {Op::sub, "sub", 1, 2, 1, 1},
      {Op::mul, "mul", 1, 2, 1, 2}, // second output carries the high product word
      {Op::mac, "mac", 2, 3, 1, 1}, // optional third input re-seeds the accumulator
      {Op::shl, "shl", 1, 2, 1, 1},
      {Op::shr_round, "shr_round", 1, 3, 1, 1},
      {Op::clamp, "clamp", 1, 1, 1, 1},
      {Op::counter, "counter", 0, 0, 1, 1},
      {Op::mux, "mux", 3, 3, 1, 1},
      {Op::dup, "dup", 1, 1, 2, 2},
  };
  return table;
}

const OpInfo& op_info(Op op) {
  for (const auto& info : op_table())
    if (info.op == op) return info;
  fail(errc::internal, "unknown opcode");
}

const OpInfo* op_info_by_name(const std::string& name) {
  for (const auto& info : op_table())
    if (name == info.name) return &info;
  return nullptr;
}

std::optional<int> alu_in_port(const std::string& name) {
  if (name == "in0" || name == "w0") return 0;
  if (name == "in1" || name == "n0") return 1;
  if (name == "in2" || name == "s0") return 2;
  return std::nullopt;
}

std::optional<int> alu_out_port(const std::string& name) {
  if (name == "out0" || name == "e0") return 0;
  if (name == "out1" || name == "e1") return 1;
  return std::nullopt;
}

const std::vector<std::string>& ram_port_names() {
  static const std::vector<std::string> names = {"push", "pop", "addr", "din", "dout"};
  return names;
}

} // namespace hpdp
