#pragma once

#include <string>
#include <vector>

#include "core/arch.hpp"

namespace hpdp {

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  int line = 0;      // 1-based
  int col_begin = 0; // 1-based, inclusive
  int col_end = 0;   // exclusive
  std::string code;  // stable identifier, e.g. "row-out-of-range"
  std::string message;

  std::string str() const;
};

struct ParseResult {
  ArrayConfig config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::error) return false;
    return true;
  }
};

// Parses `.xcfg` text. Collects every diagnostic it can find rather than
// stopping at the first; never throws on malformed input.
ParseResult parse_config(const std::string& text);

// Semantic checks on a structurally valid config: resource limits, dangling
// or multiply-driven ports, arity violations, unreachable elements, preload
// overflow. Errors here are exactly the conditions that make build_array
// reject the config.
std::vector<Diagnostic> validate_config(const ArrayConfig& config);

// Deterministic canonical form; parse_config(emit_config(c)) is structurally
// equal to c.
std::string emit_config(const ArrayConfig& config);

// Introspection for tooling and the grammar-consistency test.
const std::vector<std::string>& dsl_keywords();
std::vector<std::string> dsl_opcode_names();
std::vector<std::string> dsl_port_names();

} // namespace hpdp
