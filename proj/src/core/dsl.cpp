#include "core/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace hpdp {

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << (severity == Severity::error ? "error" : "warning") << " at " << line << ":" << col_begin
     << "-" << col_end << " [" << code << "] " << message;
  return os.str();
}

namespace {

struct Token {
  std::string text;
  int col_begin = 0; // 1-based
  int col_end = 0;
};

// Splits on whitespace; '#' starts a comment. Punctuation that matters for the
// grammar ( ) , -> . = stays attached to its token and is peeled by the parser.
std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), int(i) + 1, int(j) + 1});
    i = j;
  }
  return out;
}

class LineParser {
public:
  LineParser(const std::vector<Token>& toks, int line_no, std::vector<Diagnostic>& diags)
      : toks_(toks), line_(line_no), diags_(diags) {}

  bool done() const { return pos_ >= toks_.size(); }

  const Token* peek() const { return done() ? nullptr : &toks_[pos_]; }

  const Token* next() { return done() ? nullptr : &toks_[pos_++]; }

  void error(const std::string& code, const std::string& msg) {
    int cb = 1, ce = 2;
    if (!toks_.empty()) {
      const Token& t = toks_[std::min(pos_, toks_.size() - 1)];
      cb = t.col_begin;
      ce = t.col_end;
    }
    diags_.push_back({Severity::error, line_, cb, ce, code, msg});
    failed_ = true;
  }

  void error_at(const Token& t, const std::string& code, const std::string& msg) {
    diags_.push_back({Severity::error, line_, t.col_begin, t.col_end, code, msg});
    failed_ = true;
  }

  bool failed() const { return failed_; }

  bool expect_word(const std::string& word) {
    const Token* t = next();
    if (!t || t->text != word) {
      error("expected-" + word, "expected '" + word + "'");
      return false;
    }
    return true;
  }

  bool parse_int(int64_t& out, const std::string& what) {
    const Token* t = next();
    if (!t) {
      error("missing-int", "expected " + what);
      return false;
    }
    return parse_int_text(*t, t->text, out, what);
  }

  bool parse_int_text(const Token& t, const std::string& text, int64_t& out,
                      const std::string& what) {
    if (text.empty()) {
      error_at(t, "bad-int", "expected " + what);
      return false;
    }
    size_t idx = 0;
    bool neg = false;
    if (text[0] == '-' || text[0] == '+') {
      neg = text[0] == '-';
      idx = 1;
    }
    int base = 10;
    if (text.size() > idx + 1 && text[idx] == '0' && (text[idx + 1] == 'x' || text[idx + 1] == 'X')) {
      base = 16;
      idx += 2;
    }
    if (idx >= text.size()) {
      error_at(t, "bad-int", "malformed integer '" + text + "' in " + what);
      return false;
    }
    int64_t v = 0;
    for (; idx < text.size(); ++idx) {
      char c = text[idx];
      int digit;
      if (c >= '0' && c <= '9') digit = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      else {
        error_at(t, "bad-int", "malformed integer '" + text + "' in " + what);
        return false;
      }
      v = v * base + digit;
      if (v > (int64_t(1) << 40)) break; // avoid overflow while scanning junk
    }
    out = neg ? -v : v;
    return true;
  }

  bool parse_i32(int32_t& out, const std::string& what) {
    int64_t v;
    if (!parse_int(v, what)) return false;
    if (v < INT32_MIN || v > INT32_MAX) {
      error("int-range", what + " outside signed 32-bit range");
      return false;
    }
    out = int32_t(v);
    return true;
  }

  // "(a,b)" possibly split across tokens; returns both fields as raw text.
  bool parse_pair(std::string& a, std::string& b) {
    std::string joined;
    const Token* first = peek();
    if (!first) {
      error("missing-coord", "expected '(row,col)'");
      return false;
    }
    while (!done()) {
      joined += next()->text;
      if (joined.back() == ')') break;
      if (joined.size() > 64) break;
    }
    if (joined.size() < 5 || joined.front() != '(' || joined.back() != ')') {
      error_at(*first, "bad-coord", "expected '(a,b)', got '" + joined + "'");
      return false;
    }
    std::string body = joined.substr(1, joined.size() - 2);
    size_t comma = body.find(',');
    if (comma == std::string::npos) {
      error_at(*first, "bad-coord", "expected '(a,b)', got '" + joined + "'");
      return false;
    }
    a = body.substr(0, comma);
    b = body.substr(comma + 1);
    pair_tok_ = *first;
    return true;
  }

  Token pair_token() const { return pair_tok_; }

private:
  const std::vector<Token>& toks_;
  size_t pos_ = 0;
  int line_;
  std::vector<Diagnostic>& diags_;
  bool failed_ = false;
  Token pair_tok_;
};

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Splits "node.port" and resolves port aliases to canonical names later.
bool split_endpoint(const std::string& text, Endpoint& ep) {
  size_t dot = text.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= text.size()) return false;
  ep.node = text.substr(0, dot);
  ep.port = text.substr(dot + 1);
  return valid_ident(ep.node) && valid_ident(ep.port);
}

struct NodeKindInfo {
  enum Kind { alu, ram, stream } kind;
  size_t index;
};

} // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult res;
  ArrayConfig& cfg = res.config;
  std::vector<Diagnostic>& diags = res.diagnostics;

  bool have_header = false;
  std::map<std::string, NodeKindInfo> nodes;
  std::set<std::pair<int, int>> alu_coords;
  std::set<std::pair<int, int>> ram_coords;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> toks = tokenize(line);
    if (toks.empty()) continue;
    LineParser p(toks, line_no, diags);
    const Token* head = p.next();
    const std::string& kw = head->text;

    if (kw == "array") {
      if (have_header) {
        p.error_at(*head, "duplicate-header", "duplicate 'array' header");
        continue;
      }
      const Token* name = p.next();
      if (!name || !valid_ident(name->text)) {
        p.error("bad-name", "expected configuration name");
        continue;
      }
      cfg.name = name->text;
      if (!p.expect_word("alu")) continue;
      const Token* dims = p.next();
      if (!dims) {
        p.error("bad-dims", "expected <rows>x<cols>");
        continue;
      }
      size_t x = dims->text.find('x');
      int64_t rows = 0, cols = 0;
      if (x == std::string::npos || !p.parse_int_text(*dims, dims->text.substr(0, x), rows, "alu rows") ||
          !p.parse_int_text(*dims, dims->text.substr(x + 1), cols, "alu cols"))
        continue;
      if (rows < 1 || cols < 1 || rows * cols > 4096) {
        p.error_at(*dims, "bad-dims", "alu grid dims out of range");
        continue;
      }
      cfg.dims.alu_rows = int(rows);
      cfg.dims.alu_cols = int(cols);
      if (!p.expect_word("ram")) continue;
      int64_t banks = 0;
      if (!p.parse_int(banks, "ram bank count")) continue;
      if (banks < 0 || banks > 4096) {
        p.error("bad-dims", "ram bank count out of range");
        continue;
      }
      cfg.dims.ram_banks = int(banks);
      if (!p.done() && p.peek()->text == "clock") {
        p.next();
        int64_t hz = 0;
        if (!p.parse_int(hz, "clock frequency")) continue;
        if (hz < 1) {
          p.error("bad-clock", "clock must be positive");
          continue;
        }
        cfg.dims.clock_hz = hz;
      }
      have_header = true;
      continue;
    }

    if (!have_header) {
      p.error_at(*head, "missing-header", "first statement must be the 'array' header");
      // keep going so later errors are still collected
      have_header = true;
    }

    if (kw == "pae") {
      AluPae pae;
      const Token* name = p.next();
      if (!name || !valid_ident(name->text)) {
        p.error("bad-name", "expected pae identifier");
        continue;
      }
      pae.id = name->text;
      if (!p.expect_word("at")) continue;
      std::string a, b;
      if (!p.parse_pair(a, b)) continue;
      Token coord_tok = p.pair_token();
      int64_t row = 0, col = 0;
      if (!p.parse_int_text(coord_tok, a, row, "row") ||
          !p.parse_int_text(coord_tok, b, col, "col"))
        continue;
      if (row < 0 || row >= cfg.dims.alu_rows) {
        p.error_at(coord_tok, "row-out-of-range",
                   "row " + std::to_string(row) + " out of range for " +
                       std::to_string(cfg.dims.alu_rows) + "x" +
                       std::to_string(cfg.dims.alu_cols) + " grid");
        continue;
      }
      if (col < 0 || col >= cfg.dims.alu_cols) {
        p.error_at(coord_tok, "col-out-of-range",
                   "col " + std::to_string(col) + " out of range for " +
                       std::to_string(cfg.dims.alu_rows) + "x" +
                       std::to_string(cfg.dims.alu_cols) + " grid");
        continue;
      }
      pae.row = int(row);
      pae.col = int(col);
      if (!p.expect_word("op")) continue;
      const Token* opname = p.next();
      if (!opname) {
        p.error("missing-op", "expected opcode");
        continue;
      }
      const OpInfo* info = op_info_by_name(opname->text);
      if (!info) {
        p.error_at(*opname, "unknown-opcode", "unknown opcode '" + opname->text + "'");
        continue;
      }
      pae.op = info->op;
      bool bad = false;
      while (!p.done()) {
        const Token* t = p.next();
        size_t eq = t->text.find('=');
        std::string key = eq == std::string::npos ? t->text : t->text.substr(0, eq);
        std::string val = eq == std::string::npos ? "" : t->text.substr(eq + 1);
        int64_t v = 0;
        if ((key != "imm0" && key != "imm1") || !p.parse_int_text(*t, val, v, key)) {
          if (key != "imm0" && key != "imm1")
            p.error_at(*t, "bad-attr", "expected imm0=<int> or imm1=<int>");
          bad = true;
          break;
        }
        if (v < INT32_MIN || v > INT32_MAX) {
          p.error_at(*t, "int-range", key + " outside signed 32-bit range");
          bad = true;
          break;
        }
        if (key == "imm0") pae.imm0 = int32_t(v);
        else pae.imm1 = int32_t(v);
      }
      if (bad) continue;
      if (nodes.count(pae.id)) {
        p.error_at(*name, "duplicate-id", "identifier '" + pae.id + "' already defined");
        continue;
      }
      if (!alu_coords.insert({pae.row, pae.col}).second) {
        p.error_at(coord_tok, "duplicate-placement",
                   "grid cell (" + std::to_string(pae.row) + "," + std::to_string(pae.col) +
                       ") already occupied");
        continue;
      }
      nodes[pae.id] = {NodeKindInfo::alu, cfg.alus.size()};
      cfg.alus.push_back(std::move(pae));
      continue;
    }

    if (kw == "ram") {
      RamPae ram;
      const Token* name = p.next();
      if (!name || !valid_ident(name->text)) {
        p.error("bad-name", "expected ram identifier");
        continue;
      }
      ram.id = name->text;
      if (!p.expect_word("at")) continue;
      std::string a, b;
      if (!p.parse_pair(a, b)) continue;
      Token coord_tok = p.pair_token();
      if (a != "L" && a != "R") {
        p.error_at(coord_tok, "bad-side", "ram side must be L or R");
        continue;
      }
      ram.side = a == "L" ? 0 : 1;
      int64_t row = 0;
      if (!p.parse_int_text(coord_tok, b, row, "ram row")) continue;
      if (row < 0 || row >= cfg.dims.ram_rows_per_side()) {
        p.error_at(coord_tok, "row-out-of-range",
                   "ram row " + std::to_string(row) + " out of range (" +
                       std::to_string(cfg.dims.ram_rows_per_side()) + " per side)");
        continue;
      }
      ram.row = int(row);
      if (!p.expect_word("mode")) continue;
      const Token* mode = p.next();
      if (!mode || (mode->text != "fifo" && mode->text != "ram")) {
        p.error("bad-mode", "ram mode must be fifo or ram");
        continue;
      }
      ram.mode = mode->text == "fifo" ? RamMode::fifo : RamMode::ram;
      if (!p.done()) {
        const Token* t = p.next();
        size_t eq = t->text.find('=');
        int64_t v = 0;
        if (eq == std::string::npos || t->text.substr(0, eq) != "cap" ||
            !p.parse_int_text(*t, t->text.substr(eq + 1), v, "cap") || v < 1 || v > (1 << 26)) {
          p.error_at(*t, "bad-attr", "expected cap=<words>");
          continue;
        }
        ram.capacity = int(v);
      }
      if (nodes.count(ram.id)) {
        p.error_at(*name, "duplicate-id", "identifier '" + ram.id + "' already defined");
        continue;
      }
      if (!ram_coords.insert({ram.side, ram.row}).second) {
        p.error_at(coord_tok, "duplicate-placement",
                   "ram cell (" + a + "," + std::to_string(ram.row) + ") already occupied");
        continue;
      }
      nodes[ram.id] = {NodeKindInfo::ram, cfg.rams.size()};
      cfg.rams.push_back(std::move(ram));
      continue;
    }

    if (kw == "preload") {
      const Token* name = p.next();
      if (!name) {
        p.error("bad-name", "expected ram identifier");
        continue;
      }
      auto it = nodes.find(name->text);
      if (it == nodes.end() || it->second.kind != NodeKindInfo::ram) {
        p.error_at(*name, "unknown-ram", "'" + name->text + "' is not a declared ram");
        continue;
      }
      RamPae& ram = cfg.rams[it->second.index];
      bool bad = false;
      while (!p.done()) {
        int32_t v = 0;
        if (!p.parse_i32(v, "preload word")) {
          bad = true;
          break;
        }
        ram.preload.push_back(v);
      }
      (void)bad;
      continue;
    }

    if (kw == "stream") {
      const Token* name = p.next();
      if (!name || !valid_ident(name->text)) {
        p.error("bad-name", "expected stream identifier");
        continue;
      }
      const Token* dir = p.next();
      if (!dir || (dir->text != "in" && dir->text != "out")) {
        p.error("bad-dir", "stream direction must be in or out");
        continue;
      }
      if (nodes.count(name->text)) {
        p.error_at(*name, "duplicate-id", "identifier '" + name->text + "' already defined");
        continue;
      }
      nodes[name->text] = {NodeKindInfo::stream, cfg.streams.size()};
      cfg.streams.push_back({name->text, dir->text == "in" ? StreamDir::in : StreamDir::out});
      continue;
    }

    if (kw == "connect") {
      const Token* src = p.next();
      Endpoint sep, dep;
      if (!src || !split_endpoint(src->text, sep)) {
        p.error("bad-endpoint", "expected <node>.<port>");
        continue;
      }
      if (!p.expect_word("->")) continue;
      const Token* dst = p.next();
      if (!dst || !split_endpoint(dst->text, dep)) {
        p.error("bad-endpoint", "expected <node>.<port>");
        continue;
      }
      // Canonicalize ALU compass aliases now so emit/compare use one spelling.
      auto canon = [&](Endpoint& ep, const Token& tok) {
        auto it = nodes.find(ep.node);
        if (it == nodes.end()) {
          p.error_at(tok, "unknown-node", "'" + ep.node + "' is not declared");
          return false;
        }
        if (it->second.kind == NodeKindInfo::alu) {
          if (auto i = alu_in_port(ep.port)) ep.port = "in" + std::to_string(*i);
          else if (auto o = alu_out_port(ep.port)) ep.port = "out" + std::to_string(*o);
          else {
            p.error_at(tok, "unknown-port", "unknown alu port '" + ep.port + "'");
            return false;
          }
        } else if (it->second.kind == NodeKindInfo::ram) {
          const auto& names = ram_port_names();
          if (std::find(names.begin(), names.end(), ep.port) == names.end()) {
            p.error_at(tok, "unknown-port", "unknown ram port '" + ep.port + "'");
            return false;
          }
        } else {
          const StreamBinding& sb = cfg.streams[it->second.index];
          const char* want = sb.dir == StreamDir::in ? "out" : "in";
          if (ep.port != want) {
            p.error_at(tok, "unknown-port",
                       std::string("stream '") + ep.node + "' only exposes port '" + want + "'");
            return false;
          }
        }
        return true;
      };
      if (!canon(sep, *src) || !canon(dep, *dst)) continue;
      cfg.channels.push_back({sep, dep});
      continue;
    }

    p.error_at(*head, "unknown-keyword", "unknown keyword '" + kw + "'");
  }

  if (!have_header && diags.empty())
    diags.push_back({Severity::error, 1, 1, 2, "missing-header", "empty configuration"});

  // Arity and wiring checks on whatever parsed cleanly.
  if (res.ok()) {
    for (const auto& d : validate_config(cfg))
      if (d.severity == Severity::error) res.diagnostics.push_back(d);
  }
  return res;
}

namespace {

struct PortRef {
  std::string node;
  std::string port;
  bool operator<(const PortRef& o) const {
    return node != o.node ? node < o.node : port < o.port;
  }
};

} // namespace

std::vector<Diagnostic> validate_config(const ArrayConfig& cfg) {
  std::vector<Diagnostic> diags;
  auto err = [&](const std::string& code, const std::string& msg) {
    diags.push_back({Severity::error, 0, 0, 0, code, msg});
  };
  auto warn = [&](const std::string& code, const std::string& msg) {
    diags.push_back({Severity::warning, 0, 0, 0, code, msg});
  };

  // Resource limits.
  if (int(cfg.alus.size()) > cfg.dims.alu_capacity())
    err("alu-overflow", "config uses " + std::to_string(cfg.alus.size()) + " ALU elements, grid has " +
                            std::to_string(cfg.dims.alu_capacity()));
  if (int(cfg.rams.size()) > cfg.dims.ram_banks)
    err("ram-overflow", "config uses " + std::to_string(cfg.rams.size()) + " RAM elements, array has " +
                            std::to_string(cfg.dims.ram_banks));

  std::map<std::string, int> ids; // node -> kind (0 alu, 1 ram, 2 stream)
  std::set<std::pair<int, int>> coords;
  for (const auto& a : cfg.alus) {
    if (!ids.emplace(a.id, 0).second) err("duplicate-id", "duplicate identifier '" + a.id + "'");
    if (a.row < 0 || a.row >= cfg.dims.alu_rows || a.col < 0 || a.col >= cfg.dims.alu_cols)
      err("placement-out-of-range", "pae '" + a.id + "' placed outside the grid");
    else if (!coords.insert({a.row, a.col}).second)
      err("duplicate-placement", "grid cell (" + std::to_string(a.row) + "," +
                                     std::to_string(a.col) + ") claimed twice");
  }
  std::set<std::pair<int, int>> rcoords;
  for (const auto& r : cfg.rams) {
    if (!ids.emplace(r.id, 1).second) err("duplicate-id", "duplicate identifier '" + r.id + "'");
    if (r.side < 0 || r.side > 1 || r.row < 0 || r.row >= cfg.dims.ram_rows_per_side())
      err("placement-out-of-range", "ram '" + r.id + "' placed outside the bank columns");
    else if (!rcoords.insert({r.side, r.row}).second)
      err("duplicate-placement", "ram cell claimed twice by '" + r.id + "'");
    if (r.capacity < 1) err("bad-capacity", "ram '" + r.id + "' capacity must be positive");
    if (int(r.preload.size()) > r.capacity)
      err("preload-overflow", "ram '" + r.id + "' preloads " + std::to_string(r.preload.size()) +
                                  " words into capacity " + std::to_string(r.capacity));
  }
  for (const auto& s : cfg.streams)
    if (!ids.emplace(s.name, 2).second) err("duplicate-id", "duplicate identifier '" + s.name + "'");

  // Channel endpoint resolution, incoming-degree, outgoing-degree.
  std::map<PortRef, int> in_degree, out_degree;
  auto alu_by_id = [&](const std::string& id) -> const AluPae* {
    for (const auto& a : cfg.alus)
      if (a.id == id) return &a;
    return nullptr;
  };
  auto ram_by_id = [&](const std::string& id) -> const RamPae* {
    for (const auto& r : cfg.rams)
      if (r.id == id) return &r;
    return nullptr;
  };
  auto stream_by_id = [&](const std::string& id) -> const StreamBinding* {
    for (const auto& s : cfg.streams)
      if (s.name == id) return &s;
    return nullptr;
  };

  auto endpoint_role = [&](const Endpoint& ep, bool as_source) -> bool {
    // returns true if the endpoint exists and can play the requested role
    if (const AluPae* a = alu_by_id(ep.node)) {
      if (as_source) {
        auto o = alu_out_port(ep.port);
        if (!o || *o >= op_info(a->op).max_out) {
          err("bad-arity", "'" + ep.str() + "' is not a valid output of opcode '" +
                               op_info(a->op).name + "'");
          return false;
        }
      } else {
        auto i = alu_in_port(ep.port);
        if (!i || *i >= op_info(a->op).max_in) {
          err("bad-arity", "'" + ep.str() + "' is not a valid input of opcode '" +
                               op_info(a->op).name + "'");
          return false;
        }
      }
      return true;
    }
    if (const RamPae* r = ram_by_id(ep.node)) {
      bool fifo = r->mode == RamMode::fifo;
      bool is_out = ep.port == (fifo ? "pop" : "dout");
      bool is_in = fifo ? ep.port == "push" : (ep.port == "addr" || ep.port == "din");
      if (as_source ? !is_out : !is_in) {
        err("bad-arity", "'" + ep.str() + "' is not a valid " +
                             (as_source ? "output" : "input") + " port in " +
                             (fifo ? "fifo" : "ram") + " mode");
        return false;
      }
      return true;
    }
    if (const StreamBinding* s = stream_by_id(ep.node)) {
      bool ok = as_source ? (s->dir == StreamDir::in && ep.port == "out")
                          : (s->dir == StreamDir::out && ep.port == "in");
      if (!ok) {
        err("bad-arity", "stream endpoint '" + ep.str() + "' used in the wrong direction");
        return false;
      }
      return true;
    }
    err("dangling-endpoint", "channel endpoint '" + ep.str() + "' references no declared node");
    return false;
  };

  for (const auto& ch : cfg.channels) {
    bool sok = endpoint_role(ch.src, true);
    bool dok = endpoint_role(ch.dst, false);
    if (sok) ++out_degree[{ch.src.node, ch.src.port}];
    if (dok) ++in_degree[{ch.dst.node, ch.dst.port}];
  }
  for (const auto& [ref, deg] : in_degree)
    if (deg > 1)
      err("multiple-drivers", "input '" + ref.node + "." + ref.port + "' has " +
                                  std::to_string(deg) + " incoming channels");
  for (const auto& [ref, deg] : out_degree)
    if (deg > 1)
      err("multiple-readers", "output '" + ref.node + "." + ref.port + "' drives " +
                                  std::to_string(deg) + " channels; use a dup element");

  auto connected_in = [&](const std::string& node, const std::string& port) {
    return in_degree.count({node, port}) > 0;
  };
  auto connected_out = [&](const std::string& node, const std::string& port) {
    return out_degree.count({node, port}) > 0;
  };

  // Per-opcode port requirements.
  for (const auto& a : cfg.alus) {
    const OpInfo& info = op_info(a.op);
    int ins = 0;
    for (int i = 0; i < 3; ++i) ins += connected_in(a.id, "in" + std::to_string(i)) ? 1 : 0;
    int outs = 0;
    for (int o = 0; o < 2; ++o) outs += connected_out(a.id, "out" + std::to_string(o)) ? 1 : 0;
    // contiguity: in1 without in0 etc. is always a config bug
    for (int i = 1; i < 3; ++i)
      if (connected_in(a.id, "in" + std::to_string(i)) &&
          !connected_in(a.id, "in" + std::to_string(i - 1)))
        err("undriven-input", "pae '" + a.id + "' drives in" + std::to_string(i) +
                                  " but leaves in" + std::to_string(i - 1) + " undriven");
    if (connected_out(a.id, "out1") && !connected_out(a.id, "out0"))
      err("dangling-output", "pae '" + a.id + "' uses out1 without out0");
    if (ins < info.min_in)
      err("undriven-input", "pae '" + a.id + "' (" + info.name + ") needs at least " +
                                std::to_string(info.min_in) + " driven input(s), has " +
                                std::to_string(ins));
    if (outs < info.min_out)
      err("dangling-output", "pae '" + a.id + "' (" + info.name + ") needs " +
                                 std::to_string(info.min_out) + " connected output(s), has " +
                                 std::to_string(outs));
    if (a.op == Op::counter && (!a.imm0 || *a.imm0 < 0))
      err("bad-imm", "counter '" + a.id + "' needs imm0=<count> >= 0");
    if (a.op == Op::mac && a.imm0 && *a.imm0 < 1)
      err("bad-imm", "mac '" + a.id + "' group size imm0 must be >= 1");
    if (a.op == Op::clamp && a.imm0 && a.imm1 && *a.imm0 > *a.imm1)
      err("bad-imm", "clamp '" + a.id + "' has imm0 > imm1");
    if (a.op == Op::shr_round && ins == 1 && a.imm0 && (*a.imm0 < 0 || *a.imm0 > 63))
      err("bad-imm", "shr_round '" + a.id + "' shift must lie in [0, 63]");
  }

  for (const auto& r : cfg.rams) {
    if (r.mode == RamMode::fifo) {
      if (!connected_out(r.id, "pop"))
        err("dangling-output", "fifo '" + r.id + "' has no pop consumer");
    } else {
      if (!connected_in(r.id, "addr"))
        err("undriven-input", "ram '" + r.id + "' has no addr driver");
      if (!connected_out(r.id, "dout") && !connected_in(r.id, "din"))
        err("dangling-output", "ram '" + r.id + "' connects neither dout nor din");
    }
  }

  for (const auto& s : cfg.streams) {
    bool bound = s.dir == StreamDir::in ? connected_out(s.name, "out") : connected_in(s.name, "in");
    if (!bound) warn("unbound-stream", "stream '" + s.name + "' is not connected");
  }

  // Reachability from input streams and counters (token sources).
  if (diags.empty() || std::all_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.severity != Severity::error;
      })) {
    std::set<std::string> reached;
    std::vector<std::string> work;
    for (const auto& s : cfg.streams)
      if (s.dir == StreamDir::in) work.push_back(s.name);
    for (const auto& a : cfg.alus)
      if (a.op == Op::counter) work.push_back(a.id);
    while (!work.empty()) {
      std::string n = work.back();
      work.pop_back();
      if (!reached.insert(n).second) continue;
      for (const auto& ch : cfg.channels)
        if (ch.src.node == n) work.push_back(ch.dst.node);
    }
    for (const auto& a : cfg.alus)
      if (!reached.count(a.id) && a.op != Op::counter)
        warn("unreachable", "pae '" + a.id + "' is unreachable from any input stream");
    for (const auto& r : cfg.rams)
      if (!reached.count(r.id))
        warn("unreachable", "ram '" + r.id + "' is unreachable from any input stream");
  }

  return diags;
}

std::string emit_config(const ArrayConfig& cfg) {
  std::ostringstream os;
  os << "array " << cfg.name << " alu " << cfg.dims.alu_rows << "x" << cfg.dims.alu_cols
     << " ram " << cfg.dims.ram_banks;
  if (cfg.dims.clock_hz != 250'000'000) os << " clock " << cfg.dims.clock_hz;
  os << "\n";

  std::vector<const AluPae*> alus;
  for (const auto& a : cfg.alus) alus.push_back(&a);
  std::sort(alus.begin(), alus.end(), [](const AluPae* a, const AluPae* b) {
    return std::tie(a->row, a->col) < std::tie(b->row, b->col);
  });
  for (const AluPae* a : alus) {
    os << "pae " << a->id << " at (" << a->row << "," << a->col << ") op " << op_info(a->op).name;
    if (a->imm0) os << " imm0=" << *a->imm0;
    if (a->imm1) os << " imm1=" << *a->imm1;
    os << "\n";
  }

  std::vector<const RamPae*> rams;
  for (const auto& r : cfg.rams) rams.push_back(&r);
  std::sort(rams.begin(), rams.end(), [](const RamPae* a, const RamPae* b) {
    return std::tie(a->side, a->row) < std::tie(b->side, b->row);
  });
  for (const RamPae* r : rams) {
    os << "ram " << r->id << " at (" << (r->side == 0 ? "L" : "R") << "," << r->row << ") mode "
       << (r->mode == RamMode::fifo ? "fifo" : "ram");
    if (r->capacity != kDefaultRamCapacity) os << " cap=" << r->capacity;
    os << "\n";
  }
  for (const RamPae* r : rams) {
    for (size_t i = 0; i < r->preload.size(); i += 16) {
      os << "preload " << r->id;
      for (size_t j = i; j < std::min(i + 16, r->preload.size()); ++j) os << " " << r->preload[j];
      os << "\n";
    }
  }

  std::vector<const StreamBinding*> streams;
  for (const auto& s : cfg.streams) streams.push_back(&s);
  std::sort(streams.begin(), streams.end(),
            [](const StreamBinding* a, const StreamBinding* b) { return a->name < b->name; });
  for (const StreamBinding* s : streams)
    os << "stream " << s->name << " " << (s->dir == StreamDir::in ? "in" : "out") << "\n";

  std::vector<const Channel*> chans;
  for (const auto& c : cfg.channels) chans.push_back(&c);
  std::sort(chans.begin(), chans.end(), [](const Channel* a, const Channel* b) {
    return std::tie(a->src.node, a->src.port, a->dst.node, a->dst.port) <
           std::tie(b->src.node, b->src.port, b->dst.node, b->dst.port);
  });
  for (const Channel* c : chans)
    os << "connect " << c->src.str() << " -> " << c->dst.str() << "\n";
  return os.str();
}

const std::vector<std::string>& dsl_keywords() {
  static const std::vector<std::string> kw = {"array", "alu",  "ram",    "clock", "pae",
                                              "at",    "op",   "mode",   "fifo",  "preload",
                                              "stream", "in",  "out",    "connect", "->",
                                              "imm0",  "imm1", "cap",    "L",     "R"};
  return kw;
}

std::vector<std::string> dsl_opcode_names() {
  std::vector<std::string> out;
  for (const auto& info : op_table()) out.push_back(info.name);
  return out;
}

std::vector<std::string> dsl_port_names() {
  std::vector<std::string> out = {"in0", "in1", "in2", "out0", "out1",
                                  "w0",  "n0",  "s0",  "e0",   "e1"};
  for (const auto& n : ram_port_names()) out.push_back(n);
  return out;
}

} // namespace hpdp
