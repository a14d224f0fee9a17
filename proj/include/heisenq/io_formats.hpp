// Copyright 2026 The heisenq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenQASM 2.0 and Quil text for the IR gate set.
//
// Both emitters write one instruction per line and end with a measurement of
// every qubit. The parsers accept exactly the emitted subset (plus comments
// and free whitespace) and reject everything else with a line number.
//
// Quil has no U2/U3; programs that use them get parametric DEFGATE blocks
// with the OpenQASM matrices, and the parser accepts those two definitions.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/error.hpp"

namespace heisenq {

enum class Dialect { qasm2, quil };

struct SerializedCircuit {
  Dialect dialect = Dialect::qasm2;
  std::string text;
};

/// Shortest decimal form (at most 17 significant digits) that reads back
/// to exactly the same double.
inline std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

// Recursive-descent evaluator for angle expressions: numbers, pi,
// + - * /, unary signs and parentheses.
class AngleExpr {
 public:
  static double evaluate(std::string_view text) {
    AngleExpr p(text);
    const double v = p.sum();
    p.skip_ws();
    if (p.pos_ != p.text_.size()) p.fail("unexpected '" + std::string(1, p.text_[p.pos_]) + "'");
    return v;
  }

 private:
  explicit AngleExpr(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw Error("bad angle expression \"" + std::string(text_) + "\": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    while (true) {
      if (eat('+')) {
        v += product();
      } else if (eat('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }

  double product() {
    double v = unary();
    while (true) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  double atom() {
    skip_ws();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      const std::size_t after = pos_ + 2;
      if (after >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[after]))) {
        pos_ = after;
        return kPi;
      }
    }
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a number or pi");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline double parse_angle(std::string_view text, std::size_t line) {
  try {
    const double v = AngleExpr::evaluate(text);
    if (!std::isfinite(v)) throw Error("angle is not finite");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline std::string join_angles(std::span<const double> angles,
                               std::string (*fmt)(double), const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i) s += sep;
    s += fmt(angles[i]);
  }
  return s;
}

struct NameKind {
  std::string_view name;
  GateKind kind;
};

inline constexpr NameKind kQasmNames[] = {
    {"h", GateKind::H},   {"x", GateKind::X},   {"y", GateKind::Y},   {"z", GateKind::Z},
    {"s", GateKind::S},   {"sdg", GateKind::SDG}, {"rx", GateKind::RX}, {"ry", GateKind::RY},
    {"rz", GateKind::RZ}, {"u1", GateKind::U1}, {"u2", GateKind::U2}, {"u3", GateKind::U3},
    {"cx", GateKind::CNOT}, {"cz", GateKind::CZ}};

inline constexpr NameKind kQuilNames[] = {
    {"H", GateKind::H},   {"X", GateKind::X},    {"Y", GateKind::Y},   {"Z", GateKind::Z},
    {"S", GateKind::S},   {"RX", GateKind::RX},  {"RY", GateKind::RY}, {"RZ", GateKind::RZ},
    {"PHASE", GateKind::U1}, {"U2", GateKind::U2}, {"U3", GateKind::U3},
    {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ}};

template <std::size_t N>
std::optional<GateKind> lookup(const NameKind (&table)[N], std::string_view name) {
  for (const auto& e : table) {
    if (e.name == name) return e.kind;
  }
  return std::nullopt;
}

template <std::size_t N>
std::string_view name_of(const NameKind (&table)[N], GateKind kind) {
  for (const auto& e : table) {
    if (e.kind == kind) return e.name;
  }
  return {};
}

// Splits "name(args) rest" into its three parts; args is empty without parens.
struct Instruction {
  std::string name;
  std::optional<std::string> args;
  std::string operands;
};

inline Instruction split_instruction(std::string_view stmt, std::size_t line) {
  Instruction ins;
  std::size_t i = 0;
  while (i < stmt.size() &&
         (std::isalnum(static_cast<unsigned char>(stmt[i])) || stmt[i] == '_')) {
    ++i;
  }
  if (i == 0) throw ParseError(line, "malformed instruction \"" + std::string(stmt) + "\"");
  ins.name = std::string(stmt.substr(0, i));
  while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
  if (i < stmt.size() && stmt[i] == '(') {
    int depth = 0;
    std::size_t j = i;
    for (; j < stmt.size(); ++j) {
      if (stmt[j] == '(') ++depth;
      if (stmt[j] == ')' && --depth == 0) break;
    }
    if (j == stmt.size()) throw ParseError(line, "unbalanced parentheses");
    ins.args = std::string(stmt.substr(i + 1, j - i - 1));
    i = j + 1;
  }
  ins.operands = trim(stmt.substr(i));
  return ins;
}

inline std::vector<double> parse_angle_list(const Instruction& ins, std::size_t expected,
                                            std::size_t line) {
  std::vector<double> angles;
  if (ins.args) {
    for (const std::string& a : split_top_level(*ins.args, ',')) {
      angles.push_back(parse_angle(a, line));
    }
  }
  if (angles.size() != expected) {
    throw ParseError(line, ins.name + " expects " + std::to_string(expected) + " angle(s), got " +
                               std::to_string(angles.size()));
  }
  return angles;
}

}  // namespace detail

// ---------------------------------------------------------------- OpenQASM 2

inline std::string emit_qasm(const Program& program) {
  const std::size_t n = program.num_qubits();
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << n << "];\n";
  out << "creg c[" << n << "];\n";
  for (const Gate& g : program.gates()) {
    out << detail::name_of(detail::kQasmNames, g.kind());
    if (!g.angles().empty()) {
      out << '(' << detail::join_angles(g.angles(), format_real, ",") << ')';
    }
    out << ' ';
    for (std::size_t i = 0; i < g.qubits().size(); ++i) {
      if (i) out << ',';
      out << "q[" << g.qubit(i) << ']';
    }
    out << ";\n";
  }
  for (std::size_t q = 0; q < n; ++q) out << "measure q[" << q << "] -> c[" << q << "];\n";
  return out.str();
}

namespace detail {

struct RegisterRef {
  std::string name;
  std::size_t index;
};

inline RegisterRef parse_register_ref(std::string_view text, std::size_t line) {
  const std::string t = trim(text);
  const auto open = t.find('[');
  if (open == std::string::npos || open == 0 || t.back() != ']') {
    throw ParseError(line, "expected reg[index], got \"" + t + "\"");
  }
  const auto idx = parse_index(trim(std::string_view(t).substr(open + 1, t.size() - open - 2)));
  if (!idx) throw ParseError(line, "bad index in \"" + t + "\"");
  return {trim(std::string_view(t).substr(0, open)), *idx};
}

}  // namespace detail

inline Program parse_qasm(std::string_view text) {
  std::optional<std::string> qreg;
  std::size_t qreg_size = 0;
  std::vector<std::pair<std::string, std::size_t>> cregs;
  bool saw_header = false;
  std::vector<Gate> gate_list;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto c = raw.find("//"); c != std::string::npos) raw.erase(c);
    std::string content = detail::trim(raw);
    if (content.empty()) continue;
    if (content.back() != ';') throw ParseError(line, "missing ';'");
    content.pop_back();
    for (const std::string& stmt : detail::split_top_level(content, ';')) {
      if (stmt.empty()) throw ParseError(line, "empty statement");
      if (stmt.rfind("OPENQASM", 0) == 0) {
        const std::string version = detail::trim(std::string_view(stmt).substr(8));
        if (version != "2.0" && version != "2") {
          throw ParseError(line, "unsupported OpenQASM version " + version);
        }
        saw_header = true;
        continue;
      }
      if (stmt.rfind("include", 0) == 0) {
        if (detail::trim(std::string_view(stmt).substr(7)) != "\"qelib1.inc\"") {
          throw ParseError(line, "only qelib1.inc may be included");
        }
        continue;
      }
      const detail::Instruction ins = detail::split_instruction(stmt, line);
      if (ins.name == "qreg" || ins.name == "creg") {
        const auto ref = detail::parse_register_ref(ins.operands, line);
        if (ref.index == 0) throw ParseError(line, "register size must be positive");
        if (ins.name == "creg") {
          cregs.emplace_back(ref.name, ref.index);
          continue;
        }
        if (qreg) throw ParseError(line, "only one qreg is supported");
        qreg = ref.name;
        qreg_size = ref.index;
        continue;
      }
      if (!qreg) throw ParseError(line, "instruction before qreg declaration");
      auto check_qubit = [&](const detail::RegisterRef& r) {
        if (r.name != *qreg) throw ParseError(line, "unknown quantum register " + r.name);
        if (r.index >= qreg_size) {
          throw ParseError(line, "qubit index " + std::to_string(r.index) +
                                     " out of range for qreg of size " +
                                     std::to_string(qreg_size));
        }
        return r.index;
      };
      if (ins.name == "measure") {
        const auto arrow = ins.operands.find("->");
        if (arrow == std::string::npos || ins.args) throw ParseError(line, "malformed measure");
        check_qubit(detail::parse_register_ref(ins.operands.substr(0, arrow), line));
        const auto bit = detail::parse_register_ref(ins.operands.substr(arrow + 2), line);
        const auto creg = std::find_if(cregs.begin(), cregs.end(),
                                       [&](const auto& c) { return c.first == bit.name; });
        if (creg == cregs.end()) throw ParseError(line, "unknown classical register " + bit.name);
        if (bit.index >= creg->second) throw ParseError(line, "classical bit out of range");
        continue;
      }
      const auto kind = detail::lookup(detail::kQasmNames, ins.name);
      if (!kind) throw ParseError(line, "unknown gate \"" + ins.name + "\"");
      std::vector<double> angles = detail::parse_angle_list(ins, angle_arity(*kind), line);
      std::vector<Qubit> qubits;
      for (const std::string& op : detail::split_top_level(ins.operands, ',')) {
        qubits.push_back(check_qubit(detail::parse_register_ref(op, line)));
      }
      try {
        gate_list.emplace_back(*kind, std::move(angles), std::move(qubits));
      } catch (const InvalidCircuit& e) {
        throw ParseError(line, e.what());
      }
    }
  }
  if (!saw_header) throw ParseError(1, "missing OPENQASM 2.0 header");
  if (!qreg) throw ParseError(line, "no qreg declared");
  return Program(qreg_size, std::move(gate_list));
}

// ---------------------------------------------------------------------- Quil

/// Quil angle text: +-pi and +-pi/2 (within 1e-12) are written symbolically.
inline std::string format_quil_angle(double v) {
  constexpr double tol = 1e-12;
  if (std::abs(v - kPi) <= tol) return "pi";
  if (std::abs(v + kPi) <= tol) return "-pi";
  if (std::abs(v - kPi / 2) <= tol) return "pi/2";
  if (std::abs(v + kPi / 2) <= tol) return "-pi/2";
  return format_real(v);
}

namespace detail {

inline constexpr std::string_view kQuilDefU2 =
    "DEFGATE U2(%phi, %lambda):\n"
    "    1/SQRT(2), -EXP(i*%lambda)/SQRT(2)\n"
    "    EXP(i*%phi)/SQRT(2), EXP(i*(%phi+%lambda))/SQRT(2)\n";

inline constexpr std::string_view kQuilDefU3 =
    "DEFGATE U3(%theta, %phi, %lambda):\n"
    "    COS(%theta/2), -EXP(i*%lambda)*SIN(%theta/2)\n"
    "    EXP(i*%phi)*SIN(%theta/2), EXP(i*(%phi+%lambda))*COS(%theta/2)\n";

}  // namespace detail

inline std::string emit_quil(const Program& program) {
  const std::size_t n = program.num_qubits();
  const auto uses = [&](GateKind k) {
    return std::any_of(program.gates().begin(), program.gates().end(),
                       [k](const Gate& g) { return g.kind() == k; });
  };
  std::ostringstream out;
  if (uses(GateKind::U2)) out << detail::kQuilDefU2 << '\n';
  if (uses(GateKind::U3)) out << detail::kQuilDefU3 << '\n';
  out << "DECLARE ro BIT[" << n << "]\n";
  for (const Gate& g : program.gates()) {
    if (g.kind() == GateKind::SDG) {
      out << "DAGGER S";
    } else {
      out << detail::name_of(detail::kQuilNames, g.kind());
    }
    if (!g.angles().empty()) {
      out << '(' << detail::join_angles(g.angles(), format_quil_angle, ", ") << ')';
    }
    for (Qubit q : g.qubits()) out << ' ' << q;
    out << '\n';
  }
  for (std::size_t q = 0; q < n; ++q) out << "MEASURE " << q << " ro[" << q << "]\n";
  return out.str();
}

inline Program parse_quil(std::string_view text) {
  std::vector<Gate> gate_list;
  std::optional<std::size_t> max_qubit;
  std::optional<std::size_t> declared;
  auto note_qubit = [&](std::size_t q) { max_qubit = std::max(max_qubit.value_or(0), q); };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool in_defgate = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto c = raw.find('#'); c != std::string::npos) raw.erase(c);
    const std::string content = detail::trim(raw);
    if (content.empty()) continue;
    const bool indented = std::isspace(static_cast<unsigned char>(raw.front()));
    if (in_defgate && indented) continue;  // matrix rows of an accepted definition
    in_defgate = false;

    if (content.rfind("DEFGATE", 0) == 0) {
      const std::string sig = detail::trim(std::string_view(content).substr(7));
      if (sig.rfind("U2(", 0) != 0 && sig.rfind("U3(", 0) != 0) {
        throw ParseError(line, "DEFGATE is only supported for U2 and U3");
      }
      in_defgate = true;
      continue;
    }

    std::istringstream words(content);
    std::string head;
    words >> head;
    if (head == "DECLARE") {
      std::string name, type;
      words >> name >> type;
      const auto open = type.find('[');
      if (name.empty() || type.rfind("BIT", 0) != 0) throw ParseError(line, "malformed DECLARE");
      std::size_t size = 1;
      if (open != std::string::npos) {
        if (type.back() != ']') throw ParseError(line, "malformed DECLARE");
        const auto v = detail::parse_index(type.substr(open + 1, type.size() - open - 2));
        if (!v || *v == 0) throw ParseError(line, "malformed DECLARE size");
        size = *v;
      }
      declared = size;
      continue;
    }
    if (head == "MEASURE") {
      std::string q;
      words >> q;
      const auto idx = detail::parse_index(q);
      if (!idx) throw ParseError(line, "malformed MEASURE");
      note_qubit(*idx);
      continue;
    }

    std::string body = content;
    bool dagger = false;
    if (head == "DAGGER") {
      dagger = true;
      body = detail::trim(std::string_view(content).substr(6));
    }
    const detail::Instruction ins = detail::split_instruction(body, line);
    auto kind = detail::lookup(detail::kQuilNames, ins.name);
    if (dagger) {
      if (ins.name != "S") throw ParseError(line, "DAGGER is only supported on S");
      kind = GateKind::SDG;
    }
    if (!kind) throw ParseError(line, "unknown gate \"" + ins.name + "\"");
    std::vector<double> angles = detail::parse_angle_list(ins, angle_arity(*kind), line);
    std::vector<Qubit> qubits;
    std::istringstream ops(ins.operands);
    for (std::string op; ops >> op;) {
      const auto idx = detail::parse_index(op);
      if (!idx) throw ParseError(line, "bad qubit \"" + op + "\"");
      note_qubit(*idx);
      qubits.push_back(*idx);
    }
    try {
      gate_list.emplace_back(*kind, std::move(angles), std::move(qubits));
    } catch (const InvalidCircuit& e) {
      throw ParseError(line, e.what());
    }
  }
  std::size_t n = 0;
  if (max_qubit) {
    n = *max_qubit + 1;
  } else if (declared) {
    n = *declared;
  } else {
    throw ParseError(line, "program references no qubits");
  }
  return Program(n, std::move(gate_list));
}

inline std::string emit(const Program& program, Dialect dialect) {
  return dialect == Dialect::qasm2 ? emit_qasm(program) : emit_quil(program);
}

inline Program parse(std::string_view text, Dialect dialect) {
  return dialect == Dialect::qasm2 ? parse_qasm(text) : parse_quil(text);
}

}  // namespace heisenq
