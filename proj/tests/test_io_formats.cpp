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

#include <random>
#include <string>

#include <catch_amalgamated.hpp>

#include "heisenq/compiler.hpp"
#include "heisenq/io_formats.hpp"
#include "test_support.hpp"

using namespace heisenq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

bool same_up_to(const Program& a, const Program& b, double tol) {
  if (a.num_qubits() != b.num_qubits() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Gate& x = a.gates()[i];
    const Gate& y = b.gates()[i];
    if (x.kind() != y.kind() || !std::ranges::equal(x.qubits(), y.qubits())) return false;
    for (std::size_t k = 0; k < x.angles().size(); ++k) {
      if (std::abs(x.angle(k) - y.angle(k)) > tol) return false;
    }
  }
  return true;
}

int error_line(const std::string& text, Dialect d) {
  try {
    parse(text, d);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST_CASE("format_real is exact and short") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-2.0) == "-2");
  CHECK(format_real(0.1 + 0.2) == "0.30000000000000004");
  CHECK(std::stod(format_real(kPi)) == kPi);
}

TEST_CASE("emit_qasm layout") {
  CHECK(emit_qasm(Program(1, {gates::h(0)})) ==
        "OPENQASM 2.0;\n"
        "include \"qelib1.inc\";\n"
        "qreg q[1];\n"
        "creg c[1];\n"
        "h q[0];\n"
        "measure q[0] -> c[0];\n");
  CHECK_THAT(emit_qasm(Program(2, {gates::rz(0.5, 1)})), ContainsSubstring("rz(0.5) q[1];"));
  CHECK_THAT(emit_qasm(Program(2, {gates::cnot(0, 1)})), ContainsSubstring("cx q[0],q[1];"));
  CHECK_THAT(emit_qasm(Program(1, {gates::sdg(0)})), ContainsSubstring("sdg q[0];"));
  CHECK_THAT(emit_qasm(Program(1, {gates::u3(1, 2, 3, 0)})), ContainsSubstring("u3(1,2,3) q[0];"));
}

TEST_CASE("emit_quil layout") {
  CHECK_THAT(emit_quil(Program(1, {gates::rx(kPi / 2, 0)})), ContainsSubstring("RX(pi/2) 0\n"));
  CHECK_THAT(emit_quil(Program(1, {gates::rx(-kPi, 0)})), ContainsSubstring("RX(-pi) 0\n"));
  CHECK_THAT(emit_quil(Program(2, {gates::cz(0, 1)})), ContainsSubstring("CZ 0 1\n"));
  const std::string three = emit_quil(Program(3, {gates::rz(0.7, 2)}));
  CHECK_THAT(three, ContainsSubstring("DECLARE ro BIT[3]\n"));
  CHECK_THAT(three, ContainsSubstring("RZ(0.7) 2\n"));
  CHECK_THAT(three, ContainsSubstring("MEASURE 2 ro[2]\n"));
  CHECK_THAT(emit_quil(Program(1, {gates::h(0)})), ContainsSubstring("H 0\n"));
  CHECK(emit_quil(Program(1)).find("DEFGATE") == std::string::npos);
  CHECK_THAT(emit_quil(Program(1, {gates::u2(0, 1, 0)})), ContainsSubstring("DEFGATE U2"));
}

TEST_CASE("parse_qasm examples") {
  const Program p = parse_qasm(
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n"
      "// a comment\n  rz( pi / 4 ) q[0] ;\ncx q[0], q[1];\nmeasure q[0] -> c[0];\n");
  REQUIRE(p.size() == 2);
  CHECK(p.num_qubits() == 2);
  CHECK(p.gates()[0].kind() == GateKind::RZ);
  CHECK_THAT(p.gates()[0].angle(0), WithinAbs(kPi / 4, 1e-15));
  CHECK(p.gates()[1] == gates::cnot(0, 1));
  CHECK_THAT(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nu1(-2*pi/3 + 0.5) q[0];\n").gates()[0].angle(0),
             WithinAbs(-2 * kPi / 3 + 0.5, 1e-15));
}

TEST_CASE("parse_qasm errors carry line numbers") {
  const std::string head = "OPENQASM 2.0;\nqreg q[2];\n";
  CHECK(error_line(head + "bogus q[0];\n", Dialect::qasm2) == 3);
  CHECK(error_line(head + "h q[0];\nh q[2];\n", Dialect::qasm2) == 4);
  CHECK(error_line(head + "h q[0]\n", Dialect::qasm2) == 3);
  CHECK(error_line(head + "rx q[0];\n", Dialect::qasm2) == 3);
  CHECK(error_line(head + "rz(pi/) q[0];\n", Dialect::qasm2) == 3);
  CHECK(error_line(head + "cx q[1],q[1];\n", Dialect::qasm2) == 3);
  CHECK(error_line("qreg q[1];\nh q[0];\n", Dialect::qasm2) > 0);
  CHECK(error_line(head + "measure q[0] -> c[0];\n", Dialect::qasm2) == 3);
}

TEST_CASE("parse_quil examples") {
  const Program p = parse_quil("RX(-pi/2) 3\n");
  REQUIRE(p.size() == 1);
  CHECK(p.num_qubits() >= 4);
  CHECK_THAT(p.gates()[0].angle(0), WithinAbs(-kPi / 2, 1e-15));
  const Program m = parse_quil("MEASURE 0 ro[0]\n");
  CHECK(m.empty());
  CHECK(m.num_qubits() == 1);
  const Program d = parse_quil("DECLARE ro BIT[2]\nDAGGER S 1\n");
  CHECK(d.gates()[0] == gates::sdg(1));
}

TEST_CASE("parse_quil errors carry line numbers") {
  CHECK(error_line("H 0\nFOO 1\n", Dialect::quil) == 2);
  CHECK(error_line("RX 0\n", Dialect::quil) == 1);
  CHECK(error_line("DEFGATE MINE:\n    1, 0\n    0, 1\n", Dialect::quil) == 1);
  CHECK(error_line("DAGGER H 0\n", Dialect::quil) == 1);
  CHECK(error_line("CZ 0 x\n", Dialect::quil) == 1);
}

TEST_CASE("random programs round-trip through both dialects") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Program p = testing::random_program(rng, 1 + trial % 5, 30);
    for (Dialect d : {Dialect::qasm2, Dialect::quil}) {
      const Program back = parse(emit(p, d), d);
      CHECK(same_up_to(p, back, 1e-12));
    }
  }
}

TEST_CASE("both dialects agree semantically") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Program p = testing::random_program(rng, 3, 15);
    const Program q = parse_qasm(emit_qasm(p));
    const Program r = parse_quil(emit_quil(p));
    CHECK(unitary_equivalent(q, r, 1e-10));
  }
}

TEST_CASE("native circuits serialize in either dialect") {
  std::mt19937_64 rng(12);
  const Program p = testing::random_program(rng, 3, 15);
  const Program rig = ds_compile(p, NativeTarget::rigetti).program;
  CHECK(parse_qasm(emit_qasm(rig)) == rig);
  const Program ibm = ds_compile(p, NativeTarget::ibm).program;
  CHECK(same_up_to(parse_quil(emit_quil(ibm)), ibm, 1e-12));
}
