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

#include <catch_amalgamated.hpp>

#include "heisenq/compiler.hpp"
#include "heisenq/trotter.hpp"
#include "test_support.hpp"

using namespace heisenq;
using Catch::Matchers::WithinAbs;

namespace {

constexpr NativeTarget kTargets[] = {NativeTarget::ibm, NativeTarget::rigetti};

}  // namespace

TEST_CASE("angle helpers") {
  CHECK_THAT(normalize_angle(3 * kPi), WithinAbs(kPi, 1e-12));
  CHECK_THAT(normalize_angle(-kPi), WithinAbs(kPi, 1e-12));
  CHECK_THAT(normalize_angle(-0.5), WithinAbs(-0.5, 0.0));
  CHECK(rigetti_rx_angle(-3 * kPi / 2));
  CHECK(rigetti_rx_angle(-kPi));
  CHECK_FALSE(rigetti_rx_angle(0.3));
  CHECK_FALSE(rigetti_rx_angle(0.0));
}

TEST_CASE("conformance per target") {
  CHECK(conforms(gates::u2(0.1, 0.2, 0), NativeTarget::ibm));
  CHECK_FALSE(conforms(gates::h(0), NativeTarget::ibm));
  CHECK_FALSE(conforms(gates::cz(0, 1), NativeTarget::ibm));
  CHECK(conforms(gates::rx(kPi / 2, 0), NativeTarget::rigetti));
  CHECK_FALSE(conforms(gates::rx(0.3, 0), NativeTarget::rigetti));
  CHECK_FALSE(conforms(gates::cnot(0, 1), NativeTarget::rigetti));
}

TEST_CASE("every gate kind lowers soundly to both targets") {
  for (GateKind k : kAllGateKinds) {
    for (double a : {0.0, 0.41, kPi / 2, -kPi, 2.9}) {
      std::vector<double> as(angle_arity(k), a);
      if (as.size() > 1) as[1] = -0.7;
      std::vector<Qubit> qs = qubit_arity(k) == 2 ? std::vector<Qubit>{1, 0} : std::vector<Qubit>{1};
      const Program p(2, {make_gate(k, as, qs)});
      for (NativeTarget t : kTargets) {
        const Program lowered = lower_generic(p, t);
        INFO(gate_name(k) << " angle " << a << " target " << target_name(t));
        CHECK(conforms(lowered, t));
        CHECK(equivalence_fidelity(p, lowered) >= 1 - 1e-10);
      }
    }
  }
}

TEST_CASE("lowering is gate-local") {
  const Program p(2, {gates::h(0), gates::cnot(0, 1)});
  const Program ibm = lower_generic(p, NativeTarget::ibm);
  REQUIRE(ibm.size() == 2);
  CHECK(ibm.gates()[0].kind() == GateKind::U2);
  CHECK(ibm.gates()[1] == gates::cnot(0, 1));
  const Program rig = lower_generic(p, NativeTarget::rigetti);
  CHECK(gate_counts(rig).count(GateKind::CZ) == 1);
}

TEST_CASE("zyz decomposition reconstructs random unitaries") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Program p = testing::random_program(rng, 1, 6);
    const Matrix u = program_unitary(p);
    const EulerAngles e = zyz_decompose(u);
    const Program fused(1, {gates::u3(e.theta, e.phi, e.lambda, 0)});
    CHECK(equivalence_fidelity(p, fused) >= 1 - 1e-10);
  }
  // Degenerate branches.
  for (const Program& p : {Program(1), Program(1, {gates::x(0)}), Program(1, {gates::rz(1.1, 0)})}) {
    const EulerAngles e = zyz_decompose(program_unitary(p));
    CHECK(e.lambda == 0.0);
    CHECK(equivalence_fidelity(p, Program(1, {gates::u3(e.theta, e.phi, e.lambda, 0)})) >=
          1 - 1e-12);
  }
}

TEST_CASE("merge pass") {
  std::vector<Gate> gs = {gates::rz(0.2, 0), gates::rz(0.3, 0), gates::cnot(1, 2),
                          gates::rz(0.5, 0)};
  CHECK(passes::merge_rotations(gs, NativeTarget::rigetti) == 2);
  REQUIRE(gs.size() == 2);
  CHECK_THAT(gs[0].angle(0), WithinAbs(1.0, 1e-15));

  // Rigetti RX merges only when the sum stays native.
  std::vector<Gate> rx = {gates::rx(kPi / 2, 0), gates::rx(kPi / 2, 0)};
  CHECK(passes::merge_rotations(rx, NativeTarget::rigetti) == 1);
  CHECK_THAT(rx[0].angle(0), WithinAbs(kPi, 1e-15));
  std::vector<Gate> rx2 = {gates::rx(kPi, 0), gates::rx(kPi / 2, 0), gates::rx(0.1, 0)};
  passes::merge_rotations(rx2, NativeTarget::rigetti);
  CHECK(rx2.size() == 2);
}

TEST_CASE("cancel pass") {
  std::vector<Gate> gs = {gates::cnot(0, 1), gates::cnot(0, 1), gates::h(2), gates::h(2),
                          gates::cz(0, 1), gates::cz(1, 0)};
  CHECK(passes::cancel_inverse_pairs(gs) == 3);
  CHECK(gs.empty());

  // An intervening gate on the target blocks cancellation.
  std::vector<Gate> blocked = {gates::cnot(0, 1), gates::x(1), gates::cnot(0, 1)};
  CHECK(passes::cancel_inverse_pairs(blocked) == 0);
  std::vector<Gate> reversed = {gates::cnot(0, 1), gates::cnot(1, 0)};
  CHECK(passes::cancel_inverse_pairs(reversed) == 0);
}

TEST_CASE("identity pass") {
  std::vector<Gate> gs = {gates::rz(0.0, 0), gates::rx(2 * kPi, 1), gates::u3(0, 0.4, -0.4, 0),
                          gates::u1(1e-14, 0), gates::rz(0.1, 0)};
  CHECK(passes::remove_identities(gs) == 4);
  CHECK(gs.size() == 1);
}

TEST_CASE("commute pass moves diagonal gates across CZ and CNOT controls") {
  std::vector<Gate> gs = {gates::rz(0.3, 0), gates::cz(0, 1), gates::rz(0.4, 0)};
  CHECK(passes::commute_diagonals(gs) == 1);
  CHECK(gs[0] == gates::cz(0, 1));
  passes::merge_rotations(gs, NativeTarget::rigetti);
  CHECK(gs.size() == 2);

  // Not across a CNOT target.
  std::vector<Gate> blocked = {gates::rz(0.3, 1), gates::cnot(0, 1)};
  CHECK(passes::commute_diagonals(blocked) == 0);

  // X-diagonal rotation slides left through a CNOT target.
  std::vector<Gate> xs = {gates::cnot(0, 1), gates::rx(0.2, 1)};
  CHECK(passes::commute_diagonals(xs) == 1);
  CHECK(xs[0] == gates::rx(0.2, 1));
}

TEST_CASE("fuse pass") {
  std::vector<Gate> gs = {gates::u1(0.3, 0), gates::u2(0.1, 0.2, 0), gates::cnot(0, 1),
                          gates::u1(0.5, 0)};
  const Program before(2, gs);
  CHECK(passes::fuse_single_qubit_runs(gs) == 1);
  CHECK(gs.size() == 3);
  CHECK(equivalence_fidelity(before, Program(2, gs)) >= 1 - 1e-12);

  std::vector<Gate> inverse = {gates::u2(0.1, 0.2, 0), gates::u3(kPi / 2, kPi - 0.2, -kPi - 0.1, 0)};
  const Program inv_before(1, inverse);
  passes::fuse_single_qubit_runs(inverse);
  CHECK(equivalence_fidelity(inv_before, Program(1, inverse)) >= 1 - 1e-12);
  CHECK(inverse.empty());
}

TEST_CASE("compiling an empty program") {
  for (NativeTarget t : kTargets) {
    const CompileResult g = compile_generic(Program(3), t);
    const CompileResult d = ds_compile(Program(3), t);
    CHECK(g.program.empty());
    CHECK(d.program.empty());
    CHECK(d.report.output_counts.total == 0);
    CHECK(d.report.equivalence_checked);
  }
}

TEST_CASE("random programs compile soundly") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const Program p = testing::random_program(rng, 1 + trial % 4, 25);
    for (NativeTarget t : kTargets) {
      const auto cmp = compare_compilers(p, t);
      CHECK(conforms(cmp.domain_specific.program, t));
      CHECK(cmp.domain_specific.report.equivalence_fidelity >= 1 - 1e-8);
      CHECK(cmp.generic.report.equivalence_fidelity >= 1 - 1e-8);
      CHECK(cmp.domain_specific.report.output_counts.total <=
            cmp.generic.report.output_counts.total);
    }
  }
}

TEST_CASE("ds compilation is idempotent") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Program p = testing::random_program(rng, 3, 20);
    for (NativeTarget t : kTargets) {
      const Program once = ds_compile(p, t).program;
      CHECK(ds_compile(once, t).program == once);
    }
  }
}

TEST_CASE("ds strictly beats generic on multi-step TFIM circuits") {
  const auto plan = testing::plan_for(all_up(4), 0.1, 3);
  const auto series = generate_circuits(testing::tfim(1.0, 0.8), plan);
  for (NativeTarget t : kTargets) {
    const auto cmp = compare_compilers(series.programs.back(), t);
    INFO(to_string(cmp.generic.report) << to_string(cmp.domain_specific.report));
    CHECK(cmp.domain_specific.report.output_counts.total <
          cmp.generic.report.output_counts.total);
  }
}

TEST_CASE("large registers skip the dense equivalence check") {
  const Program p(kMaxCheckedQubits + 1, {gates::h(0), gates::cnot(0, 10)});
  const CompileResult r = ds_compile(p, NativeTarget::ibm);
  CHECK_FALSE(r.report.equivalence_checked);
  CHECK(to_string(r.report).find("skipped") != std::string::npos);
}

TEST_CASE("report rendering") {
  const CompileResult r = ds_compile(Program(2, {gates::h(0), gates::h(0)}), NativeTarget::rigetti);
  const std::string text = to_string(r.report);
  CHECK(text.find("compiler: domain_specific") != std::string::npos);
  CHECK(text.find("target: rigetti") != std::string::npos);
  CHECK(text.find("pass cancel") != std::string::npos);
  CHECK(text.find("pass fuse") == std::string::npos);
}

TEST_CASE("documented lowering examples") {
  const Program h(1, {gates::h(0)});
  CHECK(lower_generic(h, NativeTarget::ibm) == Program(1, {gates::u2(0, kPi, 0)}));
  CHECK(lower_generic(h, NativeTarget::rigetti) ==
        Program(1, {gates::rz(kPi / 2, 0), gates::rx(kPi / 2, 0), gates::rz(kPi / 2, 0)}));
  const Program cnot(2, {gates::cnot(0, 1)});
  const Program expect(2, {gates::rz(kPi / 2, 1), gates::rx(kPi / 2, 1), gates::rz(kPi / 2, 1),
                           gates::cz(0, 1), gates::rz(kPi / 2, 1), gates::rx(kPi / 2, 1),
                           gates::rz(kPi / 2, 1)});
  CHECK(lower_generic(cnot, NativeTarget::rigetti) == expect);
  CHECK(unitary_equivalent(cnot, expect, 1e-12));
}

TEST_CASE("documented ds examples") {
  const CompileResult merged =
      ds_compile(Program(1, {gates::rz(0.3, 0), gates::rz(0.4, 0)}), NativeTarget::rigetti);
  REQUIRE(merged.program.size() == 1);
  CHECK(merged.program.gates()[0].kind() == GateKind::RZ);
  CHECK_THAT(merged.program.gates()[0].angle(0), WithinAbs(0.7, 1e-15));
  for (NativeTarget t : kTargets) {
    CHECK(ds_compile(Program(1, {gates::h(0), gates::h(0)}), t).program.empty());
  }
}

TEST_CASE("TFIM comparisons") {
  const auto three = generate_circuits(testing::tfim(1.0, 1.0),
                                       testing::plan_for(all_up(5), 0.1, 3));
  const auto ten = generate_circuits(testing::tfim(1.0, 1.0),
                                     testing::plan_for(all_up(5), 0.1, 10));
  const auto two = generate_circuits(testing::tfim(1.0, 1.0),
                                     testing::plan_for(all_up(2), 0.1, 1));
  for (NativeTarget t : kTargets) {
    const auto c3 = compare_compilers(three.programs.back(), t);
    CHECK(c3.domain_specific.report.output_counts.total < c3.generic.report.output_counts.total);
    const auto c10 = compare_compilers(ten.programs.back(), t);
    CHECK(c10.domain_specific.report.output_counts.total_two_qubit <=
          c10.generic.report.output_counts.total_two_qubit);
    const auto c1 = compare_compilers(two.programs.back(), t);
    CHECK(c1.domain_specific.report.equivalence_fidelity >= 1 - 1e-8);
    CHECK(c1.domain_specific.report.output_counts.total <= c1.generic.report.output_counts.total);
  }
}

TEST_CASE("each pass preserves the unitary on random circuits") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const Program p = testing::random_program(rng, 3, 25);
    for (NativeTarget t : kTargets) {
      for (const Program& input : {p, lower_generic(p, t)}) {
        const std::vector<Gate> base(input.gates().begin(), input.gates().end());
        auto check = [&](auto&& pass) {
          std::vector<Gate> gs = base;
          pass(gs);
          CHECK(equivalence_fidelity(input, Program(3, gs)) >= 1 - 1e-8);
        };
        check([&](std::vector<Gate>& gs) { passes::merge_rotations(gs, t); });
        check([](std::vector<Gate>& gs) { passes::cancel_inverse_pairs(gs); });
        check([](std::vector<Gate>& gs) { passes::remove_identities(gs); });
        check([](std::vector<Gate>& gs) { passes::commute_diagonals(gs); });
        check([](std::vector<Gate>& gs) { passes::fuse_single_qubit_runs(gs); });
      }
    }
  }
}
