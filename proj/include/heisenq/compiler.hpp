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

// Lowering to backend-native gate sets and the peephole optimizer used for
// Trotterized spin-chain circuits.
//
// Native sets:
//   ibm:     U1, U2, U3, CNOT
//   rigetti: RZ(any), RX(+-pi/2, +-pi), CZ
//
// ds_compile first runs merge, cancel and identity on the input circuit,
// then lowers it. The optimizer runs on the lowered circuit. Each round
// applies, in order:
//   merge     adjacent same-axis rotations on one qubit
//   cancel    adjacent self-inverse pairs (H H, X X, Y Y, Z Z, CNOT CNOT, CZ CZ)
//   identity  rotations equal to the identity up to phase
//   commute   z-diagonal gates rightward through CZ and CNOT controls,
//             x-diagonal gates leftward through CNOT targets
//   fuse      (ibm) maximal single-qubit runs into one U3
// Rounds repeat until nothing changes. "Adjacent" means no gate in between
// touches the qubit(s) involved. Every pass scans left to right and is
// sound on arbitrary programs, not only Trotter circuits.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/error.hpp"

namespace heisenq {

enum class NativeTarget { ibm, rigetti };

constexpr std::string_view target_name(NativeTarget t) noexcept {
  return t == NativeTarget::ibm ? "ibm" : "rigetti";
}

/// Tolerance of the rigetti RX angle-membership check, in radians mod 2pi.
inline constexpr double kNativeAngleTol = 1e-9;
/// Rotations closer than this to the identity (mod 2pi) are deleted.
inline constexpr double kIdentityAngleTol = 1e-12;
/// Compiled outputs must reach fidelity >= 1 - this against the input.
inline constexpr double kEquivalenceTol = 1e-8;
/// Register size above which compilation skips the dense equivalence check.
inline constexpr std::size_t kMaxCheckedQubits = 10;
inline constexpr std::size_t kMaxOptimizerRounds = 100;

/// Reduces an angle to (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline bool angle_near(double a, double b, double tol) {
  return std::abs(std::remainder(a - b, 2.0 * kPi)) <= tol;
}

inline bool rigetti_rx_angle(double theta, double tol = kNativeAngleTol) {
  return angle_near(theta, kPi / 2, tol) || angle_near(theta, -kPi / 2, tol) ||
         angle_near(theta, kPi, tol);
}

inline bool conforms(const Gate& gate, NativeTarget target) {
  switch (target) {
    case NativeTarget::ibm:
      switch (gate.kind()) {
        case GateKind::U1:
        case GateKind::U2:
        case GateKind::U3:
        case GateKind::CNOT:
          return true;
        default:
          return false;
      }
    case NativeTarget::rigetti:
      switch (gate.kind()) {
        case GateKind::RZ:
        case GateKind::CZ:
          return true;
        case GateKind::RX:
          return rigetti_rx_angle(gate.angle(0));
        default:
          return false;
      }
  }
  return false;
}

inline bool conforms(const Program& program, NativeTarget target) {
  for (const Gate& g : program.gates()) {
    if (!conforms(g, target)) return false;
  }
  return true;
}

struct PassStat {
  std::string name;
  /// Output gate count minus input gate count, summed over all rounds.
  long long gate_delta = 0;
  std::size_t rewrites = 0;
};

struct CompileReport {
  std::string compiler;
  NativeTarget target = NativeTarget::ibm;
  GateCounts input_counts;
  GateCounts output_counts;
  std::vector<PassStat> passes_applied;
  std::size_t rounds = 0;
  bool equivalence_checked = false;
  /// Valid only when equivalence_checked.
  double equivalence_fidelity = 0.0;
};

struct CompileResult {
  Program program;
  CompileReport report;
};

namespace detail {

inline void lower_gate_rigetti(const Gate& g, std::vector<Gate>& out) {
  using namespace gates;
  const Qubit q = g.qubit(0);
  auto lower_u3 = [&](double theta, double phi, double lambda) {
    out.push_back(rz(lambda, q));
    out.push_back(rx(kPi / 2, q));
    out.push_back(rz(theta, q));
    out.push_back(rx(-kPi / 2, q));
    out.push_back(rz(phi, q));
  };
  auto lower_h = [&](Qubit t) {
    out.push_back(rz(kPi / 2, t));
    out.push_back(rx(kPi / 2, t));
    out.push_back(rz(kPi / 2, t));
  };
  switch (g.kind()) {
    case GateKind::H:
      lower_h(q);
      return;
    case GateKind::X:
      out.push_back(rx(kPi, q));
      return;
    case GateKind::Y:
      out.push_back(rz(kPi, q));
      out.push_back(rx(kPi, q));
      return;
    case GateKind::Z:
      out.push_back(rz(kPi, q));
      return;
    case GateKind::S:
      out.push_back(rz(kPi / 2, q));
      return;
    case GateKind::SDG:
      out.push_back(rz(-kPi / 2, q));
      return;
    case GateKind::RZ:
    case GateKind::U1:
      out.push_back(rz(g.angle(0), q));
      return;
    case GateKind::RX: {
      const double theta = g.angle(0);
      if (rigetti_rx_angle(theta)) {
        out.push_back(g);
        return;
      }
      out.push_back(rz(kPi / 2, q));
      out.push_back(rx(kPi / 2, q));
      out.push_back(rz(theta + kPi, q));
      out.push_back(rx(kPi / 2, q));
      out.push_back(rz(kPi / 2, q));
      return;
    }
    case GateKind::RY:
      out.push_back(rx(kPi / 2, q));
      out.push_back(rz(g.angle(0), q));
      out.push_back(rx(-kPi / 2, q));
      return;
    case GateKind::U2:
      lower_u3(kPi / 2, g.angle(0), g.angle(1));
      return;
    case GateKind::U3:
      lower_u3(g.angle(0), g.angle(1), g.angle(2));
      return;
    case GateKind::CNOT:
      lower_h(g.qubit(1));
      out.push_back(cz(g.qubit(0), g.qubit(1)));
      lower_h(g.qubit(1));
      return;
    case GateKind::CZ:
      out.push_back(g);
      return;
  }
}

inline void lower_gate_ibm(const Gate& g, std::vector<Gate>& out) {
  using namespace gates;
  const Qubit q = g.qubit(0);
  switch (g.kind()) {
    case GateKind::H:
      out.push_back(u2(0.0, kPi, q));
      return;
    case GateKind::X:
      out.push_back(u3(kPi, 0.0, kPi, q));
      return;
    case GateKind::Y:
      out.push_back(u3(kPi, kPi / 2, kPi / 2, q));
      return;
    case GateKind::Z:
      out.push_back(u1(kPi, q));
      return;
    case GateKind::S:
      out.push_back(u1(kPi / 2, q));
      return;
    case GateKind::SDG:
      out.push_back(u1(-kPi / 2, q));
      return;
    case GateKind::RZ:
      out.push_back(u1(g.angle(0), q));
      return;
    case GateKind::RX:
      out.push_back(u3(g.angle(0), -kPi / 2, kPi / 2, q));
      return;
    case GateKind::RY:
      out.push_back(u3(g.angle(0), 0.0, 0.0, q));
      return;
    case GateKind::CZ:
      out.push_back(u2(0.0, kPi, g.qubit(1)));
      out.push_back(cnot(g.qubit(0), g.qubit(1)));
      out.push_back(u2(0.0, kPi, g.qubit(1)));
      return;
    case GateKind::U1:
    case GateKind::U2:
    case GateKind::U3:
    case GateKind::CNOT:
      out.push_back(g);
      return;
  }
}

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline std::size_t next_on(const std::vector<Gate>& gs, std::size_t i, Qubit q) {
  for (std::size_t j = i + 1; j < gs.size(); ++j) {
    if (gs[j].acts_on(q)) return j;
  }
  return npos;
}

inline std::size_t prev_on(const std::vector<Gate>& gs, std::size_t i, Qubit q) {
  for (std::size_t j = i; j-- > 0;) {
    if (gs[j].acts_on(q)) return j;
  }
  return npos;
}

inline bool is_z_diagonal(const Gate& g) {
  if (g.is_two_qubit()) return false;
  const Matrix u = gate_matrix(g);
  return std::abs(u(0, 1)) < kIdentityAngleTol && std::abs(u(1, 0)) < kIdentityAngleTol;
}

// Of the form a I + b X, hence commutes with the target of a CNOT.
inline bool is_x_diagonal(const Gate& g) {
  if (g.is_two_qubit()) return false;
  const Matrix u = gate_matrix(g);
  return std::abs(u(0, 0) - u(1, 1)) < kIdentityAngleTol &&
         std::abs(u(0, 1) - u(1, 0)) < kIdentityAngleTol;
}

inline bool is_self_inverse(GateKind k) {
  switch (k) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::CNOT:
    case GateKind::CZ:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Euler angles with U ~ U3(theta, phi, lambda) up to global phase.
struct EulerAngles {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
};

/// ZYZ decomposition of a 2x2 unitary. theta in [0, pi], phi and lambda in
/// (-pi, pi]; at theta = 0 or pi, lambda is 0 and the free angle goes to phi.
inline EulerAngles zyz_decompose(const Matrix& u) {
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  EulerAngles e;
  e.theta = 2.0 * std::atan2(s, c);
  if (s < kIdentityAngleTol) {
    e.theta = 0.0;
    e.phi = normalize_angle(std::arg(u(1, 1)) - std::arg(u(0, 0)));
  } else if (c < kIdentityAngleTol) {
    e.theta = kPi;
    e.phi = normalize_angle(std::arg(u(1, 0)) - std::arg(-u(0, 1)));
  } else {
    e.phi = normalize_angle(std::arg(u(1, 0)) - std::arg(u(0, 0)));
    e.lambda = normalize_angle(std::arg(-u(0, 1)) - std::arg(u(0, 0)));
  }
  return e;
}

// Individual optimizer passes. Each rewrites `gs` in place, returns the
// number of rewrites performed, and preserves the unitary up to phase.
namespace passes {

inline std::size_t merge_rotations(std::vector<Gate>& gs, NativeTarget target) {
  std::size_t rewrites = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const GateKind k = gs[i].kind();
    if (k != GateKind::RZ && k != GateKind::RX && k != GateKind::RY && k != GateKind::U1) continue;
    const Qubit q = gs[i].qubit(0);
    while (true) {
      const std::size_t j = detail::next_on(gs, i, q);
      if (j == detail::npos || gs[j].kind() != k) break;
      const double sum = normalize_angle(gs[i].angle(0) + gs[j].angle(0));
      if (k == GateKind::RX && target == NativeTarget::rigetti &&
          !rigetti_rx_angle(sum) && !angle_near(sum, 0.0, kNativeAngleTol)) {
        break;
      }
      gs[i] = Gate(k, {sum}, {q});
      gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
      ++rewrites;
    }
  }
  return rewrites;
}

inline std::size_t cancel_inverse_pairs(std::vector<Gate>& gs) {
  std::size_t rewrites = 0;
  for (std::size_t i = 0; i < gs.size();) {
    const Gate& g = gs[i];
    bool cancelled = false;
    if (detail::is_self_inverse(g.kind())) {
      const std::size_t j = detail::next_on(gs, i, g.qubit(0));
      if (j != detail::npos && gs[j].kind() == g.kind()) {
        bool same = false;
        if (!g.is_two_qubit()) {
          same = true;
        } else if (detail::next_on(gs, i, g.qubit(1)) == j) {
          const Gate& h = gs[j];
          same = (h.qubit(0) == g.qubit(0) && h.qubit(1) == g.qubit(1)) ||
                 (g.kind() == GateKind::CZ && h.qubit(0) == g.qubit(1) &&
                  h.qubit(1) == g.qubit(0));
        }
        if (same) {
          gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(j));
          gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
          ++rewrites;
          cancelled = true;
        }
      }
    }
    if (!cancelled) ++i;
  }
  return rewrites;
}

inline bool is_identity_rotation(const Gate& g) {
  switch (g.kind()) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::U1:
      return angle_near(g.angle(0), 0.0, kIdentityAngleTol);
    case GateKind::U3:
      return angle_near(g.angle(0), 0.0, kIdentityAngleTol) &&
             angle_near(g.angle(1) + g.angle(2), 0.0, kIdentityAngleTol);
    default:
      return false;
  }
}

inline std::size_t remove_identities(std::vector<Gate>& gs) {
  const std::size_t before = gs.size();
  std::erase_if(gs, is_identity_rotation);
  return before - gs.size();
}

inline std::size_t commute_diagonals(std::vector<Gate>& gs) {
  std::size_t rewrites = 0;
  // Each gate only ever moves in one direction, so this terminates; the
  // guard catches a broken invariant.
  const std::size_t guard = (gs.size() + 1) * (gs.size() + 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const Gate& g = gs[i];
      if (g.is_two_qubit()) continue;
      const Qubit q = g.qubit(0);
      if (detail::is_z_diagonal(g)) {
        const std::size_t j = detail::next_on(gs, i, q);
        if (j == detail::npos) continue;
        const Gate& two = gs[j];
        const bool passes = two.kind() == GateKind::CZ ||
                            (two.kind() == GateKind::CNOT && two.qubit(0) == q);
        if (!passes) continue;
        Gate moved = g;
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
        gs.insert(gs.begin() + static_cast<std::ptrdiff_t>(j), std::move(moved));
        --i;  // re-examine the gate that slid into slot i
      } else if (detail::is_x_diagonal(g)) {
        const std::size_t j = detail::prev_on(gs, i, q);
        if (j == detail::npos) continue;
        const Gate& two = gs[j];
        if (two.kind() != GateKind::CNOT || two.qubit(1) != q) continue;
        Gate moved = g;
        gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
        gs.insert(gs.begin() + static_cast<std::ptrdiff_t>(j), std::move(moved));
      } else {
        continue;
      }
      ++rewrites;
      changed = true;
      if (rewrites > guard) throw CompileError("commutation pass failed to terminate");
    }
  }
  return rewrites;
}

/// Replaces every maximal run (length >= 2) of single-qubit gates on one
/// qubit by a single U3, or by nothing when the run is the identity.
inline std::size_t fuse_single_qubit_runs(std::vector<Gate>& gs) {
  std::size_t rewrites = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (gs[i].is_two_qubit()) continue;
    const Qubit q = gs[i].qubit(0);
    if (const std::size_t p = detail::prev_on(gs, i, q);
        p != detail::npos && !gs[p].is_two_qubit()) {
      continue;  // not the start of a run
    }
    std::vector<std::size_t> run = {i};
    for (std::size_t j = detail::next_on(gs, i, q); j != detail::npos && !gs[j].is_two_qubit();
         j = detail::next_on(gs, j, q)) {
      run.push_back(j);
    }
    if (run.size() < 2) continue;
    Matrix product = Matrix::Identity(2, 2);
    for (std::size_t idx : run) {
      Matrix next = gate_matrix(gs[idx]) * product;
      product = std::move(next);
    }
    const EulerAngles e = zyz_decompose(product);
    const Gate fused = gates::u3(e.theta, e.phi, e.lambda, q);
    for (std::size_t k = run.size(); k-- > 1;) {
      gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(run[k]));
    }
    if (is_identity_rotation(fused)) {
      gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    } else {
      gs[i] = fused;
    }
    ++rewrites;
  }
  return rewrites;
}

}  // namespace passes

namespace detail {

inline void verify(const Program& input, CompileResult& result) {
  if (!conforms(result.program, result.report.target)) {
    throw CompileError(result.report.compiler + " produced a gate outside the " +
                       std::string(target_name(result.report.target)) + " native set");
  }
  result.report.output_counts = gate_counts(result.program);
  if (input.num_qubits() > kMaxCheckedQubits) return;
  const double fidelity = equivalence_fidelity(input, result.program);
  result.report.equivalence_checked = true;
  result.report.equivalence_fidelity = fidelity;
  if (fidelity < 1.0 - kEquivalenceTol) {
    throw CompileError(result.report.compiler + " output is not equivalent to its input (fidelity " +
                       std::to_string(fidelity) + ")");
  }
}

inline std::vector<Gate> lower_gates(const Program& program, NativeTarget target) {
  std::vector<Gate> out;
  out.reserve(program.size() * 3);
  for (const Gate& g : program.gates()) {
    if (target == NativeTarget::ibm) {
      lower_gate_ibm(g, out);
    } else {
      lower_gate_rigetti(g, out);
    }
  }
  return out;
}

}  // namespace detail

/// Gate-by-gate substitution into the target's native set; no optimization.
inline Program lower_generic(const Program& program, NativeTarget target) {
  return Program(program.num_qubits(), detail::lower_gates(program, target));
}

/// lower_generic plus a verified report.
inline CompileResult compile_generic(const Program& program, NativeTarget target) {
  CompileResult result{lower_generic(program, target), {}};
  result.report.compiler = "generic";
  result.report.target = target;
  result.report.input_counts = gate_counts(program);
  result.report.passes_applied.push_back(
      {"lower",
       static_cast<long long>(result.program.size()) - static_cast<long long>(program.size()),
       program.size()});
  detail::verify(program, result);
  return result;
}

/// Lowering followed by the optimizer rounds, to a fixpoint.
inline CompileResult ds_compile(const Program& program, NativeTarget target) {
  CompileReport report;
  report.compiler = "domain_specific";
  report.target = target;
  report.input_counts = gate_counts(program);

  // IR-level cleanup before lowering; RX sums are unrestricted here.
  std::vector<Gate> ir(program.gates().begin(), program.gates().end());
  PassStat simplify{"simplify", 0, 0};
  for (std::size_t round = 0;; ++round) {
    if (round == kMaxOptimizerRounds) {
      throw CompileError("IR simplification did not reach a fixpoint");
    }
    const std::size_t n = passes::merge_rotations(ir, NativeTarget::ibm) +
                          passes::cancel_inverse_pairs(ir) + passes::remove_identities(ir);
    if (n == 0) break;
    simplify.rewrites += n;
  }
  simplify.gate_delta = static_cast<long long>(ir.size()) - static_cast<long long>(program.size());
  report.passes_applied.push_back(simplify);

  std::vector<Gate> gs = detail::lower_gates(Program(program.num_qubits(), ir), target);
  report.passes_applied.push_back(
      {"lower", static_cast<long long>(gs.size()) - static_cast<long long>(ir.size()), ir.size()});

  using PassFn = std::size_t (*)(std::vector<Gate>&, NativeTarget);
  struct Pass {
    const char* name;
    PassFn run;
    bool ibm_only;
  };
  static const Pass kPipeline[] = {
      {"merge", [](std::vector<Gate>& g, NativeTarget t) { return passes::merge_rotations(g, t); },
       false},
      {"cancel", [](std::vector<Gate>& g, NativeTarget) { return passes::cancel_inverse_pairs(g); },
       false},
      {"identity", [](std::vector<Gate>& g, NativeTarget) { return passes::remove_identities(g); },
       false},
      {"commute", [](std::vector<Gate>& g, NativeTarget) { return passes::commute_diagonals(g); },
       false},
      {"fuse",
       [](std::vector<Gate>& g, NativeTarget) { return passes::fuse_single_qubit_runs(g); },
       true},
  };
  for (const Pass& p : kPipeline) {
    if (!p.ibm_only || target == NativeTarget::ibm) report.passes_applied.push_back({p.name, 0, 0});
  }

  bool converged = false;
  for (std::size_t round = 0; round < kMaxOptimizerRounds; ++round) {
    ++report.rounds;
    std::size_t total = 0;
    std::size_t slot = 2;
    for (const Pass& p : kPipeline) {
      if (p.ibm_only && target != NativeTarget::ibm) continue;
      const auto before = static_cast<long long>(gs.size());
      const std::size_t n = p.run(gs, target);
      PassStat& stat = report.passes_applied[slot++];
      stat.rewrites += n;
      stat.gate_delta += static_cast<long long>(gs.size()) - before;
      total += n;
    }
    if (total == 0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw CompileError("optimizer did not reach a fixpoint within " +
                       std::to_string(kMaxOptimizerRounds) + " rounds");
  }

  CompileResult result{Program(program.num_qubits(), std::move(gs)), std::move(report)};
  detail::verify(program, result);
  return result;
}

struct CompilerComparison {
  CompileResult generic;
  CompileResult domain_specific;
};

inline CompilerComparison compare_compilers(const Program& program, NativeTarget target) {
  return {compile_generic(program, target), ds_compile(program, target)};
}

/// Multi-line human-readable rendering of a report.
inline std::string to_string(const CompileReport& r) {
  std::string s;
  s += "compiler: " + r.compiler + "\n";
  s += "target: " + std::string(target_name(r.target)) + "\n";
  s += "input:  " + to_string(r.input_counts) + "\n";
  s += "output: " + to_string(r.output_counts) + "\n";
  for (const PassStat& p : r.passes_applied) {
    s += "pass " + p.name + ": rewrites=" + std::to_string(p.rewrites) +
         " gate_delta=" + std::to_string(p.gate_delta) + "\n";
  }
  if (r.rounds > 0) s += "rounds: " + std::to_string(r.rounds) + "\n";
  if (r.equivalence_checked) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15f", r.equivalence_fidelity);
    s += "equivalence: checked, fidelity=" + std::string(buf) + "\n";
  } else {
    s += "equivalence: skipped (more than " + std::to_string(kMaxCheckedQubits) + " qubits)\n";
  }
  return s;
}

}  // namespace heisenq
