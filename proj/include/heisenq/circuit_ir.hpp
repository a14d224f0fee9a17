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

// Platform-neutral gate and circuit representation.
//
// Matrix conventions follow the OpenQASM 2 standard library:
//   RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2), RZ(t) = exp(-i t Z / 2)
//   U1(l) = diag(1, e^{il})
//   U2(p, l) = U3(pi/2, p, l)
//   U3(t, p, l) = [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]
// Two-qubit matrices are written in the basis |q0 q1> with qubits[0] the
// more significant bit; for CNOT qubits[0] is the control.
//
// Basis-state index convention: qubit 0 is the leftmost character of the
// bitstring, i.e. the most significant bit of the index.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include "heisenq/error.hpp"

namespace heisenq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Qubit = std::size_t;

inline constexpr double kPi = std::numbers::pi;

/// Largest register the dense (2^N x 2^N) routines will materialize.
inline constexpr std::size_t kMaxDenseQubits = 12;

enum class GateKind { H, X, Y, Z, S, SDG, RX, RY, RZ, U1, U2, U3, CNOT, CZ };

inline constexpr std::array<GateKind, 14> kAllGateKinds = {
    GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,
    GateKind::SDG, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::U1,
    GateKind::U2, GateKind::U3, GateKind::CNOT, GateKind::CZ};

constexpr std::size_t angle_arity(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::U1:
      return 1;
    case GateKind::U2:
      return 2;
    case GateKind::U3:
      return 3;
    default:
      return 0;
  }
}

constexpr std::size_t qubit_arity(GateKind kind) noexcept {
  return (kind == GateKind::CNOT || kind == GateKind::CZ) ? 2 : 1;
}

constexpr std::string_view gate_name(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::SDG: return "SDG";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::U1: return "U1";
    case GateKind::U2: return "U2";
    case GateKind::U3: return "U3";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

/// One gate application. Immutable once constructed; the constructor
/// enforces the arity and distinct-qubit invariants.
class Gate {
 public:
  Gate(GateKind kind, std::vector<double> angles, std::vector<Qubit> qubits)
      : kind_(kind), angles_(std::move(angles)), qubits_(std::move(qubits)) {
    const auto name = std::string(gate_name(kind_));
    if (angles_.size() != angle_arity(kind_)) {
      throw InvalidCircuit(name + " takes " + std::to_string(angle_arity(kind_)) +
                           " angle(s), got " + std::to_string(angles_.size()));
    }
    if (qubits_.size() != qubit_arity(kind_)) {
      throw InvalidCircuit(name + " acts on " + std::to_string(qubit_arity(kind_)) +
                           " qubit(s), got " + std::to_string(qubits_.size()));
    }
    if (qubits_.size() == 2 && qubits_[0] == qubits_[1]) {
      throw InvalidCircuit(name + " has duplicate qubit " + std::to_string(qubits_[0]));
    }
  }

  GateKind kind() const noexcept { return kind_; }
  std::span<const double> angles() const noexcept { return angles_; }
  std::span<const Qubit> qubits() const noexcept { return qubits_; }
  double angle(std::size_t i) const { return angles_.at(i); }
  Qubit qubit(std::size_t i) const { return qubits_.at(i); }
  bool is_two_qubit() const noexcept { return qubits_.size() == 2; }

  bool acts_on(Qubit q) const noexcept {
    for (Qubit x : qubits_) {
      if (x == q) return true;
    }
    return false;
  }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  GateKind kind_;
  std::vector<double> angles_;
  std::vector<Qubit> qubits_;
};

inline Gate make_gate(GateKind kind, std::vector<double> angles, std::vector<Qubit> qubits) {
  return Gate(kind, std::move(angles), std::move(qubits));
}

// Shorthands used throughout the circuit builders and tests.
namespace gates {
inline Gate h(Qubit q) { return Gate(GateKind::H, {}, {q}); }
inline Gate x(Qubit q) { return Gate(GateKind::X, {}, {q}); }
inline Gate y(Qubit q) { return Gate(GateKind::Y, {}, {q}); }
inline Gate z(Qubit q) { return Gate(GateKind::Z, {}, {q}); }
inline Gate s(Qubit q) { return Gate(GateKind::S, {}, {q}); }
inline Gate sdg(Qubit q) { return Gate(GateKind::SDG, {}, {q}); }
inline Gate rx(double t, Qubit q) { return Gate(GateKind::RX, {t}, {q}); }
inline Gate ry(double t, Qubit q) { return Gate(GateKind::RY, {t}, {q}); }
inline Gate rz(double t, Qubit q) { return Gate(GateKind::RZ, {t}, {q}); }
inline Gate u1(double l, Qubit q) { return Gate(GateKind::U1, {l}, {q}); }
inline Gate u2(double p, double l, Qubit q) { return Gate(GateKind::U2, {p, l}, {q}); }
inline Gate u3(double t, double p, double l, Qubit q) {
  return Gate(GateKind::U3, {t, p, l}, {q});
}
inline Gate cnot(Qubit c, Qubit t) { return Gate(GateKind::CNOT, {}, {c, t}); }
inline Gate cz(Qubit a, Qubit b) { return Gate(GateKind::CZ, {}, {a, b}); }
}  // namespace gates

/// An ordered gate list on a fixed register. Measurement of every qubit in
/// the z basis is implicit at the end.
class Program {
 public:
  explicit Program(std::size_t num_qubits, std::vector<Gate> gates = {})
      : num_qubits_(num_qubits), gates_(std::move(gates)) {
    if (num_qubits_ == 0) throw InvalidCircuit("program needs at least one qubit");
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      for (Qubit q : gates_[i].qubits()) {
        if (q >= num_qubits_) {
          throw InvalidCircuit("gate " + std::to_string(i) + " (" +
                               std::string(gate_name(gates_[i].kind())) + ") uses qubit " +
                               std::to_string(q) + " on a " + std::to_string(num_qubits_) +
                               "-qubit register");
        }
      }
    }
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::span<const Gate> gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::size_t num_qubits_;
  std::vector<Gate> gates_;
};

/// `first` followed by `second`; both must share the register size.
inline Program concat(const Program& first, const Program& second) {
  if (first.num_qubits() != second.num_qubits()) {
    throw InvalidCircuit("cannot concatenate programs on different register sizes");
  }
  std::vector<Gate> all(first.gates().begin(), first.gates().end());
  all.insert(all.end(), second.gates().begin(), second.gates().end());
  return Program(first.num_qubits(), std::move(all));
}

inline Matrix gate_matrix(const Gate& gate) {
  using namespace std::complex_literals;
  const double r2 = 1.0 / std::sqrt(2.0);
  auto u3 = [](double t, double p, double l) {
    Matrix m(2, 2);
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    m << c, -std::exp(1i * l) * s, std::exp(1i * p) * s, std::exp(1i * (p + l)) * c;
    return m;
  };
  Matrix m(2, 2);
  switch (gate.kind()) {
    case GateKind::H:
      m << r2, r2, r2, -r2;
      return m;
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::Y:
      m << 0, -1i, 1i, 0;
      return m;
    case GateKind::Z:
      m << 1, 0, 0, -1;
      return m;
    case GateKind::S:
      m << 1, 0, 0, 1i;
      return m;
    case GateKind::SDG:
      m << 1, 0, 0, -1i;
      return m;
    case GateKind::RX: {
      const double t = gate.angle(0);
      m << std::cos(t / 2), -1i * std::sin(t / 2), -1i * std::sin(t / 2), std::cos(t / 2);
      return m;
    }
    case GateKind::RY: {
      const double t = gate.angle(0);
      m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
      return m;
    }
    case GateKind::RZ: {
      const double t = gate.angle(0);
      m << std::exp(-0.5i * t), 0, 0, std::exp(0.5i * t);
      return m;
    }
    case GateKind::U1:
      m << 1, 0, 0, std::exp(1i * gate.angle(0));
      return m;
    case GateKind::U2:
      return u3(kPi / 2, gate.angle(0), gate.angle(1));
    case GateKind::U3:
      return u3(gate.angle(0), gate.angle(1), gate.angle(2));
    case GateKind::CNOT: {
      Matrix c = Matrix::Zero(4, 4);
      c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
      return c;
    }
    case GateKind::CZ: {
      Matrix c = Matrix::Identity(4, 4);
      c(3, 3) = -1;
      return c;
    }
  }
  return m;
}

namespace detail {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline SparseMatrix sparse_identity(std::size_t dim) {
  SparseMatrix id(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  id.setIdentity();
  return id;
}

// Kronecker product of one 2x2 factor per qubit, qubit 0 leftmost.
inline SparseMatrix kron_chain(const std::vector<SparseMatrix>& factors) {
  SparseMatrix acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    SparseMatrix next = Eigen::kroneckerProduct(acc, factors[i]);
    acc = std::move(next);
  }
  return acc;
}

inline SparseMatrix single_entry(int row, int col) {
  SparseMatrix e(2, 2);
  e.insert(row, col) = 1.0;
  return e;
}

// Embeds a gate into the full register as a sum of tensor products of
// local 2x2 operators. Independent of the statevector kernel.
inline SparseMatrix embed(const Gate& gate, std::size_t n) {
  const Matrix local = gate_matrix(gate);
  std::vector<SparseMatrix> factors(n, sparse_identity(2));
  if (!gate.is_two_qubit()) {
    factors[gate.qubit(0)] = local.sparseView();
    return kron_chain(factors);
  }
  const std::size_t dim = std::size_t{1} << n;
  SparseMatrix sum(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const Complex coeff = local(row, col);
      if (coeff == Complex{0.0, 0.0}) continue;
      factors[gate.qubit(0)] = single_entry(row >> 1, col >> 1);
      factors[gate.qubit(1)] = single_entry(row & 1, col & 1);
      sum += coeff * kron_chain(factors);
    }
  }
  return sum;
}

}  // namespace detail

/// Dense unitary of the whole program; the earliest gate is the rightmost
/// factor of the product.
inline Matrix program_unitary(const Program& program) {
  const std::size_t n = program.num_qubits();
  if (n > kMaxDenseQubits) {
    throw ResourceLimit("program_unitary is limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits, got " + std::to_string(n));
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : program.gates()) {
    Matrix next = detail::embed(g, n) * u;
    u = std::move(next);
  }
  return u;
}

/// |tr(A^dagger B)| / 2^N, which is 1 exactly when the programs agree up to
/// a global phase.
inline double equivalence_fidelity(const Program& a, const Program& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw InvalidCircuit("equivalence check needs equal register sizes (" +
                         std::to_string(a.num_qubits()) + " vs " +
                         std::to_string(b.num_qubits()) + ")");
  }
  const Matrix ua = program_unitary(a);
  const Matrix ub = program_unitary(b);
  const Complex overlap = ua.conjugate().cwiseProduct(ub).sum();
  return std::abs(overlap) / static_cast<double>(ua.rows());
}

inline bool unitary_equivalent(const Program& a, const Program& b, double tol) {
  return equivalence_fidelity(a, b) >= 1.0 - tol;
}

struct GateCounts {
  std::array<std::size_t, kAllGateKinds.size()> per_kind{};
  std::size_t total_single_qubit = 0;
  std::size_t total_two_qubit = 0;
  std::size_t total = 0;

  std::size_t count(GateKind kind) const { return per_kind[static_cast<std::size_t>(kind)]; }

  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

inline GateCounts gate_counts(const Program& program) {
  GateCounts counts;
  for (const Gate& g : program.gates()) {
    ++counts.per_kind[static_cast<std::size_t>(g.kind())];
    if (g.is_two_qubit()) {
      ++counts.total_two_qubit;
    } else {
      ++counts.total_single_qubit;
    }
    ++counts.total;
  }
  return counts;
}

/// "H:2 CNOT:1 (1q=2 2q=1 total=3)"; kinds with zero count are omitted.
inline std::string to_string(const GateCounts& counts) {
  std::string out;
  for (GateKind kind : kAllGateKinds) {
    if (counts.count(kind) == 0) continue;
    out += std::string(gate_name(kind)) + ":" + std::to_string(counts.count(kind)) + " ";
  }
  out += "(1q=" + std::to_string(counts.total_single_qubit) +
         " 2q=" + std::to_string(counts.total_two_qubit) +
         " total=" + std::to_string(counts.total) + ")";
  return out;
}

}  // namespace heisenq
