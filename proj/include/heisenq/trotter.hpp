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

// First-order Trotter circuits for the Heisenberg chain, plus the dense
// exact-evolution oracle they are checked against.
//
// One Trotter step of length dt realizes
//   prod_i exp(+i dt h(t_m) S^k_i / hbar) * prod_bonds exp(+i dt (Jx XX + Jy YY + Jz ZZ) / hbar)
// with the field layer applied first and bonds in ascending order.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/error.hpp"
#include "heisenq/hamiltonian.hpp"
#include "heisenq/plan.hpp"

namespace heisenq {

/// Program n evolves the initial state to time n * delta_t.
struct CircuitSeries {
  std::vector<Program> programs;
  double delta_t = 0.0;

  std::size_t size() const noexcept { return programs.size(); }
};

inline std::vector<Gate> state_prep_gates(const std::vector<Spin>& initial_spins) {
  std::vector<Gate> out;
  for (std::size_t q = 0; q < initial_spins.size(); ++q) {
    if (initial_spins[q] == Spin::down) out.push_back(gates::x(q));
  }
  return out;
}

/// exp(i dt_over_hbar (jx XX + jy YY + jz ZZ)) on qubits (a, b). The three
/// terms commute, so the product of the factor circuits is exact.
inline std::vector<Gate> bond_evolution_gates(double jx, double jy, double jz,
                                              double dt_over_hbar, Qubit a, Qubit b) {
  if (a == b) throw InvalidCircuit("bond endpoints must differ");
  std::vector<Gate> out;
  auto zz = [&](double theta) {
    out.push_back(gates::cnot(a, b));
    out.push_back(gates::rz(-2.0 * theta, b));
    out.push_back(gates::cnot(a, b));
  };
  if (jx != 0.0) {
    out.push_back(gates::h(a));
    out.push_back(gates::h(b));
    zz(jx * dt_over_hbar);
    out.push_back(gates::h(a));
    out.push_back(gates::h(b));
  }
  if (jy != 0.0) {
    out.push_back(gates::rx(kPi / 2, a));
    out.push_back(gates::rx(kPi / 2, b));
    zz(jy * dt_over_hbar);
    out.push_back(gates::rx(-kPi / 2, a));
    out.push_back(gates::rx(-kPi / 2, b));
  }
  if (jz != 0.0) zz(jz * dt_over_hbar);
  return out;
}

/// exp(i dt_over_hbar h S^k) on qubit q as a single rotation.
inline std::vector<Gate> field_evolution_gates(double h, Axis ext_dir, double dt_over_hbar,
                                               Qubit q) {
  if (h == 0.0) return {};
  const double angle = -2.0 * h * dt_over_hbar;
  switch (ext_dir) {
    case Axis::x: return {gates::rx(angle, q)};
    case Axis::y: return {gates::ry(angle, q)};
    case Axis::z: return {gates::rz(angle, q)};
  }
  return {};
}

namespace detail {

inline void check_model(const HeisenbergModel& model) {
  const auto issues = validate(model);
  if (issues.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& issue : issues) msg += " " + issue.field + " (" + issue.message + ");";
  throw ConfigError(msg);
}

inline void append_trotter_step(std::vector<Gate>& out, const HeisenbergModel& model,
                                std::size_t n, double t_start, double dt_over_hbar) {
  const double h = field_at(model, t_start);
  for (Qubit q = 0; q < n; ++q) {
    for (Gate& g : field_evolution_gates(h, model.ext_dir, dt_over_hbar, q)) {
      out.push_back(std::move(g));
    }
  }
  for (Qubit q = 0; q + 1 < n; ++q) {
    for (Gate& g : bond_evolution_gates(model.jx, model.jy, model.jz, dt_over_hbar, q, q + 1)) {
      out.push_back(std::move(g));
    }
  }
}

}  // namespace detail

inline CircuitSeries generate_circuits(const HeisenbergModel& model, const SimulationPlan& plan) {
  detail::check_model(model);
  check_plan(plan);
  const std::size_t n = plan.num_qubits;
  const double dt_over_hbar = plan.delta_t / model.hbar_scale;

  CircuitSeries series;
  series.delta_t = plan.delta_t;
  series.programs.reserve(plan.steps + 1);
  std::vector<Gate> running = state_prep_gates(plan.initial_spins);
  series.programs.emplace_back(n, running);
  for (std::size_t m = 0; m < plan.steps; ++m) {
    detail::append_trotter_step(running, model, n, static_cast<double>(m) * plan.delta_t,
                                dt_over_hbar);
    series.programs.emplace_back(n, running);
  }
  return series;
}

namespace detail {

// exp(-i H tau / hbar) through the eigendecomposition of the Hermitian H.
inline Matrix propagator(const Matrix& hamiltonian, double tau_over_hbar) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hamiltonian);
  const Eigen::VectorXd& energies = eig.eigenvalues();
  Eigen::VectorXcd phases(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -energies(i) * tau_over_hbar));
  }
  const Matrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

inline std::vector<double> dense_magnetization(const Eigen::VectorXcd& psi, std::size_t n) {
  std::vector<double> m(n, 0.0);
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const double p = std::norm(psi(b));
    for (std::size_t q = 0; q < n; ++q) {
      const bool one = (static_cast<std::size_t>(b) >> (n - 1 - q)) & 1U;
      m[q] += one ? -p : p;
    }
  }
  return m;
}

}  // namespace detail

inline constexpr std::size_t kDefaultOracleSubsteps = 64;

/// Brute-force reference dynamics: time-ordered product of short-time
/// propagators with midpoint field sampling. Time-independent models are
/// propagated exactly one full step at a time.
inline MagnetizationSeries exact_evolution(const HeisenbergModel& model,
                                           const SimulationPlan& plan,
                                           std::size_t substeps = kDefaultOracleSubsteps) {
  detail::check_model(model);
  check_plan(plan);
  if (substeps == 0) throw ConfigError("substeps must be positive");
  const std::size_t n = plan.num_qubits;
  if (n > kMaxDenseQubits) {
    throw ResourceLimit("exact_evolution is limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits, got " + std::to_string(n));
  }

  std::size_t index = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (plan.initial_spins[q] == Spin::down) index |= std::size_t{1} << (n - 1 - q);
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(static_cast<Eigen::Index>(index)) = 1.0;

  MagnetizationSeries out;
  out.values.assign(n, {});
  auto record = [&](std::size_t step) {
    out.times.push_back(static_cast<double>(step) * plan.delta_t);
    const auto m = detail::dense_magnetization(psi, n);
    for (std::size_t q = 0; q < n; ++q) out.values[q].push_back(m[q]);
  };
  record(0);

  const bool static_model = model.field.is_time_independent();
  Matrix step_propagator;
  if (static_model && plan.steps > 0) {
    step_propagator =
        detail::propagator(hamiltonian_matrix(model, 0.0, n), plan.delta_t / model.hbar_scale);
  }
  const double sub = plan.delta_t / static_cast<double>(substeps);
  for (std::size_t m = 0; m < plan.steps; ++m) {
    if (static_model) {
      psi = step_propagator * psi;
    } else {
      const double t0 = static_cast<double>(m) * plan.delta_t;
      for (std::size_t k = 0; k < substeps; ++k) {
        const double mid = t0 + (static_cast<double>(k) + 0.5) * sub;
        psi = detail::propagator(hamiltonian_matrix(model, mid, n), sub / model.hbar_scale) * psi;
      }
    }
    record(m + 1);
  }
  return out;
}

}  // namespace heisenq
