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

// Local statevector execution of IR programs: exact <Z> expectations, shot
// sampling and Monte Carlo depolarizing noise.
//
// Random numbers come from std::mt19937_64 (whose output sequence is fixed
// by the C++ standard) seeded directly with the user seed. Uniform doubles
// are the top 53 bits of each draw scaled by 2^-53; no std::*_distribution
// is used, so sampled counts are identical across standard libraries.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/error.hpp"
#include "heisenq/plan.hpp"
#include "heisenq/trotter.hpp"

namespace heisenq {

inline constexpr std::size_t kMaxStateQubits = 24;

/// Bitstring -> occurrences; character i of the key is qubit i.
using Counts = std::map<std::string, std::size_t>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(std::size_t n) : num_qubits_(n) {
    if (n == 0) throw ConfigError("state needs at least one qubit");
    if (n > kMaxStateQubits) {
      throw ResourceLimit("statevector is limited to " + std::to_string(kMaxStateQubits) +
                          " qubits, got " + std::to_string(n));
    }
    amps_.assign(std::size_t{1} << n, Complex{0.0, 0.0});
    amps_[0] = 1.0;
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_.at(i); }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
  }

  /// Bit mask of qubit q inside a basis index.
  std::size_t mask(Qubit q) const noexcept { return std::size_t{1} << (num_qubits_ - 1 - q); }

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amps_;
};

inline std::string basis_label(std::size_t index, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t q = 0; q < n; ++q) {
    if ((index >> (n - 1 - q)) & 1U) s[q] = '1';
  }
  return s;
}

inline StateVector init_state(std::size_t n, const std::vector<Spin>& initial_spins) {
  if (initial_spins.size() != n) {
    throw ConfigError("initial_spins has " + std::to_string(initial_spins.size()) +
                      " entries for " + std::to_string(n) + " qubits");
  }
  StateVector state(n);
  std::size_t index = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (initial_spins[q] == Spin::down) index |= state.mask(q);
  }
  auto amps = state.amplitudes();
  amps[0] = 0.0;
  amps[index] = 1.0;
  return state;
}

namespace detail {

inline void check_qubits(const StateVector& state, const Gate& gate) {
  for (Qubit q : gate.qubits()) {
    if (q >= state.num_qubits()) {
      throw InvalidCircuit("gate " + std::string(gate_name(gate.kind())) + " on qubit " +
                           std::to_string(q) + " exceeds " +
                           std::to_string(state.num_qubits()) + "-qubit state");
    }
  }
}

inline void apply_1q(std::span<Complex> amps, std::size_t mask, const Matrix& u) {
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | mask];
    amps[i] = u00 * a0 + u01 * a1;
    amps[i | mask] = u10 * a0 + u11 * a1;
  }
}

inline void apply_2q(std::span<Complex> amps, std::size_t m0, std::size_t m1, const Matrix& u) {
  const std::size_t idx[4] = {0, m1, m0, m0 | m1};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & (m0 | m1)) continue;
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = amps[i | idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex acc{0.0, 0.0};
      for (int c = 0; c < 4; ++c) acc += u(r, c) * in[c];
      amps[i | idx[r]] = acc;
    }
  }
}

}  // namespace detail

/// Applies the gate in place, touching each amplitude once.
inline void apply_gate(StateVector& state, const Gate& gate) {
  detail::check_qubits(state, gate);
  const Matrix u = gate_matrix(gate);
  if (gate.is_two_qubit()) {
    detail::apply_2q(state.amplitudes(), state.mask(gate.qubit(0)), state.mask(gate.qubit(1)), u);
  } else {
    detail::apply_1q(state.amplitudes(), state.mask(gate.qubit(0)), u);
  }
}

inline StateVector run_statevector(const Program& program, const std::vector<Spin>& initial_spins) {
  StateVector state = init_state(program.num_qubits(), initial_spins);
  for (const Gate& g : program.gates()) apply_gate(state, g);
  return state;
}

inline StateVector run_statevector(const Program& program) {
  return run_statevector(program, all_up(program.num_qubits()));
}

inline double expectation_z(const StateVector& state, Qubit q) {
  if (q >= state.num_qubits()) {
    throw InvalidCircuit("qubit " + std::to_string(q) + " out of range");
  }
  const std::size_t mask = state.mask(q);
  double e = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    e += (i & mask) ? -p : p;
  }
  return std::clamp(e, -1.0, 1.0);
}

namespace detail {

inline std::vector<double> cumulative_probabilities(const StateVector& state) {
  std::vector<double> cdf(state.dimension());
  double acc = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  return cdf;
}

inline std::size_t draw_index(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

inline Counts to_counts(const std::vector<std::size_t>& tally, std::size_t n) {
  Counts counts;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    if (tally[i] > 0) counts.emplace(basis_label(i, n), tally[i]);
  }
  return counts;
}

}  // namespace detail

inline Counts sample_counts(const StateVector& state, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shots must be at least 1");
  const auto cdf = detail::cumulative_probabilities(state);
  Rng rng(seed);
  std::vector<std::size_t> tally(state.dimension(), 0);
  for (std::size_t s = 0; s < shots; ++s) ++tally[detail::draw_index(cdf, rng)];
  return detail::to_counts(tally, state.num_qubits());
}

/// (n0 - n1) / shots for bit q of the recorded bitstrings.
inline double magnetization_from_counts(const Counts& counts, Qubit q, std::size_t shots) {
  std::size_t total = 0;
  long long diff = 0;
  for (const auto& [bits, count] : counts) {
    if (q >= bits.size()) throw InvalidCircuit("qubit " + std::to_string(q) + " out of range");
    total += count;
    diff += bits[q] == '0' ? static_cast<long long>(count) : -static_cast<long long>(count);
  }
  if (total != shots || shots == 0) {
    throw ConfigError("counts sum to " + std::to_string(total) + " but shots is " +
                      std::to_string(shots));
  }
  return static_cast<double>(diff) / static_cast<double>(shots);
}

/// Monte Carlo trajectories under gate-located depolarizing noise. Per shot,
/// after each gate an error event fires with probability p1 or p2; an event
/// applies an independent uniformly chosen X, Y or Z to every qubit the gate
/// touches. Shots without any event are drawn from the noiseless
/// distribution. Noiseless parameters or an empty program reduce exactly to
/// sample_counts with the same seed.
inline Counts run_noisy(const Program& program, const std::vector<Spin>& initial_spins,
                        std::size_t shots, const NoiseParams& noise, std::uint64_t seed) {
  if (noise.p1 < 0.0 || noise.p1 > 1.0 || noise.p2 < 0.0 || noise.p2 > 1.0) {
    throw ConfigError("noise probabilities must lie in [0, 1]");
  }
  const StateVector ideal = run_statevector(program, initial_spins);
  if (noise.is_noiseless() || program.empty()) return sample_counts(ideal, shots, seed);
  if (shots == 0) throw ConfigError("shots must be at least 1");

  struct Event {
    std::size_t after_gate;
    Qubit qubit;
    GateKind pauli;
  };
  constexpr GateKind kPaulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};

  const auto ideal_cdf = detail::cumulative_probabilities(ideal);
  const auto gate_list = program.gates();
  Rng rng(seed);
  std::vector<std::size_t> tally(ideal.dimension(), 0);
  std::vector<Event> events;
  for (std::size_t s = 0; s < shots; ++s) {
    events.clear();
    for (std::size_t g = 0; g < gate_list.size(); ++g) {
      const double p = gate_list[g].is_two_qubit() ? noise.p2 : noise.p1;
      if (!(rng.uniform() < p)) continue;
      for (Qubit q : gate_list[g].qubits()) {
        const auto which = std::min<std::size_t>(2, static_cast<std::size_t>(rng.uniform() * 3.0));
        events.push_back({g, q, kPaulis[which]});
      }
    }
    if (events.empty()) {
      ++tally[detail::draw_index(ideal_cdf, rng)];
      continue;
    }
    StateVector state = init_state(program.num_qubits(), initial_spins);
    std::size_t next = 0;
    for (std::size_t g = 0; g < gate_list.size(); ++g) {
      apply_gate(state, gate_list[g]);
      for (; next < events.size() && events[next].after_gate == g; ++next) {
        apply_gate(state, Gate(events[next].pauli, {}, {events[next].qubit}));
      }
    }
    ++tally[detail::draw_index(detail::cumulative_probabilities(state), rng)];
  }
  return detail::to_counts(tally, program.num_qubits());
}

/// Runs every program of the series from |0...0> (the programs carry their
/// own state preparation) and post-processes per-qubit magnetization.
/// shots == 0 selects exact expectation values; program i uses seed + i.
inline MagnetizationSeries simulate_series(const CircuitSeries& series, const SimulationPlan& plan) {
  check_plan(plan);
  MagnetizationSeries out;
  out.values.assign(plan.num_qubits, {});
  for (std::size_t i = 0; i < series.programs.size(); ++i) {
    const Program& program = series.programs[i];
    if (program.num_qubits() != plan.num_qubits) {
      throw ConfigError("program " + std::to_string(i) + " has " +
                        std::to_string(program.num_qubits()) + " qubits, plan has " +
                        std::to_string(plan.num_qubits));
    }
    out.times.push_back(static_cast<double>(i) * series.delta_t);
    const auto up = all_up(plan.num_qubits);
    const std::uint64_t seed = plan.seed + i;
    if (plan.shots == 0) {
      const StateVector state = run_statevector(program, up);
      for (Qubit q = 0; q < plan.num_qubits; ++q) out.values[q].push_back(expectation_z(state, q));
      continue;
    }
    const Counts counts = plan.noise ? run_noisy(program, up, plan.shots, *plan.noise, seed)
                                     : sample_counts(run_statevector(program, up), plan.shots, seed);
    for (Qubit q = 0; q < plan.num_qubits; ++q) {
      out.values[q].push_back(magnetization_from_counts(counts, q, plan.shots));
    }
  }
  return out;
}

}  // namespace heisenq
