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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heisenq/error.hpp"

namespace heisenq {

/// Spin up is |0> (magnetization +1), spin down is |1> (magnetization -1).
enum class Spin { up, down };

inline std::vector<Spin> all_up(std::size_t n) { return std::vector<Spin>(n, Spin::up); }

/// Gate-located depolarizing noise: after a single-qubit (two-qubit) gate a
/// Pauli error event fires with probability p1 (p2).
struct NoiseParams {
  double p1 = 0.001;
  double p2 = 0.01;

  bool is_noiseless() const noexcept { return p1 == 0.0 && p2 == 0.0; }
};

enum class BackendTarget { internal, ibm, rigetti };
enum class CompileMode { none, generic, domain_specific };

struct SimulationPlan {
  std::size_t num_qubits = 1;
  std::vector<Spin> initial_spins = {Spin::up};
  double delta_t = 0.1;
  std::size_t steps = 10;
  /// 0 selects exact expectation values instead of shot sampling.
  std::size_t shots = 0;
  BackendTarget backend_target = BackendTarget::internal;
  CompileMode compile_mode = CompileMode::none;
  std::optional<NoiseParams> noise;
  std::uint64_t seed = 1;
};

inline void check_plan(const SimulationPlan& plan) {
  if (plan.num_qubits == 0) throw ConfigError("num_qubits must be positive");
  if (plan.initial_spins.size() != plan.num_qubits) {
    throw ConfigError("initial_spins has " + std::to_string(plan.initial_spins.size()) +
                      " entries but num_qubits is " + std::to_string(plan.num_qubits));
  }
  if (plan.steps > 0 && !(plan.delta_t > 0.0 && std::isfinite(plan.delta_t))) {
    throw ConfigError("delta_t must be positive when steps > 0");
  }
  if (plan.noise) {
    const auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!ok(plan.noise->p1) || !ok(plan.noise->p2)) {
      throw ConfigError("noise probabilities must lie in [0, 1]");
    }
  }
}

/// Per-qubit <Z> trajectories. values[q][n] is qubit q at times[n].
struct MagnetizationSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  std::size_t num_qubits() const noexcept { return values.size(); }
  std::size_t num_steps() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty() || values.empty(); }
};

}  // namespace heisenq
