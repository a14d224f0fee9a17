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

#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "heisenq/compiler.hpp"
#include "heisenq/simulator.hpp"
#include "heisenq/trotter.hpp"
#include "test_support.hpp"

using namespace heisenq;
using Catch::Matchers::WithinAbs;

TEST_CASE("run_statevector on trivial programs") {
  const StateVector empty = run_statevector(Program(3));
  CHECK(empty.amplitudes()[0] == Complex(1.0));
  const StateVector flipped = run_statevector(Program(1, {gates::x(0)}));
  CHECK(flipped.amplitudes()[1] == Complex(1.0));
  const StateVector prepared = run_statevector(Program(2), {Spin::down, Spin::up});
  CHECK(prepared.amplitudes()[0b10] == Complex(1.0));
  CHECK(basis_label(0b10, 2) == "10");
}

TEST_CASE("statevector refuses oversized registers") {
  CHECK_THROWS_AS(StateVector(kMaxStateQubits + 1), ResourceLimit);
}

TEST_CASE("expectation_z examples") {
  CHECK(expectation_z(run_statevector(Program(1)), 0) == 1.0);
  CHECK_THAT(expectation_z(run_statevector(Program(1, {gates::h(0)})), 0), WithinAbs(0.0, 1e-12));
  const StateVector s01 = run_statevector(Program(2, {gates::x(1)}));
  CHECK(expectation_z(s01, 0) == 1.0);
  CHECK(expectation_z(s01, 1) == -1.0);
  CHECK_THROWS_AS(expectation_z(s01, 2), InvalidCircuit);
}

TEST_CASE("apply_gate preserves the norm") {
  std::mt19937_64 rng(5);
  const Program p = testing::random_program(rng, 5, 200);
  StateVector s(5);
  for (const Gate& g : p.gates()) {
    apply_gate(s, g);
    REQUIRE(std::abs(s.norm_squared() - 1.0) < 1e-10);
  }
}

TEST_CASE("statevector agrees with the dense unitary") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Program p = testing::random_program(rng, 3, 20);
    const Matrix u = program_unitary(p);
    const StateVector s = run_statevector(p);
    for (std::size_t i = 0; i < 8; ++i) {
      REQUIRE(std::abs(s.amplitudes()[i] - u(static_cast<Eigen::Index>(i), 0)) < 1e-9);
    }
  }
}

TEST_CASE("sample_counts examples") {
  const Counts one = sample_counts(run_statevector(Program(1, {gates::x(0)})), 100, 3);
  CHECK(one == Counts{{"1", 100}});

  const StateVector plus = run_statevector(Program(1, {gates::h(0)}));
  const Counts c = sample_counts(plus, 100000, 42);
  const double sigma = std::sqrt(100000 * 0.25);
  CHECK(std::abs(static_cast<double>(c.at("0")) - 50000.0) < 5 * sigma);
  CHECK(c.at("0") + c.at("1") == 100000);
  CHECK(sample_counts(plus, 1000, 9) == sample_counts(plus, 1000, 9));
  CHECK(sample_counts(plus, 1000, 9) != sample_counts(plus, 1000, 10));
  CHECK_THROWS_AS(sample_counts(plus, 0, 1), ConfigError);
}

TEST_CASE("magnetization_from_counts examples") {
  CHECK_THAT(magnetization_from_counts({{"00", 600}, {"01", 400}}, 1, 1000), WithinAbs(0.2, 1e-15));
  CHECK(magnetization_from_counts({{"0", 1000}}, 0, 1000) == 1.0);
  CHECK(magnetization_from_counts({{"1", 500}, {"0", 500}}, 0, 1000) == 0.0);
  CHECK_THROWS_AS(magnetization_from_counts({{"0", 10}}, 0, 11), ConfigError);
}

TEST_CASE("run_noisy reduces to sampling without noise") {
  const Program p(2, {gates::h(0), gates::cnot(0, 1), gates::ry(0.3, 1)});
  const auto up = all_up(2);
  const Counts ideal = sample_counts(run_statevector(p, up), 5000, 17);
  CHECK(run_noisy(p, up, 5000, NoiseParams{0.0, 0.0}, 17) == ideal);
  // No gates, no noise events.
  const Program empty(2);
  CHECK(run_noisy(empty, up, 100, NoiseParams{1.0, 1.0}, 1) == Counts{{"00", 100}});
}

TEST_CASE("full depolarizing noise contracts the magnetization") {
  const Program p(1, {gates::rx(0.4, 0)});
  const std::size_t shots = 100000;
  const Counts noisy = run_noisy(p, {Spin::up}, shots, NoiseParams{1.0, 1.0}, 8);
  const double m_noisy = magnetization_from_counts(noisy, 0, shots);
  const double m_ideal = std::cos(0.4);
  CHECK(std::abs(m_noisy) < m_ideal);
  // A uniform non-identity Pauli after the gate leaves <Z> at -cos/3.
  CHECK_THAT(m_noisy, WithinAbs(-m_ideal / 3.0, 0.02));
  CHECK(run_noisy(p, {Spin::up}, 1000, NoiseParams{0.3, 0.3}, 8) ==
        run_noisy(p, {Spin::up}, 1000, NoiseParams{0.3, 0.3}, 8));
  CHECK_THROWS_AS(run_noisy(p, {Spin::up}, 10, NoiseParams{1.5, 0.0}, 1), ConfigError);
}

TEST_CASE("simulate_series in exact and sampled modes") {
  const auto model = testing::tfim(1.0, 0.7);
  auto plan = testing::plan_for({Spin::up, Spin::down, Spin::up}, 0.1, 8);
  const auto series = generate_circuits(model, plan);
  const auto exact = simulate_series(series, plan);
  REQUIRE(exact.num_steps() == 9);
  CHECK(exact.values[1][0] == -1.0);

  plan.shots = 100000;
  const auto sampled = simulate_series(series, plan);
  for (std::size_t q = 0; q < 3; ++q) {
    for (std::size_t n = 0; n < 9; ++n) {
      CHECK(std::abs(sampled.values[q][n] - exact.values[q][n]) < 0.02);
    }
  }
  CHECK(simulate_series(series, plan).values == sampled.values);
}

TEST_CASE("simulate_series with zero steps") {
  const auto plan = testing::plan_for(all_up(4), 0.1, 0);
  const auto m = simulate_series(generate_circuits(testing::tfim(1, 1), plan), plan);
  REQUIRE(m.num_steps() == 1);
  for (const auto& column : m.values) CHECK(column == std::vector<double>{1.0});
}

TEST_CASE("compiled series simulate identically") {
  const auto model = testing::tfim(1.0, 0.6);
  const auto plan = testing::plan_for(testing::domain_wall(4), 0.1, 5);
  CircuitSeries series = generate_circuits(model, plan);
  const auto reference = simulate_series(series, plan);
  for (NativeTarget t : {NativeTarget::ibm, NativeTarget::rigetti}) {
    CircuitSeries compiled = series;
    for (Program& p : compiled.programs) p = ds_compile(p, t).program;
    const auto out = simulate_series(compiled, plan);
    for (std::size_t q = 0; q < 4; ++q) {
      for (std::size_t n = 0; n < out.num_steps(); ++n) {
        CHECK_THAT(out.values[q][n], WithinAbs(reference.values[q][n], 1e-8));
      }
    }
  }
}
