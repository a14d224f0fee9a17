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

#include <catch_amalgamated.hpp>

#include "heisenq/hamiltonian.hpp"
#include "test_support.hpp"

using namespace heisenq;
using Catch::Matchers::WithinAbs;

TEST_CASE("field profiles") {
  CHECK(FieldProfile::constant(0.7)(123.0) == 0.7);
  const auto s = FieldProfile::sinusoid(2.0, 0.25);
  CHECK_THAT(s(0.0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(s(1.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(s(2.0), WithinAbs(-2.0, 1e-15));
  CHECK_THAT(FieldProfile::sinusoid(1.0, 0.0, kPi / 2)(5.0), WithinAbs(0.0, 1e-15));
  CHECK(FieldProfile::custom([](double t) { return 3 * t; })(2.0) == 6.0);
}

TEST_CASE("tabulated field interpolates and clamps") {
  const auto f = FieldProfile::tabulated({{0.0, 0.0}, {1.0, 2.0}, {3.0, 0.0}});
  CHECK(f(-1.0) == 0.0);
  CHECK_THAT(f(0.5), WithinAbs(1.0, 1e-15));
  CHECK_THAT(f(2.0), WithinAbs(1.0, 1e-15));
  CHECK(f(10.0) == 0.0);
  CHECK_FALSE(f.is_time_independent());
  CHECK(FieldProfile::tabulated({{0, 1}, {1, 1}}).is_time_independent());
}

TEST_CASE("time independence detection") {
  CHECK(FieldProfile::constant(1).is_time_independent());
  CHECK(FieldProfile::sinusoid(1, 0).is_time_independent());
  CHECK_FALSE(FieldProfile::sinusoid(1, 0.3).is_time_independent());
  CHECK_FALSE(FieldProfile::custom([](double) { return 0.0; }).is_time_independent());
}

TEST_CASE("validation reports offending fields") {
  HeisenbergModel m;
  CHECK(validate(m).empty());
  m.jx = std::nan("");
  m.hbar_scale = 0.0;
  const auto issues = validate(m);
  REQUIRE(issues.size() == 2);
  CHECK(issues[0].field == "hbar_scale");
  CHECK(issues[1].field == "Jx");

  HeisenbergModel t;
  t.field = FieldProfile::tabulated({{1.0, 0.0}, {0.5, 1.0}});
  REQUIRE(validate(t).size() == 1);
  CHECK(validate(t)[0].field == "table");
  t.field = FieldProfile::custom(nullptr);
  CHECK(validate(t)[0].field == "field");
}

TEST_CASE("field csv parsing") {
  const auto rows = parse_field_csv("t,h\n# pulse\n0,0\n\n1, 2.5\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].t == 1.0);
  CHECK(rows[1].h == 2.5);
  CHECK(parse_field_csv("0,1\n2,3\n").size() == 2);
  try {
    parse_field_csv("t,h\n0,1\n1,abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_field_csv("0 1\n"), ParseError);
  CHECK_THROWS_AS(load_field_csv("/nonexistent/field.csv"), ConfigError);
}

TEST_CASE("hamiltonian matrix of small systems") {
  // Single site, field along x: H = -h X.
  HeisenbergModel one = testing::tfim(0.0, 0.5);
  const Matrix h1 = hamiltonian_matrix(one, 0.0, 1);
  CHECK(std::abs(h1(0, 1) - Complex(-0.5)) < 1e-15);
  CHECK(std::abs(h1(0, 0)) < 1e-15);

  // Two sites, ZZ only: diag(-J, +J, +J, -J).
  const Matrix h2 = hamiltonian_matrix(testing::tfim(1.5, 0.0), 0.0, 2);
  CHECK_THAT(h2(0, 0).real(), WithinAbs(-1.5, 1e-15));
  CHECK_THAT(h2(1, 1).real(), WithinAbs(1.5, 1e-15));
  CHECK_THAT(h2(3, 3).real(), WithinAbs(-1.5, 1e-15));

  // XX + YY hops |01> <-> |10> with amplitude -2J.
  const Matrix hx = hamiltonian_matrix(testing::xx_chain(1.0), 0.0, 2);
  CHECK_THAT(hx(1, 2).real(), WithinAbs(-2.0, 1e-15));
  CHECK(std::abs(hx(0, 3)) < 1e-15);
}

TEST_CASE("hamiltonian matrix is hermitian and follows the field in time") {
  HeisenbergModel m;
  m.jx = 0.3;
  m.jy = -0.2;
  m.jz = 1.1;
  m.ext_dir = Axis::y;
  m.field = FieldProfile::sinusoid(0.8, 0.5);
  for (double t : {0.0, 0.3, 1.0}) {
    const Matrix h = hamiltonian_matrix(m, t, 4);
    CHECK((h - h.adjoint()).norm() < 1e-13);
    // Tr(H Y_0) = -h(t) 2^n.
    HeisenbergModel f;
    f.ext_dir = Axis::y;
    f.field = FieldProfile::constant(1.0);
    const Matrix y0 = -hamiltonian_matrix(f, 0.0, 4);  // sum_i Y_i
    const double tr = (h * y0).trace().real();
    CHECK_THAT(tr, WithinAbs(-m.field(t) * 4 * 16, 1e-10));
  }
  CHECK_THROWS_AS(hamiltonian_matrix(m, 0.0, kMaxDenseQubits + 1), ResourceLimit);
}
