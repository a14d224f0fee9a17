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

// Nearest-neighbour Heisenberg chain with a time-dependent uniform field:
//
//   H(t) = - sum_{i<N-1} [Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1}]
//          - h(t) sum_i S^k_i,      k in {x, y, z}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/error.hpp"

namespace heisenq {

/// hbar in eV*fs, used by the "ev_fs" unit system.
inline constexpr double kHbarEvFs = 0.6582119569;

enum class Axis { x, y, z };

inline std::optional<Axis> axis_from_string(std::string_view s) {
  if (s == "x" || s == "X") return Axis::x;
  if (s == "y" || s == "Y") return Axis::y;
  if (s == "z" || s == "Z") return Axis::z;
  return std::nullopt;
}

inline char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

struct FieldSample {
  double t = 0.0;
  double h = 0.0;
};

enum class FieldMode { constant, sinusoid, tabulated, custom };

/// Time dependence of the external field h(t).
///
///   constant:  h(t) = amplitude
///   sinusoid:  h(t) = amplitude * cos(2 pi frequency t + phase)
///   tabulated: piecewise-linear through the table, clamped to its endpoints
///   custom:    a caller-supplied function (library embedding only)
class FieldProfile {
 public:
  FieldProfile() = default;

  static FieldProfile constant(double amplitude) {
    FieldProfile f;
    f.mode_ = FieldMode::constant;
    f.amplitude_ = amplitude;
    return f;
  }

  static FieldProfile sinusoid(double amplitude, double frequency, double phase = 0.0) {
    FieldProfile f;
    f.mode_ = FieldMode::sinusoid;
    f.amplitude_ = amplitude;
    f.frequency_ = frequency;
    f.phase_ = phase;
    return f;
  }

  static FieldProfile tabulated(std::vector<FieldSample> table) {
    FieldProfile f;
    f.mode_ = FieldMode::tabulated;
    f.table_ = std::move(table);
    return f;
  }

  static FieldProfile custom(std::function<double(double)> fn) {
    FieldProfile f;
    f.mode_ = FieldMode::custom;
    f.custom_ = std::move(fn);
    return f;
  }

  FieldMode mode() const noexcept { return mode_; }
  double amplitude() const noexcept { return amplitude_; }
  double frequency() const noexcept { return frequency_; }
  double phase() const noexcept { return phase_; }
  const std::vector<FieldSample>& table() const noexcept { return table_; }
  const std::function<double(double)>& custom_function() const noexcept { return custom_; }

  /// True when h(t) provably does not depend on t.
  bool is_time_independent() const noexcept {
    switch (mode_) {
      case FieldMode::constant:
        return true;
      case FieldMode::sinusoid:
        return amplitude_ == 0.0 || frequency_ == 0.0;
      case FieldMode::tabulated:
        return std::all_of(table_.begin(), table_.end(),
                           [&](const FieldSample& s) { return s.h == table_.front().h; });
      case FieldMode::custom:
        return false;
    }
    return false;
  }

  double operator()(double t) const {
    switch (mode_) {
      case FieldMode::constant:
        return amplitude_;
      case FieldMode::sinusoid:
        return amplitude_ * std::cos(2.0 * kPi * frequency_ * t + phase_);
      case FieldMode::tabulated:
        return interpolate(t);
      case FieldMode::custom:
        return custom_ ? custom_(t) : 0.0;
    }
    return 0.0;
  }

 private:
  double interpolate(double t) const {
    if (table_.empty()) return 0.0;
    if (t <= table_.front().t) return table_.front().h;
    if (t >= table_.back().t) return table_.back().h;
    auto hi = std::upper_bound(table_.begin(), table_.end(), t,
                               [](double v, const FieldSample& s) { return v < s.t; });
    auto lo = hi - 1;
    const double w = (t - lo->t) / (hi->t - lo->t);
    return lo->h + w * (hi->h - lo->h);
  }

  FieldMode mode_ = FieldMode::constant;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double phase_ = 0.0;
  std::vector<FieldSample> table_;
  std::function<double(double)> custom_;
};

struct HeisenbergModel {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  FieldProfile field;
  Axis ext_dir = Axis::x;
  /// Value of hbar in the chosen unit system (1 for dimensionless runs).
  double hbar_scale = 1.0;
};

inline double field_at(const HeisenbergModel& model, double t) { return model.field(t); }

struct ValidationIssue {
  std::string field;
  std::string message;
};

inline std::vector<ValidationIssue> validate(const HeisenbergModel& model) {
  std::vector<ValidationIssue> issues;
  const auto ax = static_cast<int>(model.ext_dir);
  if (ax < 0 || ax > 2) issues.push_back({"ext_dir", "must be one of x, y, z"});
  if (!(model.hbar_scale > 0.0) || !std::isfinite(model.hbar_scale)) {
    issues.push_back({"hbar_scale", "must be a finite positive number"});
  }
  if (!std::isfinite(model.jx)) issues.push_back({"Jx", "must be finite"});
  if (!std::isfinite(model.jy)) issues.push_back({"Jy", "must be finite"});
  if (!std::isfinite(model.jz)) issues.push_back({"Jz", "must be finite"});
  const FieldProfile& f = model.field;
  if (!std::isfinite(f.amplitude())) issues.push_back({"h_ext", "must be finite"});
  if (f.mode() == FieldMode::sinusoid &&
      (!std::isfinite(f.frequency()) || !std::isfinite(f.phase()))) {
    issues.push_back({"freq", "frequency and phase must be finite"});
  }
  if (f.mode() == FieldMode::tabulated) {
    const auto& table = f.table();
    if (table.size() < 2) {
      issues.push_back({"table", "tabulated field needs at least 2 points"});
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (!(table[i].t > table[i - 1].t)) {
        issues.push_back({"table", "time values must be strictly increasing (row " +
                                       std::to_string(i + 1) + ")"});
        break;
      }
    }
  }
  if (f.mode() == FieldMode::custom && !f.custom_function()) {
    issues.push_back({"field", "custom field function is empty"});
  }
  return issues;
}

/// Reads "t,h" rows. A non-numeric first row is treated as a header; blank
/// lines and '#' comments are skipped.
inline std::vector<FieldSample> parse_field_csv(std::string_view text) {
  std::vector<FieldSample> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(lineno, "expected \"t,h\"");
    const std::string ts = line.substr(0, comma);
    const std::string hs = line.substr(comma + 1);
    try {
      std::size_t used_t = 0, used_h = 0;
      const double t = std::stod(ts, &used_t);
      const double h = std::stod(hs, &used_h);
      if (ts.find_first_not_of(" \t\r", used_t) != std::string::npos ||
          hs.find_first_not_of(" \t\r", used_h) != std::string::npos) {
        throw std::invalid_argument("trailing characters");
      }
      rows.push_back({t, h});
    } catch (const std::exception&) {
      if (!first_content) throw ParseError(lineno, "cannot parse \"" + line + "\" as t,h");
    }
    first_content = false;
  }
  return rows;
}

inline std::vector<FieldSample> load_field_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open field table " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  try {
    return parse_field_csv(buf.str());
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace detail {

inline SparseMatrix pauli_sparse(char which) {
  SparseMatrix p(2, 2);
  switch (which) {
    case 'x':
      p.insert(0, 1) = 1.0;
      p.insert(1, 0) = 1.0;
      break;
    case 'y':
      p.insert(0, 1) = Complex(0, -1);
      p.insert(1, 0) = Complex(0, 1);
      break;
    default:
      p.insert(0, 0) = 1.0;
      p.insert(1, 1) = -1.0;
      break;
  }
  return p;
}

// Product of Paulis on the listed sites, identity elsewhere.
inline SparseMatrix pauli_string(std::size_t n, const std::vector<std::pair<Qubit, char>>& ops) {
  std::vector<SparseMatrix> factors(n, sparse_identity(2));
  for (const auto& [q, p] : ops) factors[q] = pauli_sparse(p);
  return kron_chain(factors);
}

}  // namespace detail

/// Dense H(t) on n sites.
inline Matrix hamiltonian_matrix(const HeisenbergModel& model, double t, std::size_t n) {
  if (n == 0) throw ConfigError("hamiltonian_matrix needs at least one site");
  if (n > kMaxDenseQubits) {
    throw ResourceLimit("hamiltonian_matrix is limited to " + std::to_string(kMaxDenseQubits) +
                        " sites, got " + std::to_string(n));
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  detail::SparseMatrix h(dim, dim);
  const std::pair<double, char> couplings[] = {{model.jx, 'x'}, {model.jy, 'y'}, {model.jz, 'z'}};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (const auto& [j, p] : couplings) {
      if (j == 0.0) continue;
      h -= j * detail::pauli_string(n, {{i, p}, {i + 1, p}});
    }
  }
  const double field = field_at(model, t);
  if (field != 0.0) {
    const char k = axis_name(model.ext_dir);
    for (std::size_t i = 0; i < n; ++i) h -= field * detail::pauli_string(n, {{i, k}});
  }
  return Matrix(h);
}

}  // namespace heisenq
