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

// End-to-end runs: input file -> circuits -> (compile) -> simulate -> data/.
//
// Input files hold `key = value` lines with `#` comments. Keys:
//
//   Jx Jy Jz h_ext ext_dir num_qubits initial_spins delta_t steps QCQS shots
//   noise_choice noise_p1 noise_p2 device_choice plot_flag time_dep_flag freq
//   phase custom_time_dep backend compile units seed
//
// A run writes into the data directory:
//   qubit_<i>_magnetization.csv   header "t,magnetization", steps+1 rows
//   magnetization.svg             when plot_flag is set
//   compile_report.txt            when compile != none
//   circuits/circuit_<n>.qasm|quil  when backend is ibm or rigetti
//   run.log

#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heisenq/circuit_ir.hpp"
#include "heisenq/compiler.hpp"
#include "heisenq/error.hpp"
#include "heisenq/hamiltonian.hpp"
#include "heisenq/io_formats.hpp"
#include "heisenq/plan.hpp"
#include "heisenq/simulator.hpp"
#include "heisenq/trotter.hpp"

namespace heisenq {

enum class ExecutionMode { simulator, computer };
enum class Units { dimensionless, ev_fs };

struct RunConfig {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
  double h_ext = 0.0;
  Axis ext_dir = Axis::x;
  std::size_t num_qubits = 1;
  /// Empty means all spins up.
  std::vector<Spin> initial_spins;
  double delta_t = 0.1;
  std::size_t steps = 10;
  ExecutionMode qcqs = ExecutionMode::simulator;
  std::size_t shots = 0;
  bool noise_choice = false;
  NoiseParams noise;
  std::string device_choice;
  bool plot_flag = true;
  bool time_dep_flag = false;
  double freq = 0.0;
  double phase = 0.0;
  /// Path of a "t,h" table; resolved against the input file's directory.
  std::string custom_time_dep;
  BackendTarget backend = BackendTarget::internal;
  CompileMode compile = CompileMode::none;
  Units units = Units::dimensionless;
  std::uint64_t seed = 1;

  std::vector<Spin> spins() const {
    return initial_spins.empty() ? all_up(num_qubits) : initial_spins;
  }
};

inline std::string to_string(BackendTarget b) {
  switch (b) {
    case BackendTarget::internal: return "internal";
    case BackendTarget::ibm: return "ibm";
    case BackendTarget::rigetti: return "rigetti";
  }
  return "?";
}

inline std::string to_string(CompileMode c) {
  switch (c) {
    case CompileMode::none: return "none";
    case CompileMode::generic: return "generic";
    case CompileMode::domain_specific: return "domain_specific";
  }
  return "?";
}

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline double parse_real_value(const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(d)) throw Error("expected a real number");
  return d;
}

inline std::uint64_t parse_count_value(const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw Error("expected a non-negative integer");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (errno == ERANGE) throw Error("integer out of range");
  return n;
}

inline bool parse_bool_value(const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error("expected true or false");
}

inline std::vector<Spin> parse_spins_value(const std::string& v) {
  std::vector<Spin> spins;
  for (const std::string& item : split_top_level(v, ',')) {
    const std::string s = lower(item);
    if (s == "up" || s == "0") {
      spins.push_back(Spin::up);
    } else if (s == "down" || s == "1") {
      spins.push_back(Spin::down);
    } else {
      throw Error("spin \"" + item + "\" is not up/down/0/1");
    }
  }
  return spins;
}

}  // namespace detail

/// Parses an input file. Unset keys keep their defaults; unknown keys and
/// bad values raise ConfigError with the line number. `base_dir` anchors a
/// relative custom_time_dep path.
inline RunConfig parse_input_file(std::string_view text,
                                  const std::filesystem::path& base_dir = ".") {
  using detail::lower;
  RunConfig cfg;
  bool explicit_spins = false;

  using Setter = std::function<void(RunConfig&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"Jx", [](RunConfig& c, const std::string& v) { c.jx = detail::parse_real_value(v); }},
      {"Jy", [](RunConfig& c, const std::string& v) { c.jy = detail::parse_real_value(v); }},
      {"Jz", [](RunConfig& c, const std::string& v) { c.jz = detail::parse_real_value(v); }},
      {"h_ext", [](RunConfig& c, const std::string& v) { c.h_ext = detail::parse_real_value(v); }},
      {"ext_dir",
       [](RunConfig& c, const std::string& v) {
         const auto a = axis_from_string(v);
         if (!a) throw Error("ext_dir must be x, y or z");
         c.ext_dir = *a;
       }},
      {"num_qubits",
       [](RunConfig& c, const std::string& v) { c.num_qubits = detail::parse_count_value(v); }},
      {"initial_spins",
       [&explicit_spins](RunConfig& c, const std::string& v) {
         c.initial_spins = detail::parse_spins_value(v);
         explicit_spins = true;
       }},
      {"delta_t",
       [](RunConfig& c, const std::string& v) { c.delta_t = detail::parse_real_value(v); }},
      {"steps", [](RunConfig& c, const std::string& v) { c.steps = detail::parse_count_value(v); }},
      {"QCQS",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "simulator" || s == "qs") {
           c.qcqs = ExecutionMode::simulator;
         } else if (s == "computer" || s == "qc") {
           c.qcqs = ExecutionMode::computer;
         } else {
           throw Error("QCQS must be simulator or computer");
         }
       }},
      {"shots", [](RunConfig& c, const std::string& v) { c.shots = detail::parse_count_value(v); }},
      {"noise_choice",
       [](RunConfig& c, const std::string& v) { c.noise_choice = detail::parse_bool_value(v); }},
      {"noise_p1",
       [](RunConfig& c, const std::string& v) { c.noise.p1 = detail::parse_real_value(v); }},
      {"noise_p2",
       [](RunConfig& c, const std::string& v) { c.noise.p2 = detail::parse_real_value(v); }},
      {"device_choice", [](RunConfig& c, const std::string& v) { c.device_choice = v; }},
      {"plot_flag",
       [](RunConfig& c, const std::string& v) { c.plot_flag = detail::parse_bool_value(v); }},
      {"time_dep_flag",
       [](RunConfig& c, const std::string& v) { c.time_dep_flag = detail::parse_bool_value(v); }},
      {"freq", [](RunConfig& c, const std::string& v) { c.freq = detail::parse_real_value(v); }},
      {"phase", [](RunConfig& c, const std::string& v) { c.phase = detail::parse_real_value(v); }},
      {"custom_time_dep", [](RunConfig& c, const std::string& v) { c.custom_time_dep = v; }},
      {"backend",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "internal") {
           c.backend = BackendTarget::internal;
         } else if (s == "ibm") {
           c.backend = BackendTarget::ibm;
         } else if (s == "rigetti") {
           c.backend = BackendTarget::rigetti;
         } else {
           throw Error("backend must be internal, ibm or rigetti");
         }
       }},
      {"compile",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "none" || s == "false") {
           c.compile = CompileMode::none;
         } else if (s == "generic" || s == "native") {
           c.compile = CompileMode::generic;
         } else if (s == "domain_specific" || s == "ds") {
           c.compile = CompileMode::domain_specific;
         } else {
           throw Error("compile must be none, generic or domain_specific");
         }
       }},
      {"units",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "dimensionless") {
           c.units = Units::dimensionless;
         } else if (s == "ev_fs") {
           c.units = Units::ev_fs;
         } else {
           throw Error("units must be dimensionless or ev_fs");
         }
       }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = detail::parse_count_value(v); }},
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = detail::trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line) + ": unknown key \"" + key + "\"");
    }
    try {
      it->second(cfg, value);
    } catch (const Error& e) {
      throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + e.what());
    }
  }

  if (cfg.num_qubits == 0) throw ConfigError("num_qubits must be positive");
  if (cfg.num_qubits > kMaxStateQubits) {
    throw ConfigError("num_qubits is limited to " + std::to_string(kMaxStateQubits));
  }
  if (explicit_spins && cfg.initial_spins.size() != cfg.num_qubits) {
    throw ConfigError("initial_spins has " + std::to_string(cfg.initial_spins.size()) +
                      " entries but num_qubits is " + std::to_string(cfg.num_qubits));
  }
  if (cfg.steps > 0 && !(cfg.delta_t > 0.0)) {
    throw ConfigError("delta_t must be positive when steps > 0");
  }
  if (cfg.qcqs == ExecutionMode::computer && cfg.shots == 0) {
    throw ConfigError("QCQS = computer needs shots >= 1");
  }
  if (cfg.noise_choice && cfg.shots == 0) {
    throw ConfigError("noise_choice needs shots >= 1 (noise is sampled per shot)");
  }
  if (cfg.noise.p1 < 0.0 || cfg.noise.p1 > 1.0 || cfg.noise.p2 < 0.0 || cfg.noise.p2 > 1.0) {
    throw ConfigError("noise_p1 and noise_p2 must lie in [0, 1]");
  }
  if (cfg.compile != CompileMode::none && cfg.backend == BackendTarget::internal) {
    throw ConfigError("compile = " + to_string(cfg.compile) + " needs backend = ibm or rigetti");
  }
  if (!cfg.custom_time_dep.empty()) {
    std::filesystem::path p(cfg.custom_time_dep);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) {
      throw ConfigError("custom_time_dep file not found: " + p.string());
    }
    cfg.custom_time_dep = p.string();
  }
  return cfg;
}

inline RunConfig load_input_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open input file " + path.string());
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_input_file(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

inline HeisenbergModel model_from_config(const RunConfig& cfg) {
  HeisenbergModel m;
  m.jx = cfg.jx;
  m.jy = cfg.jy;
  m.jz = cfg.jz;
  m.ext_dir = cfg.ext_dir;
  m.hbar_scale = cfg.units == Units::ev_fs ? kHbarEvFs : 1.0;
  if (!cfg.custom_time_dep.empty()) {
    m.field = FieldProfile::tabulated(load_field_csv(cfg.custom_time_dep));
  } else if (cfg.time_dep_flag) {
    m.field = FieldProfile::sinusoid(cfg.h_ext, cfg.freq, cfg.phase);
  } else {
    m.field = FieldProfile::constant(cfg.h_ext);
  }
  const auto issues = validate(m);
  if (!issues.empty()) {
    std::string msg = "invalid model:";
    for (const auto& i : issues) msg += " " + i.field + " (" + i.message + ");";
    throw ConfigError(msg);
  }
  return m;
}

inline SimulationPlan plan_from_config(const RunConfig& cfg) {
  SimulationPlan p;
  p.num_qubits = cfg.num_qubits;
  p.initial_spins = cfg.spins();
  p.delta_t = cfg.delta_t;
  p.steps = cfg.steps;
  p.shots = cfg.shots;
  p.backend_target = cfg.backend;
  p.compile_mode = cfg.compile;
  if (cfg.noise_choice) p.noise = cfg.noise;
  p.seed = cfg.seed;
  return p;
}

inline std::string echo_config(const RunConfig& c) {
  auto spins = [&] {
    std::string s;
    for (Spin sp : c.spins()) s += std::string(s.empty() ? "" : ",") + (sp == Spin::up ? "up" : "down");
    return s;
  };
  std::ostringstream o;
  o << "Jx = " << format_real(c.jx) << "\n"
    << "Jy = " << format_real(c.jy) << "\n"
    << "Jz = " << format_real(c.jz) << "\n"
    << "h_ext = " << format_real(c.h_ext) << "\n"
    << "ext_dir = " << axis_name(c.ext_dir) << "\n"
    << "num_qubits = " << c.num_qubits << "\n"
    << "initial_spins = " << spins() << "\n"
    << "delta_t = " << format_real(c.delta_t) << "\n"
    << "steps = " << c.steps << "\n"
    << "QCQS = " << (c.qcqs == ExecutionMode::computer ? "computer" : "simulator") << "\n"
    << "shots = " << c.shots << "\n"
    << "noise_choice = " << (c.noise_choice ? "true" : "false") << "\n"
    << "noise_p1 = " << format_real(c.noise.p1) << "\n"
    << "noise_p2 = " << format_real(c.noise.p2) << "\n"
    << "device_choice = " << c.device_choice << "\n"
    << "plot_flag = " << (c.plot_flag ? "true" : "false") << "\n"
    << "time_dep_flag = " << (c.time_dep_flag ? "true" : "false") << "\n"
    << "freq = " << format_real(c.freq) << "\n"
    << "phase = " << format_real(c.phase) << "\n"
    << "custom_time_dep = " << c.custom_time_dep << "\n"
    << "backend = " << to_string(c.backend) << "\n"
    << "compile = " << to_string(c.compile) << "\n"
    << "units = " << (c.units == Units::ev_fs ? "ev_fs" : "dimensionless") << "\n"
    << "seed = " << c.seed << "\n";
  return o.str();
}

// ------------------------------------------------------------------ outputs

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
  if (!f) throw Error("write failed for " + path.string());
}

inline std::string magnetization_csv(const MagnetizationSeries& series, Qubit q) {
  std::string out = "t,magnetization\n";
  for (std::size_t n = 0; n < series.num_steps(); ++n) {
    out += format_real(series.times[n]) + "," + format_real(series.values.at(q)[n]) + "\n";
  }
  return out;
}

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

/// Geometry of the magnetization plot.
struct PlotFrame {
  double width = 800.0;
  double height = 500.0;
  double left = 70.0;
  double right = 150.0;
  double top = 30.0;
  double bottom = 60.0;
  double t_min = 0.0;
  double t_max = 1.0;
  static constexpr double kYMin = -1.1;
  static constexpr double kYMax = 1.1;

  double x(double t) const {
    return left + (t - t_min) / (t_max - t_min) * (width - left - right);
  }
  double y(double m) const {
    return top + (kYMax - m) / (kYMax - kYMin) * (height - top - bottom);
  }
};

inline PlotFrame plot_frame(const MagnetizationSeries& series) {
  PlotFrame f;
  f.t_min = series.times.front();
  f.t_max = series.times.back();
  if (!(f.t_max > f.t_min)) f.t_max = f.t_min + 1.0;
  return f;
}

/// Self-contained SVG of every qubit's trajectory. Identical input gives
/// identical bytes.
inline std::string render_plot_svg(const MagnetizationSeries& series) {
  if (series.empty()) throw Error("cannot plot an empty magnetization series");
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                            "#bcbd22", "#17becf"};
  const PlotFrame f = plot_frame(series);
  using detail::fixed2;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
    << f.height << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double x0 = f.x(f.t_min), x1 = f.x(f.t_max);
  const double y_lo = f.y(PlotFrame::kYMin), y_hi = f.y(PlotFrame::kYMax);
  o << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  o << "<rect x=\"" << fixed2(x0) << "\" y=\"" << fixed2(y_hi) << "\" width=\"" << fixed2(x1 - x0)
    << "\" height=\"" << fixed2(y_lo - y_hi) << "\"/>\n";
  o << "</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (double m : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double y = f.y(m);
    o << "<line x1=\"" << fixed2(x0 - 5) << "\" y1=\"" << fixed2(y) << "\" x2=\"" << fixed2(x1)
      << "\" y2=\"" << fixed2(y) << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << fixed2(x0 - 8) << "\" y=\"" << fixed2(y + 4)
      << "\" text-anchor=\"end\">" << detail::short_number(m) << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double t = f.t_min + (f.t_max - f.t_min) * k / 5.0;
    const double x = f.x(t);
    o << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(y_lo) << "\" x2=\"" << fixed2(x)
      << "\" y2=\"" << fixed2(y_lo + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(y_lo + 20)
      << "\" text-anchor=\"middle\">" << detail::short_number(t) << "</text>\n";
  }
  o << "<text x=\"" << fixed2((x0 + x1) / 2) << "\" y=\"" << fixed2(f.height - 15)
    << "\" text-anchor=\"middle\">time</text>\n";
  o << "<text x=\"18\" y=\"" << fixed2((y_lo + y_hi) / 2) << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 18 " << fixed2((y_lo + y_hi) / 2)
    << ")\">average magnetization</text>\n";
  o << "</g>\n";
  for (std::size_t q = 0; q < series.num_qubits(); ++q) {
    const char* color = kColors[q % std::size(kColors)];
    o << "<polyline class=\"qubit-" << q << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t n = 0; n < series.num_steps(); ++n) {
      if (n) o << ' ';
      o << fixed2(f.x(series.times[n])) << ',' << fixed2(f.y(series.values[q][n]));
    }
    o << "\"/>\n";
    const double ly = f.top + 20.0 * static_cast<double>(q);
    o << "<line x1=\"" << fixed2(x1 + 15) << "\" y1=\"" << fixed2(ly) << "\" x2=\""
      << fixed2(x1 + 40) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fixed2(x1 + 45) << "\" y=\"" << fixed2(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">qubit " << q << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline void write_plot(const MagnetizationSeries& series, const std::filesystem::path& path) {
  write_text_file(path, render_plot_svg(series));
}

// ---------------------------------------------------------------- workflow

struct RunArtifacts {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> qubit_data;
  std::optional<std::filesystem::path> plot;
  std::filesystem::path log;
  std::optional<std::filesystem::path> compile_report;
  std::vector<std::filesystem::path> circuits;
  MagnetizationSeries magnetization;
};

inline NativeTarget native_target(BackendTarget b) {
  if (b == BackendTarget::internal) throw ConfigError("backend internal has no native gate set");
  return b == BackendTarget::ibm ? NativeTarget::ibm : NativeTarget::rigetti;
}

inline Dialect dialect_for(BackendTarget b) {
  return b == BackendTarget::rigetti ? Dialect::quil : Dialect::qasm2;
}

inline std::string circuit_file_name(std::size_t index, Dialect d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "circuit_%03zu.%s", index, d == Dialect::quil ? "quil" : "qasm");
  return buf;
}

namespace detail {

class RunLog {
 public:
  explicit RunLog(const std::filesystem::path& path) : file_(path, std::ios::trunc) {
    if (!file_) throw Error("cannot open log " + path.string());
  }
  void line(std::string_view s) {
    file_ << s << '\n';
    file_.flush();
  }

 private:
  std::ofstream file_;
};

using Clock = std::chrono::steady_clock;

inline std::string ms_since(Clock::time_point start) {
  const auto us =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f ms", static_cast<double>(us) / 1000.0);
  return buf;
}

// Compiles every program of the series per the config; returns the
// compiled series and the text of the compile report.
inline std::pair<CircuitSeries, std::string> compile_series(const CircuitSeries& series,
                                                            const RunConfig& cfg, RunLog& log) {
  const NativeTarget target = native_target(cfg.backend);
  CircuitSeries out;
  out.delta_t = series.delta_t;
  std::ostringstream report;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Program& p = series.programs[i];
    report << "== circuit " << i << "\n";
    if (cfg.compile == CompileMode::generic) {
      CompileResult r = compile_generic(p, target);
      report << to_string(r.report);
      log.line("circuit " + std::to_string(i) + " generic " + to_string(r.report.output_counts));
      out.programs.push_back(std::move(r.program));
    } else {
      CompilerComparison cmp = compare_compilers(p, target);
      report << to_string(cmp.generic.report) << to_string(cmp.domain_specific.report);
      const std::size_t g = cmp.generic.report.output_counts.total;
      const std::size_t d = cmp.domain_specific.report.output_counts.total;
      report << "total gates: generic=" << g << " domain_specific=" << d << "\n";
      log.line("circuit " + std::to_string(i) + " generic " +
               to_string(cmp.generic.report.output_counts));
      log.line("circuit " + std::to_string(i) + " domain_specific " +
               to_string(cmp.domain_specific.report.output_counts) +
               (d <= g ? " (<= generic)" : " (> generic!)"));
      out.programs.push_back(std::move(cmp.domain_specific.program));
    }
  }
  return {std::move(out), report.str()};
}

}  // namespace detail

/// Runs the whole pipeline and writes every artifact into `data_dir`.
/// Failures are logged before being rethrown; files written so far remain.
inline RunArtifacts run_workflow(const RunConfig& cfg, const std::filesystem::path& data_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(data_dir);
  RunArtifacts art;
  art.output_dir = data_dir;
  art.log = data_dir / "run.log";
  detail::RunLog log(art.log);
  const auto t_start = detail::Clock::now();

  try {
    log.line("# run configuration");
    log.line(echo_config(cfg));
    std::string mode = cfg.shots == 0 ? "exact" : (cfg.noise_choice ? "noisy" : "sampled");
    log.line("mode: " + mode);
    if (cfg.qcqs == ExecutionMode::computer) {
      log.line("warning: QCQS = computer; cloud execution is not available, emulating the "
               "device with sampled shots on the local simulator");
    }
    for (const auto& entry : {data_dir / "magnetization.svg", data_dir / "compile_report.txt"}) {
      if (fs::exists(entry)) log.line("overwriting " + entry.string());
    }

    auto t = detail::Clock::now();
    const HeisenbergModel model = model_from_config(cfg);
    const SimulationPlan plan = plan_from_config(cfg);
    CircuitSeries series = generate_circuits(model, plan);
    log.line("timing: generate_circuits " + detail::ms_since(t));
    for (std::size_t i = 0; i < series.size(); ++i) {
      log.line("circuit " + std::to_string(i) + " ir " +
               to_string(gate_counts(series.programs[i])));
    }

    if (cfg.compile != CompileMode::none) {
      t = detail::Clock::now();
      auto [compiled, report] = detail::compile_series(series, cfg, log);
      art.compile_report = data_dir / "compile_report.txt";
      write_text_file(*art.compile_report, report);
      series = std::move(compiled);
      log.line("timing: compile " + detail::ms_since(t));
    }

    if (cfg.backend != BackendTarget::internal) {
      const Dialect d = dialect_for(cfg.backend);
      fs::create_directories(data_dir / "circuits");
      for (std::size_t i = 0; i < series.size(); ++i) {
        const fs::path p = data_dir / "circuits" / circuit_file_name(i, d);
        write_text_file(p, emit(series.programs[i], d));
        art.circuits.push_back(p);
      }
      log.line("wrote " + std::to_string(series.size()) + " circuit files");
    }

    t = detail::Clock::now();
    art.magnetization = simulate_series(series, plan);
    log.line("timing: simulate " + detail::ms_since(t));

    for (Qubit q = 0; q < cfg.num_qubits; ++q) {
      const fs::path p = data_dir / ("qubit_" + std::to_string(q) + "_magnetization.csv");
      if (fs::exists(p)) log.line("overwriting " + p.string());
      write_text_file(p, magnetization_csv(art.magnetization, q));
      art.qubit_data.push_back(p);
    }
    if (cfg.plot_flag) {
      art.plot = data_dir / "magnetization.svg";
      write_plot(art.magnetization, *art.plot);
    }
    log.line("timing: total " + detail::ms_since(t_start));
    log.line("status: ok");
  } catch (const std::exception& e) {
    log.line(std::string("error: ") + e.what());
    log.line("status: failed");
    throw;
  }
  return art;
}

// ------------------------------------------------------- standalone tools

struct CompiledText {
  std::string circuit;
  std::string report;
  Program program;
};

/// Parses a circuit, compiles it for `target` and re-emits it in the same
/// dialect. With `domain_specific`, the report compares both compilers.
inline CompiledText compile_circuit_text(std::string_view text, Dialect dialect,
                                         NativeTarget target, bool domain_specific) {
  const Program input = parse(text, dialect);
  if (!domain_specific) {
    CompileResult r = compile_generic(input, target);
    return {emit(r.program, dialect), to_string(r.report), std::move(r.program)};
  }
  CompilerComparison cmp = compare_compilers(input, target);
  std::string report = to_string(cmp.generic.report) + to_string(cmp.domain_specific.report);
  report += "total gates: generic=" + std::to_string(cmp.generic.report.output_counts.total) +
            " domain_specific=" + std::to_string(cmp.domain_specific.report.output_counts.total) +
            "\n";
  report += "two-qubit gates: generic=" +
            std::to_string(cmp.generic.report.output_counts.total_two_qubit) +
            " domain_specific=" +
            std::to_string(cmp.domain_specific.report.output_counts.total_two_qubit) + "\n";
  return {emit(cmp.domain_specific.program, dialect), report,
          std::move(cmp.domain_specific.program)};
}

/// Writes the circuit series of a config without simulating it. Circuits
/// are compiled first when the config asks for it.
inline std::vector<std::filesystem::path> emit_series(const RunConfig& cfg, Dialect dialect,
                                                      const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  CircuitSeries series = generate_circuits(model_from_config(cfg), plan_from_config(cfg));
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < series.size(); ++i) {
    Program p = series.programs[i];
    if (cfg.compile == CompileMode::generic) {
      p = lower_generic(p, native_target(cfg.backend));
    } else if (cfg.compile == CompileMode::domain_specific) {
      p = ds_compile(p, native_target(cfg.backend)).program;
    }
    const auto path = out_dir / circuit_file_name(i, dialect);
    write_text_file(path, emit(p, dialect));
    written.push_back(path);
  }
  return written;
}

}  // namespace heisenq
