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

// heisenq command-line tool.
//
//   heisenq run <input_file> [--data-dir DIR]
//   heisenq compile --dialect qasm|quil --target ibm|rigetti [--ds] <in> <out>
//   heisenq emit --dialect qasm|quil <input_file> <outdir>
//
// Exit status: 0 success, 1 usage/config/parse error, 2 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heisenq/workflow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw heisenq::ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& input, const std::string& data_dir) {
  const heisenq::RunConfig cfg = heisenq::load_input_file(input);
  const heisenq::RunArtifacts art = heisenq::run_workflow(cfg, data_dir);
  std::cout << "wrote " << art.qubit_data.size() << " magnetization files to "
            << art.output_dir.string() << "\n";
  if (art.plot) std::cout << "plot: " << art.plot->string() << "\n";
  if (art.compile_report) std::cout << "compile report: " << art.compile_report->string() << "\n";
  std::cout << "log: " << art.log.string() << "\n";
  return kExitOk;
}

int cmd_compile(const std::string& in, const std::string& out, heisenq::Dialect dialect,
                heisenq::NativeTarget target, bool ds) {
  const std::string text = read_file(in);
  const heisenq::CompiledText result = heisenq::compile_circuit_text(text, dialect, target, ds);
  heisenq::write_text_file(out, result.circuit);
  heisenq::write_text_file(out + ".report.txt", result.report);
  std::cout << result.report;
  return kExitOk;
}

int cmd_emit(const std::string& input, const std::string& outdir, heisenq::Dialect dialect) {
  const heisenq::RunConfig cfg = heisenq::load_input_file(input);
  const auto files = heisenq::emit_series(cfg, dialect, outdir);
  std::cout << "wrote " << files.size() << " circuits to " << outdir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heisenq: quantum circuits for Heisenberg spin chain dynamics"};
  app.require_subcommand(1);

  const std::map<std::string, heisenq::Dialect> dialects{{"qasm", heisenq::Dialect::qasm2},
                                                         {"quil", heisenq::Dialect::quil}};
  const std::map<std::string, heisenq::NativeTarget> targets{
      {"ibm", heisenq::NativeTarget::ibm}, {"rigetti", heisenq::NativeTarget::rigetti}};
  const auto dialect_names = CLI::IsMember({"qasm", "quil"}, CLI::ignore_case);

  std::string input, data_dir = "data";
  auto* run = app.add_subcommand("run", "simulate the system described by an input file");
  run->add_option("input_file", input, "input file of key = value lines")->required();
  run->add_option("--data-dir", data_dir, "output directory")->capture_default_str();

  std::string in, out;
  std::string dialect = "qasm", target = "ibm";
  bool ds = false;
  auto* compile = app.add_subcommand("compile", "compile a QASM or Quil circuit file");
  compile->add_option("--dialect", dialect, "circuit dialect")->required()->transform(dialect_names);
  compile->add_option("--target", target, "native gate set")
      ->required()
      ->transform(CLI::IsMember({"ibm", "rigetti"}, CLI::ignore_case));
  compile->add_flag("--ds", ds, "use the domain-specific compiler and compare with generic");
  compile->add_option("in", in, "input circuit")->required();
  compile->add_option("out", out, "output circuit")->required();

  std::string emit_input, outdir;
  std::string emit_dialect = "qasm";
  auto* emit = app.add_subcommand("emit", "write the circuit series without simulating it");
  emit->add_option("--dialect", emit_dialect, "circuit dialect")
      ->required()
      ->transform(dialect_names);
  emit->add_option("input_file", emit_input, "input file")->required();
  emit->add_option("outdir", outdir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(input, data_dir);
    if (*compile) return cmd_compile(in, out, dialects.at(dialect), targets.at(target), ds);
    if (*emit) return cmd_emit(emit_input, outdir, dialects.at(emit_dialect));
  } catch (const heisenq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const heisenq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
