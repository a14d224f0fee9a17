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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heisenq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gate or program violates its structural invariants.
class InvalidCircuit : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a resource guard (qubit count for dense routines).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration: input files, model parameters, plans.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The compiler produced something it should not have (a bug, surfaced).
class CompileError : public Error {
 public:
  using Error::Error;
};

}  // namespace heisenq
