// Copyright 2026 The Homogeniser Authors
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

#include <stdexcept>
#include <string>

namespace homog {

/// Input violates an operation's precondition (wrong shape, empty set, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real-valued input outside its mathematical domain, e.g. |f| > 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested Hilbert space exceeds the configured qubit cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Interaction schedule does not reproduce the closed-form marginals.
class ScheduleValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormalisationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or inconsistent run configuration (pulse files, paths, flags).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text document. Carries the 1-based line number (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// Same error with `context` (e.g. a file path) prepended to the message.
  ParseError(const std::string& context, const ParseError& inner)
      : std::runtime_error(context + ": " + inner.what()), line_(inner.line_) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace homog
