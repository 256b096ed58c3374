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

// Text pulse files:
//
//   # phase-only pulse
//   format 1
//   segments 3000
//   segment_duration_s 1.0000000000000001e-05
//   amplitude_rad_s 62831.853071795864
//   spin_system crotonic
//   target swap_BC
//   fidelity 0.99912345678901234      (optional)
//   converged 1                       (optional)
//   phases
//   <one phase in radians per line, 17 significant digits>
//
// Numbers are written with 17 significant digits, so read(write(p)) == p bit
// for bit.

#include "homog/grape.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace homog {

struct PulseFile {
  PulseSpec pulse;
  std::string spin_system = "crotonic";
  std::string target;
  std::optional<double> fidelity;
  std::optional<bool> converged;

  friend bool operator==(const PulseFile&, const PulseFile&) = default;
};

/// 17 significant digits, shortest exponent form.
std::string format_double(double value);

std::string format_pulse_file(const PulseFile& file);
PulseFile parse_pulse_file(std::string_view text);

void write_pulse_file(const std::filesystem::path& path, const PulseFile& file);
PulseFile read_pulse_file(const std::filesystem::path& path);

}  // namespace homog
