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

// Spin-system configuration documents. See docs/spin_config.md for the schema.

#include "homog/spin_system.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace homog {

struct SpinConfig {
  SpinSystem system = crotonic_default();
  /// One row per proton, one column per spin; present iff [protons] was given.
  std::optional<Eigen::MatrixXd> hc_couplings_hz;
  std::vector<std::string> proton_labels;
  std::vector<int> methyl_group;
};

/// Throws ParseError (with line number) on malformed input.
SpinConfig parse_spin_config(std::string_view text);

/// Reads and parses a file; I/O failures raise ConfigurationError.
SpinConfig load_spin_config(const std::filesystem::path& path);

/// Proton ensemble when the config lists protons, otherwise one member.
EnvironmentEnsemble ensemble_from_config(const SpinConfig& config);

}  // namespace homog
