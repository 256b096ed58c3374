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

// Comma-separated sweep tables. One header row, then one row per
// (eta, repeat) in record order:
//
//   eta_deg, repeat, fA_raw..fD_raw, fA_norm..fD_norm, theory_fA..theory_fD,
//   S_A..S_D, S_sum, theory_S_sum, mode, scheme
//
// Theory columns come from the closed-form marginals; entropies are computed
// from the normalised polarisations (clamped to [-1, 1]). Numbers carry 17
// significant digits so read_records(format_records(r)) == r exactly.

#include "homog/experiment.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace homog {

std::string records_header();

/// Throws ArgumentError for an empty record list.
std::string format_records(const std::vector<SweepRecord>& records);

/// Parses the raw/normalised columns back; derived columns are not re-read.
std::vector<SweepRecord> parse_records(std::string_view text);

/// I/O failures raise ConfigurationError naming the path.
void write_records(const std::filesystem::path& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records(const std::filesystem::path& path);

/// eta_deg, S_A..S_D, S_sum, theory_S_A..theory_S_D, theory_S_sum. `grid_deg`
/// labels the rows (the same grid entropy_profile received, in degrees).
std::string format_entropy_table(const std::vector<double>& grid_deg,
                                 const std::vector<EntropyRow>& rows);

/// Writes `text` to `path`, raising ConfigurationError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace homog
