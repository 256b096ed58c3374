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

// Built-in target gates, addressed by name:
//
//   identity        1 on every spin
//   x180            exp(-i pi Ix), a pi rotation of all spins about x
//   swap_PQ         SWAP of spins P and Q (single-character labels)
//   swap_PQ_RS      two disjoint SWAPs applied together
//   pswap_<deg>     partial swap cos(eta) 1 + i sin(eta) SWAP on the second and
//                   third spins (B and C of the four-spin chain)

#include "homog/linalg.hpp"
#include "homog/spin_system.hpp"

#include <string>
#include <string_view>

namespace homog {

/// Throws ArgumentError for unknown names or labels.
UnitaryMatrix target_gate(std::string_view name, const SpinSystem& system);

/// Shortest round-trip decimal, e.g. "30" or "12.5".
std::string format_degrees(double deg);

/// "pswap_30", "pswap_12.5", ...
std::string partial_swap_gate_name(double eta_deg);

}  // namespace homog
