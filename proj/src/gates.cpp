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

#include "homog/gates.hpp"

#include "homog/errors.hpp"
#include "homog/homogeniser.hpp"
#include "homog/kernels.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace homog {
namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_degrees(double deg) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, deg);
  if (ec != std::errc()) throw ArgumentError("cannot format angle");
  return std::string(buf, ptr);
}

std::string partial_swap_gate_name(double eta_deg) {
  return "pswap_" + format_degrees(eta_deg);
}

UnitaryMatrix target_gate(std::string_view name, const SpinSystem& system) {
  const int n = system.n_spins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (name == "identity") return UnitaryMatrix::trusted(identity(dim));
  if (name == "x180") {
    const ComplexMatrix gen = Complex(0.0, -std::numbers::pi) * control_operators(n).ix;
    return expm_skew_hermitian(gen);
  }

  const auto parts = split(name, '_');
  if (parts.size() == 2 && parts[0] == "pswap") {
    if (n < 3) throw ArgumentError("pswap gates need at least three spins");
    double deg = 0.0;
    const std::string& tok = parts[1];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), deg);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(deg))
      throw ArgumentError("bad partial swap angle in '" + std::string(name) + "'");
    return UnitaryMatrix::trusted(kernels::embed_two_qubit(
        partial_swap_unitary(degrees_to_radians(deg)).matrix(), 1, 2, n));
  }
  if (parts.size() >= 2 && parts[0] == "swap") {
    ComplexMatrix u = identity(dim);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].size() != 2)
        throw ArgumentError("swap gate '" + std::string(name) + "' needs two-letter spin pairs");
      const int a = system.index_of(parts[i].substr(0, 1));
      const int b = system.index_of(parts[i].substr(1, 1));
      if (a == b || used[a] || used[b])
        throw ArgumentError("swap gate '" + std::string(name) + "' reuses a spin");
      used[a] = used[b] = true;
      u = kernels::embed_two_qubit(swap_matrix(), a, b, n) * u;
    }
    return UnitaryMatrix::trusted(std::move(u));
  }
  throw ArgumentError("unknown gate '" + std::string(name) + "'");
}

}  // namespace homog
