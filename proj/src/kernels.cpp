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

#include "homog/kernels.hpp"

#include "homog/errors.hpp"

#include <array>
#include <cstdint>

namespace homog::kernels {
namespace {

struct GateBits {
  std::uint64_t first;   // mask of the gate's first qubit
  std::uint64_t second;  // mask of the gate's second qubit
  int low;               // lower bit position
  int high;              // higher bit position
};

GateBits gate_bits(int first, int second, int n) {
  if (first == second || first < 0 || second < 0 || first >= n || second >= n)
    throw ArgumentError("two-qubit gate needs two distinct qubits in range");
  if (n > kDefaultMaxQubits) throw SizeError("state exceeds the qubit cap");
  const int p1 = n - 1 - first;
  const int p2 = n - 1 - second;
  return {std::uint64_t{1} << p1, std::uint64_t{1} << p2, p1 < p2 ? p1 : p2, p1 < p2 ? p2 : p1};
}

// Index with zero bits inserted at positions `low` < `high`.
inline std::uint64_t base_index(std::uint64_t i, int low, int high) {
  const std::uint64_t low_mask = (std::uint64_t{1} << low) - 1;
  i = ((i & ~low_mask) << 1) | (i & low_mask);
  const std::uint64_t high_mask = (std::uint64_t{1} << high) - 1;
  return ((i & ~high_mask) << 1) | (i & high_mask);
}

}  // namespace

void apply_two_qubit_gate(ComplexMatrix& rho, const ComplexMatrix& gate, int first, int second) {
  if (gate.rows() != 4 || gate.cols() != 4) throw ArgumentError("gate must be 4x4");
  if (rho.rows() != rho.cols()) throw ArgumentError("state must be square");
  const int n = qubit_count(rho.rows());
  const GateBits bits = gate_bits(first, second, n);
  const auto dim = static_cast<std::int64_t>(rho.rows());
  const std::int64_t groups = dim / 4;

  std::array<Complex, 16> u{};
  std::array<Complex, 16> u_conj{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      u[r * 4 + c] = gate(r, c);
      u_conj[r * 4 + c] = std::conj(gate(r, c));
    }

  // Left multiply: each column is independent.
#pragma omp parallel for schedule(static)
  for (std::int64_t col = 0; col < dim; ++col) {
    for (std::int64_t g = 0; g < groups; ++g) {
      const std::uint64_t b = base_index(static_cast<std::uint64_t>(g), bits.low, bits.high);
      const std::array<Eigen::Index, 4> idx{
          static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b | bits.second),
          static_cast<Eigen::Index>(b | bits.first),
          static_cast<Eigen::Index>(b | bits.first | bits.second)};
      const std::array<Complex, 4> v{rho(idx[0], col), rho(idx[1], col), rho(idx[2], col),
                                     rho(idx[3], col)};
      for (int r = 0; r < 4; ++r)
        rho(idx[r], col) = u[r * 4] * v[0] + u[r * 4 + 1] * v[1] + u[r * 4 + 2] * v[2] +
                           u[r * 4 + 3] * v[3];
    }
  }

  // Right multiply by U^dagger: each column group is independent.
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < groups; ++g) {
    const std::uint64_t b = base_index(static_cast<std::uint64_t>(g), bits.low, bits.high);
    const std::array<Eigen::Index, 4> idx{
        static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b | bits.second),
        static_cast<Eigen::Index>(b | bits.first),
        static_cast<Eigen::Index>(b | bits.first | bits.second)};
    for (std::int64_t row = 0; row < dim; ++row) {
      const std::array<Complex, 4> v{rho(row, idx[0]), rho(row, idx[1]), rho(row, idx[2]),
                                     rho(row, idx[3])};
      for (int k = 0; k < 4; ++k)
        rho(row, idx[k]) = v[0] * u_conj[k * 4] + v[1] * u_conj[k * 4 + 1] +
                           v[2] * u_conj[k * 4 + 2] + v[3] * u_conj[k * 4 + 3];
    }
  }
}

ComplexMatrix embed_two_qubit(const ComplexMatrix& gate, int first, int second, int num_qubits) {
  if (gate.rows() != 4 || gate.cols() != 4) throw ArgumentError("gate must be 4x4");
  const GateBits bits = gate_bits(first, second, num_qubits);
  const auto dim = Eigen::Index{1} << num_qubits;
  const std::uint64_t rest_mask = ~(bits.first | bits.second);
  auto local = [&](std::uint64_t i) {
    return ((i & bits.first) ? 2 : 0) + ((i & bits.second) ? 1 : 0);
  };
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto ur = static_cast<std::uint64_t>(r);
      const auto uc = static_cast<std::uint64_t>(c);
      if ((ur & rest_mask) == (uc & rest_mask)) out(r, c) = gate(local(ur), local(uc));
    }
  return out;
}

ComplexMatrix apply_two_qubit_gate_reference(const ComplexMatrix& rho, const ComplexMatrix& gate,
                                             int first, int second) {
  const ComplexMatrix e = embed_two_qubit(gate, first, second, qubit_count(rho.rows()));
  return e * rho * e.adjoint();
}

}  // namespace homog::kernels
