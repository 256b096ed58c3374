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

// Data-parallel density-matrix kernels. Each OpenMP kernel has a serial
// reference built from the dense embedding; the tests and bench_kernels
// compare the two.

#include "homog/linalg.hpp"

namespace homog::kernels {

/// rho <- U rho U^dagger for a 4x4 `gate` acting on qubits (first, second).
/// The gate's basis index is 2 * bit(first) + bit(second). OpenMP-parallel.
void apply_two_qubit_gate(ComplexMatrix& rho, const ComplexMatrix& gate, int first, int second);

/// Full 2^n x 2^n matrix of `gate` on (first, second) with identity elsewhere.
ComplexMatrix embed_two_qubit(const ComplexMatrix& gate, int first, int second, int num_qubits);

/// Serial reference for apply_two_qubit_gate: dense E rho E^dagger.
ComplexMatrix apply_two_qubit_gate_reference(const ComplexMatrix& rho, const ComplexMatrix& gate,
                                             int first, int second);

}  // namespace homog::kernels
