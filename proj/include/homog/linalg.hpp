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

// Dense complex linear algebra and single/multi-qubit state primitives.
//
// Qubit ordering: qubit 0 is the most significant bit of a basis index and the
// leftmost factor of a tensor product. With four qubits, qubit 0 is spin A.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace homog {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Polarisation f = tr(rho sigma_z) of a single qubit.
using Polarisation = double;

inline constexpr int kDefaultMaxQubits = 14;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;

/// Number of qubits for a 2^n dimension; throws ArgumentError otherwise.
int qubit_count(Eigen::Index dimension);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

bool is_finite(const ComplexMatrix& m);

/// Eigenvalues (ascending) of the Hermitian part of `m`.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws ArgumentError.
  explicit DensityMatrix(ComplexMatrix matrix);

  /// Wraps the output of a trace-preserving map without re-validating.
  static DensityMatrix trusted(ComplexMatrix matrix);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix matrix, Trusted);

  ComplexMatrix matrix_;
  int num_qubits_ = 0;
};

class UnitaryMatrix {
 public:
  /// Validates U^dagger U = 1 within `tolerance`; throws ArgumentError.
  explicit UnitaryMatrix(ComplexMatrix matrix, double tolerance = kUnitaryTol);

  static UnitaryMatrix trusted(ComplexMatrix matrix);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// max |U^dagger U - 1|
  double unitarity_error() const;

 private:
  struct Trusted {};
  UnitaryMatrix(ComplexMatrix matrix, Trusted);

  ComplexMatrix matrix_;
  int num_qubits_ = 0;
};

// Single-qubit constants.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix identity(Eigen::Index dimension);
ComplexMatrix swap_matrix();

/// Kronecker product a (x) b; `a` occupies the most significant qubits.
/// Throws SizeError if either result dimension exceeds 2^max_qubits.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             int max_qubits = kDefaultMaxQubits);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             int max_qubits = kDefaultMaxQubits);

/// Reduced state on `keep` (kept in ascending qubit order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

/// tr(rho sigma_z) of a one-qubit state.
Polarisation polarisation(const DensityMatrix& rho);

/// rho = 1/2 + f sigma_z / 2.
DensityMatrix state_from_f(Polarisation f);

DensityMatrix basis_state(int num_qubits, std::uint64_t index);
DensityMatrix maximally_mixed(int num_qubits);

/// Binary entropy (bits) of a z-diagonal qubit with polarisation f.
double von_neumann_entropy(Polarisation f);

/// (1/2) || a - b ||_1
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// U rho U^dagger
DensityMatrix apply(const UnitaryMatrix& u, const DensityMatrix& rho);

/// exp(generator) for skew-Hermitian `generator` = -i H, via the eigenbasis of H.
/// Throws ArgumentError if the generator is not skew-Hermitian within 1e-10
/// (relative to its largest entry when that exceeds 1).
UnitaryMatrix expm_skew_hermitian(const ComplexMatrix& generator);

/// Number of matrix exponentials evaluated by this process so far.
std::uint64_t matrix_exponential_count();

}  // namespace homog
