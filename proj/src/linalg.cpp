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

#include "homog/linalg.hpp"

#include "homog/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace homog {
namespace {

std::atomic<std::uint64_t> g_expm_count{0};

double hermitian_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

// Scatter the bits of `value` (MSB first) onto the qubit slots in `qubits`.
std::uint64_t scatter_bits(std::uint64_t value, const std::vector<int>& qubits, int n) {
  std::uint64_t out = 0;
  const auto k = static_cast<int>(qubits.size());
  for (int b = 0; b < k; ++b) {
    if ((value >> (k - 1 - b)) & 1U) out |= std::uint64_t{1} << (n - 1 - qubits[b]);
  }
  return out;
}

}  // namespace

int qubit_count(Eigen::Index dimension) {
  if (dimension < 1) throw ArgumentError("matrix dimension must be positive");
  int n = 0;
  Eigen::Index d = 1;
  while (d < dimension) {
    d <<= 1;
    ++n;
  }
  if (d != dimension)
    throw ArgumentError("dimension " + std::to_string(dimension) + " is not a power of two");
  return n;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ArgumentError("density matrix must be square");
  num_qubits_ = qubit_count(matrix_.rows());
  if (!is_finite(matrix_)) throw ArgumentError("density matrix has non-finite entries");
  if (hermitian_defect(matrix_) > kHermitianTol)
    throw ArgumentError("density matrix is not Hermitian");
  const Complex tr = matrix_.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol)
    throw ArgumentError("density matrix trace is not 1");
  if (hermitian_eigenvalues(matrix_).minCoeff() < -kPsdTol)
    throw ArgumentError("density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {
  num_qubits_ = qubit_count(matrix_.rows());
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix matrix) {
  return DensityMatrix(std::move(matrix), Trusted{});
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix matrix, double tolerance) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ArgumentError("unitary must be square");
  num_qubits_ = qubit_count(matrix_.rows());
  if (!is_finite(matrix_)) throw ArgumentError("unitary has non-finite entries");
  if (unitarity_error() > tolerance) throw ArgumentError("matrix is not unitary");
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {
  num_qubits_ = qubit_count(matrix_.rows());
}

UnitaryMatrix UnitaryMatrix::trusted(ComplexMatrix matrix) {
  return UnitaryMatrix(std::move(matrix), Trusted{});
}

double UnitaryMatrix::unitarity_error() const {
  return max_abs(matrix_.adjoint() * matrix_ - identity(matrix_.rows()));
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix identity(Eigen::Index dimension) {
  return ComplexMatrix::Identity(dimension, dimension);
}

ComplexMatrix swap_matrix() {
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b, int max_qubits) {
  const Eigen::Index cap = Eigen::Index{1} << max_qubits;
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > cap || cols > cap)
    throw SizeError("tensor product exceeds the " + std::to_string(max_qubits) + "-qubit cap");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, int max_qubits) {
  return DensityMatrix::trusted(tensor_product(a.matrix(), b.matrix(), max_qubits));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int q : keep)
    if (q < 0 || q >= n)
      throw ArgumentError("partial_trace: qubit index " + std::to_string(q) + " out of range");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);

  const std::uint64_t kept_dim = std::uint64_t{1} << keep.size();
  const std::uint64_t traced_dim = std::uint64_t{1} << traced.size();
  std::vector<std::uint64_t> kept_offsets(kept_dim), traced_offsets(traced_dim);
  for (std::uint64_t i = 0; i < kept_dim; ++i) kept_offsets[i] = scatter_bits(i, keep, n);
  for (std::uint64_t t = 0; t < traced_dim; ++t) traced_offsets[t] = scatter_bits(t, traced, n);

  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::uint64_t j = 0; j < kept_dim; ++j) {
    for (std::uint64_t i = 0; i < kept_dim; ++i) {
      Complex sum = 0.0;
      for (std::uint64_t t = 0; t < traced_dim; ++t)
        sum += m(kept_offsets[i] | traced_offsets[t], kept_offsets[j] | traced_offsets[t]);
      out(i, j) = sum;
    }
  }
  return DensityMatrix::trusted(std::move(out));
}

Polarisation polarisation(const DensityMatrix& rho) {
  if (rho.num_qubits() != 1)
    throw ArgumentError("polarisation requires a single-qubit state; partial_trace first");
  const Complex f = (rho.matrix() * pauli_z()).trace();
  if (std::abs(f.imag()) > 1e-12) throw ArgumentError("polarisation has an imaginary residue");
  return f.real();
}

DensityMatrix state_from_f(Polarisation f) {
  if (!(std::abs(f) <= 1.0)) throw DomainError("polarisation must satisfy |f| <= 1");
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.5 * (1.0 + f);
  m(1, 1) = 0.5 * (1.0 - f);
  return DensityMatrix::trusted(std::move(m));
}

DensityMatrix basis_state(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1 || num_qubits > kDefaultMaxQubits)
    throw SizeError("basis_state: qubit count out of range");
  const auto dim = Eigen::Index{1} << num_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) throw ArgumentError("basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix::trusted(std::move(m));
}

DensityMatrix maximally_mixed(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kDefaultMaxQubits)
    throw SizeError("maximally_mixed: qubit count out of range");
  const auto dim = Eigen::Index{1} << num_qubits;
  return DensityMatrix::trusted(identity(dim) / static_cast<double>(dim));
}

double von_neumann_entropy(Polarisation f) {
  if (!(std::abs(f) <= 1.0)) throw DomainError("entropy: polarisation must satisfy |f| <= 1");
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(0.5 * (1.0 + f)) + term(0.5 * (1.0 - f));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension()) throw ArgumentError("trace_distance: dimension mismatch");
  return 0.5 * hermitian_eigenvalues(a.matrix() - b.matrix()).cwiseAbs().sum();
}

DensityMatrix apply(const UnitaryMatrix& u, const DensityMatrix& rho) {
  if (u.dimension() != rho.dimension()) throw ArgumentError("apply: dimension mismatch");
  return DensityMatrix::trusted(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

UnitaryMatrix expm_skew_hermitian(const ComplexMatrix& generator) {
  if (generator.rows() != generator.cols()) throw ArgumentError("expm: generator must be square");
  if (!is_finite(generator)) throw ArgumentError("expm: generator has non-finite entries");
  const double scale = std::max(1.0, max_abs(generator));
  if (max_abs(generator + generator.adjoint()) > 1e-10 * scale)
    throw ArgumentError("expm: generator is not skew-Hermitian");
  g_expm_count.fetch_add(1, std::memory_order_relaxed);

  // generator = -i H  =>  H = i generator
  const ComplexMatrix h = Complex(0.0, 0.5) * (generator - generator.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const ComplexMatrix& v = solver.eigenvectors();
  const ComplexVector phases =
      solver.eigenvalues().unaryExpr([](double lambda) { return std::polar(1.0, -lambda); });
  return UnitaryMatrix::trusted(v * phases.asDiagonal() * v.adjoint());
}

std::uint64_t matrix_exponential_count() {
  return g_expm_count.load(std::memory_order_relaxed);
}

}  // namespace homog
