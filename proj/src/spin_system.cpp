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

#include "homog/spin_system.hpp"

#include "homog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace homog {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix half_pauli(char axis) {
  switch (axis) {
    case 'x':
      return 0.5 * pauli_x();
    case 'y':
      return 0.5 * pauli_y();
    case 'z':
      return 0.5 * pauli_z();
    default:
      throw ArgumentError(std::string("unknown spin axis '") + axis + "'");
  }
}

int binomial(int n, int k) {
  int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

SpinSystem::SpinSystem(std::vector<std::string> labels, std::vector<double> frequencies_hz,
                       Eigen::MatrixXd couplings_hz)
    : labels_(std::move(labels)),
      frequencies_hz_(std::move(frequencies_hz)),
      couplings_hz_(std::move(couplings_hz)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n < 1) throw ArgumentError("spin system needs at least one spin");
  if (n > kDefaultMaxQubits) throw SizeError("spin system exceeds the qubit cap");
  if (static_cast<Eigen::Index>(frequencies_hz_.size()) != n || couplings_hz_.rows() != n ||
      couplings_hz_.cols() != n)
    throw ArgumentError("spin system dimensions disagree");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
    throw ArgumentError("spin labels must be unique");
  for (double f : frequencies_hz_)
    if (!std::isfinite(f)) throw ArgumentError("spin frequency must be finite");
  if (!couplings_hz_.allFinite()) throw ArgumentError("couplings must be finite");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (couplings_hz_(i, i) != 0.0) throw ArgumentError("coupling matrix must have zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (couplings_hz_(i, j) != couplings_hz_(j, i))
        throw ArgumentError("coupling matrix must be symmetric");
  }
}

int SpinSystem::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ArgumentError("unknown spin label '" + std::string(label) + "'");
  return static_cast<int>(it - labels_.begin());
}

SpinSystem SpinSystem::shifted(const std::vector<double>& shifts_hz) const {
  if (static_cast<int>(shifts_hz.size()) != n_spins())
    throw ArgumentError("shift vector length must equal the spin count");
  std::vector<double> f = frequencies_hz_;
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += shifts_hz[k];
  return SpinSystem(labels_, std::move(f), couplings_hz_);
}

SpinSystem crotonic_default() {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
  auto set = [&](int a, int b, double hz) { j(a, b) = j(b, a) = hz; };
  set(0, 1, 41.6);
  set(0, 2, 1.5);
  set(0, 3, 7.1);
  set(1, 2, 69.6);
  set(1, 3, 1.2);
  set(2, 3, 72.3);
  return SpinSystem({"A", "B", "C", "D"}, {-11962.2, 7306.0, 3972.1, 10626.1}, j);
}

CouplingModel parse_coupling_model(std::string_view name) {
  if (name == "isotropic") return CouplingModel::kIsotropic;
  if (name == "weak") return CouplingModel::kWeak;
  throw ArgumentError("unknown coupling model '" + std::string(name) + "'");
}

std::string to_string(CouplingModel model) {
  return model == CouplingModel::kIsotropic ? "isotropic" : "weak";
}

ComplexMatrix spin_operator(int n_spins, int k, char axis) {
  if (n_spins < 1 || n_spins > kDefaultMaxQubits) throw SizeError("spin count out of range");
  if (k < 0 || k >= n_spins) throw ArgumentError("spin index out of range");
  const ComplexMatrix single = half_pauli(axis);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < n_spins; ++i) out = tensor_product(out, i == k ? single : identity(2));
  return out;
}

ComplexMatrix build_internal_hamiltonian(const SpinSystem& system, CouplingModel model) {
  const int n = system.n_spins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> iz(n), ix, iy;
  for (int k = 0; k < n; ++k) iz[k] = spin_operator(n, k, 'z');
  if (model == CouplingModel::kIsotropic) {
    for (int k = 0; k < n; ++k) {
      ix.push_back(spin_operator(n, k, 'x'));
      iy.push_back(spin_operator(n, k, 'y'));
    }
  }
  for (int k = 0; k < n; ++k) h += kTwoPi * system.frequencies_hz()[k] * iz[k];
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const double j = system.coupling(k, l);
      if (j == 0.0) continue;
      ComplexMatrix term = iz[k] * iz[l];
      if (model == CouplingModel::kIsotropic) term += ix[k] * ix[l] + iy[k] * iy[l];
      h += kTwoPi * j * term;
    }
  }
  return h;
}

ControlOperators control_operators(int n_spins) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  ControlOperators ops{ComplexMatrix::Zero(dim, dim), ComplexMatrix::Zero(dim, dim),
                       ComplexMatrix::Zero(dim, dim)};
  for (int k = 0; k < n_spins; ++k) {
    ops.ix += spin_operator(n_spins, k, 'x');
    ops.iy += spin_operator(n_spins, k, 'y');
    ops.iz += spin_operator(n_spins, k, 'z');
  }
  return ops;
}

RealVector collective_iz_diagonal(int n_spins) {
  if (n_spins < 1 || n_spins > kDefaultMaxQubits) throw SizeError("spin count out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  RealVector d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double m = 0.0;
    for (int k = 0; k < n_spins; ++k) m += ((i >> (n_spins - 1 - k)) & 1) ? -0.5 : 0.5;
    d(i) = m;
  }
  return d;
}

EnvironmentEnsemble environment_ensemble(const SpinSystem& system,
                                         const Eigen::MatrixXd& hc_couplings_hz,
                                         const std::vector<int>& methyl_group) {
  const int n_protons = static_cast<int>(hc_couplings_hz.rows());
  const int n_carbons = system.n_spins();
  if (hc_couplings_hz.cols() != n_carbons)
    throw ArgumentError("heteronuclear coupling matrix needs one column per spin");
  if (n_protons > 20) throw ArgumentError("too many protons");
  const std::set<int> methyl(methyl_group.begin(), methyl_group.end());
  if (methyl.size() != methyl_group.size()) throw ArgumentError("methyl group repeats a proton");
  for (int p : methyl)
    if (p < 0 || p >= n_protons) throw ArgumentError("methyl proton index out of range");

  std::vector<int> others;
  for (int p = 0; p < n_protons; ++p)
    if (!methyl.count(p)) others.push_back(p);
  const int n_methyl = static_cast<int>(methyl.size());

  std::vector<double> methyl_mean(n_carbons, 0.0);
  for (int p : methyl)
    for (int c = 0; c < n_carbons; ++c) methyl_mean[c] += hc_couplings_hz(p, c) / n_methyl;

  EnvironmentEnsemble ensemble;
  const auto n_others = static_cast<int>(others.size());
  for (int config = 0; config < (1 << n_others); ++config) {
    for (int down = 0; down <= n_methyl; ++down) {
      std::vector<double> shift(n_carbons, 0.0);
      for (int i = 0; i < n_others; ++i) {
        const double m = ((config >> (n_others - 1 - i)) & 1) ? -0.5 : 0.5;
        for (int c = 0; c < n_carbons; ++c) shift[c] += m * hc_couplings_hz(others[i], c);
      }
      const double methyl_m = 0.5 * (n_methyl - 2 * down);
      for (int c = 0; c < n_carbons; ++c) shift[c] += methyl_m * methyl_mean[c];
      const int weight = binomial(n_methyl, down);
      ensemble.members.push_back({system.shifted(shift), weight});
      ensemble.total_weight += weight;
    }
  }
  return ensemble;
}

EnvironmentEnsemble single_member_ensemble(const SpinSystem& system) {
  return {{{system, 1}}, 1};
}

EnvironmentEnsemble collapse_ensemble(const EnvironmentEnsemble& ensemble) {
  EnvironmentEnsemble out;
  out.total_weight = ensemble.total_weight;
  for (const auto& member : ensemble.members) {
    auto it = std::find_if(out.members.begin(), out.members.end(),
                           [&](const EnsembleMember& m) { return m.system == member.system; });
    if (it == out.members.end()) {
      out.members.push_back(member);
    } else {
      it->weight += member.weight;
    }
  }
  return out;
}

}  // namespace homog
