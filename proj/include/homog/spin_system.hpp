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

// Liquid-state NMR spin systems: internal Hamiltonian, collective control
// operators, and the ensemble of effective carbon Hamiltonians produced by
// static proton eigenstates.

#include "homog/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace homog {

/// Resonance offsets and scalar couplings, all in Hz.
class SpinSystem {
 public:
  /// Throws ArgumentError on size mismatch, asymmetric couplings, non-zero
  /// diagonal or duplicate labels.
  SpinSystem(std::vector<std::string> labels, std::vector<double> frequencies_hz,
             Eigen::MatrixXd couplings_hz);

  int n_spins() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& frequencies_hz() const { return frequencies_hz_; }
  const Eigen::MatrixXd& couplings_hz() const { return couplings_hz_; }
  double coupling(int a, int b) const { return couplings_hz_(a, b); }

  /// Throws ArgumentError for an unknown label.
  int index_of(std::string_view label) const;

  /// Copy with each frequency moved by shifts_hz[k].
  SpinSystem shifted(const std::vector<double>& shifts_hz) const;

  friend bool operator==(const SpinSystem&, const SpinSystem&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> frequencies_hz_;
  Eigen::MatrixXd couplings_hz_;
};

/// The four 13C spins of crotonic acid, A-D.
SpinSystem crotonic_default();

enum class CouplingModel {
  kIsotropic,  // J (IxIx + IyIy + IzIz)
  kWeak,       // J IzIz
};

/// "isotropic" or "weak"; throws ArgumentError otherwise.
CouplingModel parse_coupling_model(std::string_view name);
std::string to_string(CouplingModel model);

/// sigma_axis / 2 on spin k of n (axis is 'x', 'y' or 'z').
ComplexMatrix spin_operator(int n_spins, int k, char axis);

/// H0 in rad/s: sum_k 2 pi nu_k Iz_k + sum_{k<l} 2 pi J_kl C_kl.
ComplexMatrix build_internal_hamiltonian(const SpinSystem& system, CouplingModel model);

struct ControlOperators {
  ComplexMatrix ix;
  ComplexMatrix iy;
  ComplexMatrix iz;
};

/// Collective spin operators summed over all spins.
ControlOperators control_operators(int n_spins);

/// Diagonal of the collective Iz.
RealVector collective_iz_diagonal(int n_spins);

struct EnsembleMember {
  SpinSystem system;
  int weight = 1;
};

struct EnvironmentEnsemble {
  std::vector<EnsembleMember> members;
  int total_weight = 0;
};

/// Effective carbon systems for every proton z-eigenstate configuration.
///
/// `hc_couplings_hz` has one row per proton and one column per spin of
/// `system`. Proton k in state m_k = +-1/2 shifts spin c by m_k * J_kc.
/// Protons listed in `methyl_group` are magnetically equivalent: their
/// configurations are merged by total methyl spin, using the mean methyl
/// coupling per carbon, with binomial multiplicities. Members are ordered by
/// the non-methyl configuration (proton up = bit 0, first proton most
/// significant), then by ascending number of methyl protons down.
EnvironmentEnsemble environment_ensemble(const SpinSystem& system,
                                         const Eigen::MatrixXd& hc_couplings_hz,
                                         const std::vector<int>& methyl_group);

/// Ensemble of one member with weight 1.
EnvironmentEnsemble single_member_ensemble(const SpinSystem& system);

/// Merges members with identical spin systems, summing their weights. Order
/// follows first appearance.
EnvironmentEnsemble collapse_ensemble(const EnvironmentEnsemble& ensemble);

}  // namespace homog
