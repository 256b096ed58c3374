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

// Partial-swap homogeniser: the four-qubit linear-chain circuit (two pure
// system qubits A, B and two maximally mixed reservoir qubits C, D) and the
// general one-system / N-reservoir chain.

#include "homog/linalg.hpp"

#include <array>
#include <numbers>
#include <string>
#include <vector>

namespace homog {

inline double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
inline double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

/// cos(eta) 1 + i sin(eta) SWAP
UnitaryMatrix partial_swap_unitary(double eta);

// Logical qubits of the four-qubit homogeniser (also the NMR spin labels).
enum Spin : int { kSpinA = 0, kSpinB = 1, kSpinC = 2, kSpinD = 3 };
inline constexpr int kChainLength = 4;

std::string spin_label(int spin);

inline bool is_system_qubit(int q) { return q == kSpinA || q == kSpinB; }
inline bool is_reservoir_qubit(int q) { return q == kSpinC || q == kSpinD; }

struct Contact {
  int system;
  int reservoir;
  friend bool operator==(const Contact&, const Contact&) = default;
};

enum class StepKind { kPartialSwap, kSwap };

/// One two-qubit gate on chain positions. Steps that share a `layer` run
/// simultaneously (e.g. SWAP(A,B) and SWAP(C,D) drawn above one another).
struct ScheduleStep {
  StepKind kind;
  int position_a;
  int position_b;
  int layer;
};

class InteractionSchedule {
 public:
  /// Throws ArgumentError unless every system qubit meets every reservoir
  /// qubit exactly once through a partial swap, and (when required) every
  /// step acts on adjacent positions.
  explicit InteractionSchedule(std::vector<ScheduleStep> steps, bool adjacency_required = true);

  const std::vector<ScheduleStep>& steps() const { return steps_; }
  bool adjacency_required() const { return adjacency_required_; }

  /// Logical contacts in the order the partial swaps realise them.
  const std::vector<Contact>& contacts() const { return contacts_; }

  /// Logical qubit held at each position after the last step.
  const std::array<int, kChainLength>& final_layout() const { return final_layout_; }

  int partial_swap_count() const;
  int layer_count() const;

 private:
  std::vector<ScheduleStep> steps_;
  bool adjacency_required_;
  std::vector<Contact> contacts_;
  std::array<int, kChainLength> final_layout_{};
};

/// Contact order first guessed for the linear-chain layout; it does not reproduce
/// the closed-form marginals and is kept to exercise validation.
inline const std::vector<Contact> kInitialGuessContactOrder{
    {kSpinB, kSpinC}, {kSpinB, kSpinD}, {kSpinA, kSpinD}, {kSpinA, kSpinC}};

/// Contact order used by standard_schedule().
inline const std::vector<Contact> kStandardContactOrder{
    {kSpinB, kSpinC}, {kSpinB, kSpinD}, {kSpinA, kSpinC}, {kSpinA, kSpinD}};

/// Routes `order` on the chain: partial swaps on the middle pair, the fewest
/// SWAP layers between contacts, and final SWAPs restoring A-B-C-D.
InteractionSchedule route_contacts(const std::vector<Contact>& order);

/// Canonical validated schedule; throws ScheduleValidationError on mismatch.
const InteractionSchedule& standard_schedule();

/// Angles (radians) at which schedules are checked against the closed forms.
std::vector<double> validation_angles();

/// Throws ScheduleValidationError if simulated marginals deviate from the
/// closed forms by more than 1e-10 at any validation angle.
void validate_schedule(const InteractionSchedule& schedule);

/// Every contact order (each system qubit meets each reservoir qubit once)
/// whose routed schedule passes validate_schedule.
std::vector<std::vector<Contact>> matching_contact_orders();

struct MarginalSet {
  std::array<Polarisation, kChainLength> f{};

  Polarisation a() const { return f[kSpinA]; }
  Polarisation b() const { return f[kSpinB]; }
  Polarisation c() const { return f[kSpinC]; }
  Polarisation d() const { return f[kSpinD]; }
};

/// |00><00| (x) 1/2 (x) 1/2 over A, B, C, D.
DensityMatrix homogeniser_initial_state();

/// Single-qubit polarisations of a four-qubit state.
MarginalSet marginals(const DensityMatrix& rho);

/// Full 16x16 circuit unitary at coupling `eta`.
UnitaryMatrix circuit_unitary(double eta, const InteractionSchedule& schedule);

/// Output state of the circuit, relabelled so qubit k is logical qubit k.
DensityMatrix evolve_homogeniser(double eta, const InteractionSchedule& schedule);

MarginalSet simulate_homogeniser(double eta, const InteractionSchedule& schedule);

/// f_B = cos^4, f_A = 4c^2 - 9c^4 + 8c^6 - 2c^8, f_C = 1 - f_B, f_D = 1 - f_A.
MarginalSet closed_form_marginals(double eta);

inline constexpr int kMaxChainReservoirs = 9;

struct HomogenisationStep {
  int step = 0;
  Polarisation system_f = 0.0;
  /// Trace distance of the system marginal from the reservoir state.
  double system_distance = 0.0;
  /// Trace distance of each reservoir qubit (1..n) from its initial state.
  std::vector<double> reservoir_distances;
};

struct HomogenisationTrace {
  double eta = 0.0;
  Polarisation reservoir_f = 0.0;
  /// steps[0] is the initial state; steps[k] follows the k-th partial swap.
  std::vector<HomogenisationStep> steps;

  double max_final_reservoir_distance() const;
};

/// Exact density-matrix evolution of one system qubit through `n_reservoir`
/// partial swaps with fresh reservoir qubits of polarisation `reservoir_f`.
/// Throws SizeError for n_reservoir > kMaxChainReservoirs.
HomogenisationTrace homogenize_chain(const DensityMatrix& system, Polarisation reservoir_f,
                                     int n_reservoir, double eta);

/// f <- f cos^2 eta + f_r sin^2 eta, applied n times; returns f after each step.
std::vector<Polarisation> marginal_map_iterate(Polarisation f_system, Polarisation f_reservoir,
                                               double eta, int n);

struct EntropyRow {
  double eta = 0.0;
  std::array<double, kChainLength> entropy{};
  double sum = 0.0;
  std::array<double, kChainLength> theory_entropy{};
  double theory_sum = 0.0;
};

/// Per-qubit entropies of the simulated circuit and of the closed forms.
/// Rows follow the order of `eta_grid`.
std::vector<EntropyRow> entropy_profile(const std::vector<double>& eta_grid);

}  // namespace homog
