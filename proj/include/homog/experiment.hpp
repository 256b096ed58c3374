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

// End-to-end eta sweeps of the homogeniser circuit, with gates realised
// either ideally or by simulated GRAPE pulses, and the two readout
// normalisation schemes.

#include "homog/grape.hpp"
#include "homog/homogeniser.hpp"
#include "homog/spin_system.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace homog {

enum class SweepMode { kIdealGates, kGrapePulses };
enum class NormalisationScheme { kNone, kSchemeA, kSchemeB };

SweepMode parse_sweep_mode(std::string_view name);  // "ideal" | "grape"
std::string to_string(SweepMode mode);
NormalisationScheme parse_normalisation(std::string_view name);  // "none" | "A" | "B"
std::string to_string(NormalisationScheme scheme);

struct SweepRecord {
  double eta_deg = 0.0;
  int repeat_index = 0;
  MarginalSet f_raw;
  MarginalSet f_normalised;
  NormalisationScheme normalisation = NormalisationScheme::kNone;
  SweepMode mode = SweepMode::kIdealGates;
};

/// Inclusive grid start, start + step, ... <= stop (degrees).
std::vector<double> eta_grid_degrees(double start, double stop, double step);

/// One hardware gate of the circuit: a partial swap or one SWAP layer, as a
/// four-spin unitary.
struct CircuitGate {
  std::string name;
  double eta_deg = 0.0;
  ComplexMatrix target;
};

/// Gate sequence of the schedule at one coupling. Simultaneous SWAPs share one
/// gate; the eta = 0 partial swap is omitted.
std::vector<CircuitGate> build_pulsed_circuit(const InteractionSchedule& schedule, double eta_deg);

/// Supplies the unitary each member of a (possibly trivial) ensemble applies for a gate.
class GateRealiser {
 public:
  virtual ~GateRealiser() = default;
  virtual SweepMode mode() const = 0;
  virtual std::size_t member_count() const = 0;
  virtual double member_weight(std::size_t member) const = 0;
  /// Throws ConfigurationError when `gate` has no implementation.
  virtual void check(const CircuitGate& gate) const = 0;
  virtual const ComplexMatrix& realise(const CircuitGate& gate, std::size_t member) const = 0;
};

class IdealGates final : public GateRealiser {
 public:
  SweepMode mode() const override { return SweepMode::kIdealGates; }
  std::size_t member_count() const override { return 1; }
  double member_weight(std::size_t) const override { return 1.0; }
  void check(const CircuitGate&) const override {}
  const ComplexMatrix& realise(const CircuitGate& gate, std::size_t) const override {
    return gate.target;
  }
};

using PulseLibrary = std::map<std::string, PulseSpec>;

/// Pulse propagators for every (ensemble member, RF scale), precomputed once.
class PulsedGates final : public GateRealiser {
 public:
  PulsedGates(const PulseLibrary& library, const EnvironmentEnsemble& ensemble,
              CouplingModel model, std::vector<double> rf_scales = {1.0});

  SweepMode mode() const override { return SweepMode::kGrapePulses; }
  std::size_t member_count() const override { return weights_.size(); }
  double member_weight(std::size_t member) const override { return weights_.at(member); }
  void check(const CircuitGate& gate) const override;
  const ComplexMatrix& realise(const CircuitGate& gate, std::size_t member) const override;

 private:
  std::map<std::string, std::vector<ComplexMatrix>> unitaries_;
  std::vector<double> weights_;
};

/// Gate names the sweep needs over `grid_deg`.
std::vector<std::string> required_gates(const InteractionSchedule& schedule,
                                        const std::vector<double>& grid_deg);

/// Reads `<dir>/<gate>.pulse` for every required gate. A missing file raises
/// ConfigurationError naming the gate and its eta.
PulseLibrary load_pulse_library(const std::filesystem::path& dir,
                                const InteractionSchedule& schedule,
                                const std::vector<double>& grid_deg);

/// Simulates every (eta, repeat); records come back sorted by (eta, repeat)
/// with f_normalised = f_raw and scheme none.
std::vector<SweepRecord> run_sweep(const GateRealiser& realiser,
                                   const std::vector<double>& grid_deg, int repeats,
                                   const InteractionSchedule& schedule = standard_schedule());

/// Divide every f by the mean of f_A and f_B in the eta = 0 records.
std::vector<SweepRecord> normalise_scheme_A(std::vector<SweepRecord> records);

/// Divide each spin by its own reference: eta = 0 for A and B, eta = 90 for C and D.
std::vector<SweepRecord> normalise_scheme_B(std::vector<SweepRecord> records);

std::vector<SweepRecord> normalise(std::vector<SweepRecord> records, NormalisationScheme scheme);

}  // namespace homog
