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

#include "homog/experiment.hpp"

#include "homog/errors.hpp"
#include "homog/gates.hpp"
#include "homog/kernels.hpp"
#include "homog/pulse_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace homog {
namespace {

constexpr double kReferenceFloor = 1e-12;

std::vector<const SweepRecord*> records_at(const std::vector<SweepRecord>& records, double eta_deg) {
  std::vector<const SweepRecord*> out;
  for (const auto& r : records)
    if (r.eta_deg == eta_deg) out.push_back(&r);
  return out;
}

double mean_raw(const std::vector<const SweepRecord*>& refs, int spin) {
  double sum = 0.0;
  for (const auto* r : refs) sum += r->f_raw.f[spin];
  return sum / static_cast<double>(refs.size());
}

}  // namespace

SweepMode parse_sweep_mode(std::string_view name) {
  if (name == "ideal") return SweepMode::kIdealGates;
  if (name == "grape") return SweepMode::kGrapePulses;
  throw ArgumentError("unknown sweep mode '" + std::string(name) + "'");
}

std::string to_string(SweepMode mode) {
  return mode == SweepMode::kIdealGates ? "ideal" : "grape";
}

NormalisationScheme parse_normalisation(std::string_view name) {
  if (name == "none") return NormalisationScheme::kNone;
  if (name == "A") return NormalisationScheme::kSchemeA;
  if (name == "B") return NormalisationScheme::kSchemeB;
  throw ArgumentError("unknown normalisation scheme '" + std::string(name) + "'");
}

std::string to_string(NormalisationScheme scheme) {
  switch (scheme) {
    case NormalisationScheme::kNone:
      return "none";
    case NormalisationScheme::kSchemeA:
      return "A";
    case NormalisationScheme::kSchemeB:
      return "B";
  }
  return "none";
}

std::vector<double> eta_grid_degrees(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw ArgumentError("eta grid values must be finite");
  if (stop < start) throw ArgumentError("eta grid stop must not precede start");
  if (start == stop) return {start};
  if (!(step > 0.0)) throw ArgumentError("eta grid step must be positive");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw ArgumentError("eta grid is too large");
  std::vector<double> grid;
  for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

std::vector<CircuitGate> build_pulsed_circuit(const InteractionSchedule& schedule, double eta_deg) {
  std::vector<CircuitGate> gates;
  const auto& steps = schedule.steps();
  std::size_t i = 0;
  while (i < steps.size()) {
    const int layer = steps[i].layer;
    std::vector<ScheduleStep> group;
    for (; i < steps.size() && steps[i].layer == layer; ++i) group.push_back(steps[i]);

    const bool partial = std::any_of(group.begin(), group.end(), [](const ScheduleStep& s) {
      return s.kind == StepKind::kPartialSwap;
    });
    if (partial) {
      if (group.size() != 1) throw ArgumentError("partial swap must occupy its own layer");
      if (eta_deg == 0.0) continue;
      const ComplexMatrix ps = partial_swap_unitary(degrees_to_radians(eta_deg)).matrix();
      gates.push_back({partial_swap_gate_name(eta_deg), eta_deg,
                       kernels::embed_two_qubit(ps, group[0].position_a, group[0].position_b,
                                                kChainLength)});
      continue;
    }
    std::sort(group.begin(), group.end(), [](const ScheduleStep& a, const ScheduleStep& b) {
      return std::min(a.position_a, a.position_b) < std::min(b.position_a, b.position_b);
    });
    std::string name = "swap";
    ComplexMatrix u = identity(Eigen::Index{1} << kChainLength);
    for (const auto& s : group) {
      const int lo = std::min(s.position_a, s.position_b);
      const int hi = std::max(s.position_a, s.position_b);
      name += "_" + spin_label(lo) + spin_label(hi);
      u = kernels::embed_two_qubit(swap_matrix(), lo, hi, kChainLength) * u;
    }
    gates.push_back({name, eta_deg, std::move(u)});
  }
  return gates;
}

PulsedGates::PulsedGates(const PulseLibrary& library, const EnvironmentEnsemble& ensemble,
                         CouplingModel model, std::vector<double> rf_scales) {
  if (rf_scales.empty()) throw ArgumentError("rf_scales must not be empty");
  if (ensemble.members.empty()) throw ArgumentError("ensemble must not be empty");
  std::vector<ComplexMatrix> hamiltonians;
  std::vector<double> scales;
  for (const auto& member : ensemble.members) {
    const ComplexMatrix h0 = build_internal_hamiltonian(member.system, model);
    if (h0.rows() != (Eigen::Index{1} << kChainLength))
      throw ArgumentError("pulsed circuit needs a four-spin system");
    for (double s : rf_scales) {
      hamiltonians.push_back(h0);
      scales.push_back(s);
      weights_.push_back(static_cast<double>(member.weight) / static_cast<double>(rf_scales.size()));
    }
  }
  for (const auto& [name, pulse] : library) {
    pulse.validate();
    auto& out = unitaries_[name];
    out.resize(hamiltonians.size());
    const auto count = static_cast<std::int64_t>(hamiltonians.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t m = 0; m < count; ++m) {
      const auto k = static_cast<std::size_t>(m);
      const PhaseOnlyPropagator prop(hamiltonians[k], pulse.amplitude, scales[k],
                                     pulse.segment_duration);
      out[k] = prop.propagate(pulse.phases);
    }
  }
}

void PulsedGates::check(const CircuitGate& gate) const {
  if (!unitaries_.count(gate.name))
    throw ConfigurationError("no pulse for gate '" + gate.name + "' (eta = " +
                             format_degrees(gate.eta_deg) + " deg)");
}

const ComplexMatrix& PulsedGates::realise(const CircuitGate& gate, std::size_t member) const {
  check(gate);
  return unitaries_.at(gate.name).at(member);
}

std::vector<std::string> required_gates(const InteractionSchedule& schedule,
                                        const std::vector<double>& grid_deg) {
  std::vector<std::string> names;
  for (double eta : grid_deg)
    for (const auto& g : build_pulsed_circuit(schedule, eta))
      if (std::find(names.begin(), names.end(), g.name) == names.end()) names.push_back(g.name);
  return names;
}

PulseLibrary load_pulse_library(const std::filesystem::path& dir,
                                const InteractionSchedule& schedule,
                                const std::vector<double>& grid_deg) {
  PulseLibrary library;
  for (double eta : grid_deg) {
    for (const auto& gate : build_pulsed_circuit(schedule, eta)) {
      if (library.count(gate.name)) continue;
      const auto path = dir / (gate.name + ".pulse");
      if (!std::filesystem::exists(path))
        throw ConfigurationError("missing pulse file for gate '" + gate.name + "' (eta = " +
                                 format_degrees(eta) + " deg): " + path.string());
      const PulseFile file = read_pulse_file(path);
      if (!file.target.empty() && file.target != gate.name)
        throw ConfigurationError("pulse file " + path.string() + " targets '" + file.target +
                                 "', expected '" + gate.name + "'");
      library.emplace(gate.name, file.pulse);
    }
  }
  return library;
}

std::vector<SweepRecord> run_sweep(const GateRealiser& realiser,
                                   const std::vector<double>& grid_deg, int repeats,
                                   const InteractionSchedule& schedule) {
  if (grid_deg.empty()) throw ArgumentError("eta grid is empty");
  if (repeats < 1) throw ArgumentError("repeats must be at least 1");
  std::vector<std::vector<CircuitGate>> circuits;
  for (double eta : grid_deg) {
    circuits.push_back(build_pulsed_circuit(schedule, eta));
    for (const auto& g : circuits.back()) realiser.check(g);
  }

  const ComplexMatrix rho0 = homogeniser_initial_state().matrix();
  const Eigen::Index dim = rho0.rows();
  std::vector<MarginalSet> results(grid_deg.size());
  const auto count = static_cast<std::int64_t>(grid_deg.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& gates = circuits[static_cast<std::size_t>(i)];
    MarginalSet avg;
    double total = 0.0;
    for (std::size_t m = 0; m < realiser.member_count(); ++m) {
      ComplexMatrix u = identity(dim);
      for (const auto& g : gates) u = realiser.realise(g, m) * u;
      const MarginalSet f = marginals(DensityMatrix::trusted(u * rho0 * u.adjoint()));
      const double w = realiser.member_weight(m);
      for (int q = 0; q < kChainLength; ++q) avg.f[q] += w * f.f[q];
      total += w;
    }
    for (double& v : avg.f) v /= total;
    results[static_cast<std::size_t>(i)] = avg;
  }

  std::vector<SweepRecord> records;
  for (std::size_t i = 0; i < grid_deg.size(); ++i) {
    for (int r = 0; r < repeats; ++r) {
      SweepRecord rec;
      rec.eta_deg = grid_deg[i];
      rec.repeat_index = r;
      rec.f_raw = results[i];
      rec.f_normalised = results[i];
      rec.mode = realiser.mode();
      records.push_back(rec);
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.eta_deg != b.eta_deg ? a.eta_deg < b.eta_deg : a.repeat_index < b.repeat_index;
  });
  return records;
}

std::vector<SweepRecord> normalise_scheme_A(std::vector<SweepRecord> records) {
  const auto refs = records_at(records, 0.0);
  if (refs.empty()) throw NormalisationError("scheme A needs eta = 0 reference records");
  const double ref = 0.5 * (mean_raw(refs, kSpinA) + mean_raw(refs, kSpinB));
  if (std::abs(ref) < kReferenceFloor) throw NormalisationError("scheme A reference intensity is zero");
  for (auto& r : records) {
    for (int q = 0; q < kChainLength; ++q) r.f_normalised.f[q] = r.f_raw.f[q] / ref;
    r.normalisation = NormalisationScheme::kSchemeA;
  }
  return records;
}

std::vector<SweepRecord> normalise_scheme_B(std::vector<SweepRecord> records) {
  const auto start = records_at(records, 0.0);
  const auto end = records_at(records, 90.0);
  if (start.empty()) throw NormalisationError("scheme B needs eta = 0 records for spins A and B");
  if (end.empty()) throw NormalisationError("scheme B needs eta = 90 records for spins C and D");
  const std::array<double, kChainLength> ref{mean_raw(start, kSpinA), mean_raw(start, kSpinB),
                                             mean_raw(end, kSpinC), mean_raw(end, kSpinD)};
  for (int q = 0; q < kChainLength; ++q)
    if (std::abs(ref[q]) < kReferenceFloor)
      throw NormalisationError("scheme B reference for spin " + spin_label(q) + " is zero");
  for (auto& r : records) {
    for (int q = 0; q < kChainLength; ++q) r.f_normalised.f[q] = r.f_raw.f[q] / ref[q];
    r.normalisation = NormalisationScheme::kSchemeB;
  }
  return records;
}

std::vector<SweepRecord> normalise(std::vector<SweepRecord> records, NormalisationScheme scheme) {
  switch (scheme) {
    case NormalisationScheme::kSchemeA:
      return normalise_scheme_A(std::move(records));
    case NormalisationScheme::kSchemeB:
      return normalise_scheme_B(std::move(records));
    case NormalisationScheme::kNone:
      break;
  }
  for (auto& r : records) {
    r.f_normalised = r.f_raw;
    r.normalisation = NormalisationScheme::kNone;
  }
  return records;
}

}  // namespace homog
