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

#include "doctest.h"
#include "oracles.hpp"

#include "homog/errors.hpp"
#include "homog/experiment.hpp"
#include "homog/gates.hpp"
#include "homog/pulse_io.hpp"
#include "homog/records_io.hpp"
#include "homog/spin_system.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace homog;
namespace fs = std::filesystem;

namespace {

std::vector<double> full_grid() { return eta_grid_degrees(0.0, 90.0, 10.0); }

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("homog_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Each member applies the ideal gate preceded by a collective z rotation.
// Partial swaps and SWAPs conserve total Iz, so marginals are unchanged even
// though every gate has fidelity below one.
class ZErrorGates final : public GateRealiser {
 public:
  explicit ZErrorGates(std::vector<double> angles) : angles_(std::move(angles)) {
    const RealVector iz = collective_iz_diagonal(kChainLength);
    for (double a : angles_) {
      ComplexVector d(iz.size());
      for (Eigen::Index k = 0; k < iz.size(); ++k) d(k) = std::exp(Complex(0, -a * iz(k)));
      rotations_.push_back(d);
    }
  }
  SweepMode mode() const override { return SweepMode::kGrapePulses; }
  std::size_t member_count() const override { return angles_.size(); }
  double member_weight(std::size_t m) const override { return 1.0 + static_cast<double>(m); }
  void check(const CircuitGate&) const override {}
  const ComplexMatrix& realise(const CircuitGate& gate, std::size_t m) const override {
    thread_local ComplexMatrix out;
    out = gate.target * rotations_[m].asDiagonal();
    return out;
  }
  double min_fidelity(const CircuitGate& gate) const {
    double worst = 1.0;
    for (std::size_t m = 0; m < angles_.size(); ++m)
      worst = std::min(worst, gate_fidelity(realise(gate, m), gate.target));
    return worst;
  }

 private:
  std::vector<double> angles_;
  std::vector<ComplexVector> rotations_;
};

}  // namespace

TEST_CASE("eta grids are inclusive") {
  CHECK(full_grid().size() == 10);
  CHECK(full_grid().back() == 90.0);
  CHECK(eta_grid_degrees(0.0, 0.0, 1.0) == std::vector<double>{0.0});
  CHECK(eta_grid_degrees(0.0, 1.0, 0.25).size() == 5);
  CHECK_THROWS_AS(eta_grid_degrees(10.0, 0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(eta_grid_degrees(0.0, 10.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(eta_grid_degrees(0.0, 10.0, -1.0), ArgumentError);
}

TEST_CASE("mode and scheme names") {
  CHECK(parse_sweep_mode("ideal") == SweepMode::kIdealGates);
  CHECK(parse_sweep_mode("grape") == SweepMode::kGrapePulses);
  CHECK_THROWS_AS(parse_sweep_mode("noisy"), ArgumentError);
  CHECK(parse_normalisation("A") == NormalisationScheme::kSchemeA);
  CHECK(to_string(NormalisationScheme::kSchemeB) == "B");
  CHECK_THROWS_AS(parse_normalisation("C"), ArgumentError);
}

TEST_CASE("pulsed circuit follows the schedule") {
  const auto& schedule = standard_schedule();
  const auto gates30 = build_pulsed_circuit(schedule, 30.0);
  int partials = 0;
  ComplexMatrix u = identity(16);
  for (const auto& g : gates30) {
    if (g.name.rfind("pswap_", 0) == 0) {
      ++partials;
      CHECK(g.name == "pswap_30");
    }
    u = g.target * u;
  }
  CHECK(partials == 4);
  CHECK(oracle::max_abs_diff(u, circuit_unitary(degrees_to_radians(30.0), schedule).matrix()) < 1e-14);
  // The zero-coupling partial swaps are omitted rather than pulsed.
  for (const auto& g : build_pulsed_circuit(schedule, 0.0)) CHECK(g.name.rfind("pswap_", 0) != 0);
  // Named swap gates match the built-in gate table.
  for (const auto& g : gates30)
    CHECK(oracle::max_abs_diff(g.target, target_gate(g.name, crotonic_default()).matrix()) < 1e-14);
}

TEST_CASE("ideal sweep reproduces the closed forms") {
  const auto records = run_sweep(IdealGates{}, full_grid(), 2);
  REQUIRE(records.size() == 20);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.repeat_index == static_cast<int>(i % 2));
    CHECK(r.eta_deg == full_grid()[i / 2]);
    const MarginalSet ref = closed_form_marginals(degrees_to_radians(r.eta_deg));
    for (int q = 0; q < 4; ++q) CHECK(std::abs(r.f_raw.f[q] - ref.f[q]) <= 1e-10);
    CHECK(r.f_normalised.f == r.f_raw.f);
    CHECK(r.mode == SweepMode::kIdealGates);
  }
  CHECK(records[0].f_raw.f == std::array<double, 4>{1.0, 1.0, 0.0, 0.0});
  CHECK(records[0].f_raw.f == records[1].f_raw.f);
  CHECK_THROWS_AS(run_sweep(IdealGates{}, {}, 1), ArgumentError);
  CHECK_THROWS_AS(run_sweep(IdealGates{}, full_grid(), 0), ArgumentError);
}

TEST_CASE("z-error pulses stay within the fidelity deviation bound") {
  const ZErrorGates gates({0.0, 0.05, -0.11, 0.3});
  const auto ideal = run_sweep(IdealGates{}, full_grid(), 1);
  const auto pulsed = run_sweep(gates, full_grid(), 1);
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    double phi_min = 1.0;
    for (const auto& g : build_pulsed_circuit(standard_schedule(), ideal[i].eta_deg))
      phi_min = std::min(phi_min, gates.min_fidelity(g));
    CHECK(phi_min < 1.0);
    for (int q = 0; q < 4; ++q)
      CHECK(std::abs(pulsed[i].f_raw.f[q] - ideal[i].f_raw.f[q]) <= 2.0 * (1.0 - phi_min) + 1e-12);
    CHECK(pulsed[i].mode == SweepMode::kGrapePulses);
  }
}

TEST_CASE("pulsed gates average members with multiplicity weights") {
  const auto& schedule = standard_schedule();
  const std::vector<double> grid{0.0, 30.0, 90.0};
  PulseLibrary library;
  std::uint64_t seed = 100;
  for (const auto& name : required_gates(schedule, grid)) {
    PulseSpec p;
    p.phases = random_phases(6, seed++);
    library.emplace(name, p);
  }
  Eigen::MatrixXd hc = Eigen::MatrixXd::Zero(1, 4);
  hc(0, 1) = 150.0;
  const SpinSystem s = crotonic_default();
  const EnvironmentEnsemble ensemble = environment_ensemble(s, hc, {});
  const PulsedGates gates(library, ensemble, CouplingModel::kIsotropic, {0.9, 1.1});
  CHECK(gates.member_count() == 4);
  const auto records = run_sweep(gates, grid, 1, schedule);

  // Independent evaluation member by member.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::array<double, 4> expected{};
    double total = 0.0;
    for (const auto& member : ensemble.members) {
      const ComplexMatrix h0 = build_internal_hamiltonian(member.system, CouplingModel::kIsotropic);
      for (double scale : {0.9, 1.1}) {
        ComplexMatrix u = identity(16);
        for (const auto& g : build_pulsed_circuit(schedule, grid[i]))
          u = pulse_propagator(h0, library.at(g.name), scale).matrix() * u;
        const MarginalSet m = marginals(apply(UnitaryMatrix::trusted(u), homogeniser_initial_state()));
        for (int q = 0; q < 4; ++q) expected[q] += 0.5 * member.weight * m.f[q];
        total += 0.5 * member.weight;
      }
    }
    for (int q = 0; q < 4; ++q) {
      CHECK(std::abs(records[i].f_raw.f[q] - expected[q] / total) < 1e-12);
      CHECK(std::abs(records[i].f_raw.f[q]) <= 1.0 + 1e-9);
    }
  }

  PulseLibrary incomplete = library;
  incomplete.erase("pswap_30");
  const PulsedGates missing(incomplete, single_member_ensemble(s), CouplingModel::kIsotropic);
  try {
    (void)run_sweep(missing, grid, 1, schedule);
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("pswap_30") != std::string::npos);
    CHECK(std::string(e.what()).find("30") != std::string::npos);
  }
}

TEST_CASE("pulse library loading") {
  const fs::path dir = scratch_dir("library");
  const std::vector<double> grid{0.0, 45.0};
  const auto names = required_gates(standard_schedule(), grid);
  for (std::size_t k = 0; k < names.size(); ++k) {
    PulseFile f;
    f.pulse.phases = random_phases(3, k);
    f.target = names[k];
    if (names[k] != "pswap_45") write_pulse_file(dir / (names[k] + ".pulse"), f);
  }
  try {
    (void)load_pulse_library(dir, standard_schedule(), grid);
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    const std::string what = e.what();
    CHECK(what.find("pswap_45") != std::string::npos);
    CHECK(what.find("eta = 45") != std::string::npos);
  }
  PulseFile last;
  last.pulse.phases = {0.1, 0.2};
  last.target = "pswap_45";
  write_pulse_file(dir / "pswap_45.pulse", last);
  const PulseLibrary lib = load_pulse_library(dir, standard_schedule(), grid);
  CHECK(lib.size() == names.size());
  CHECK(lib.at("pswap_45") == last.pulse);

  // A file whose target disagrees with its name is rejected.
  last.target = "swap_BC";
  write_pulse_file(dir / "pswap_45.pulse", last);
  CHECK_THROWS_AS(load_pulse_library(dir, standard_schedule(), grid), ConfigurationError);
  fs::remove_all(dir);
}

TEST_CASE("normalisation is the identity on ideal data") {
  const auto ideal = run_sweep(IdealGates{}, full_grid(), 1);
  for (auto scheme : {NormalisationScheme::kSchemeA, NormalisationScheme::kSchemeB}) {
    const auto out = normalise(ideal, scheme);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i].normalisation == scheme);
      for (int q = 0; q < 4; ++q) CHECK(std::abs(out[i].f_normalised.f[q] - ideal[i].f_raw.f[q]) <= 1e-12);
    }
  }
  const auto a = normalise_scheme_A(ideal);
  CHECK(std::abs(a[3].f_normalised.c() - 0.4375) < 1e-12);
}

TEST_CASE("scheme A cancels a common loss") {
  auto records = run_sweep(IdealGates{}, full_grid(), 1);
  for (auto& r : records)
    for (double& f : r.f_raw.f) f *= 0.8;
  const auto out = normalise_scheme_A(records);
  for (const auto& r : out) {
    const MarginalSet ref = closed_form_marginals(degrees_to_radians(r.eta_deg));
    for (int q = 0; q < 4; ++q) CHECK(std::abs(r.f_normalised.f[q] - ref.f[q]) <= 1e-10);
  }
}

TEST_CASE("scheme B removes per-spin losses") {
  const std::array<double, 4> loss{0.9, 0.8, 0.7, 0.6};
  auto records = run_sweep(IdealGates{}, full_grid(), 3);
  for (auto& r : records)
    for (int q = 0; q < 4; ++q) r.f_raw.f[q] *= loss[q];
  const auto out = normalise_scheme_B(records);
  for (const auto& r : out) {
    const MarginalSet ref = closed_form_marginals(degrees_to_radians(r.eta_deg));
    for (int q = 0; q < 4; ++q) CHECK(std::abs(r.f_normalised.f[q] - ref.f[q]) <= 1e-10);
  }
  // Scheme A cannot undo unequal losses.
  const auto a = normalise_scheme_A(records);
  double worst = 0.0;
  for (const auto& r : a) {
    const MarginalSet ref = closed_form_marginals(degrees_to_radians(r.eta_deg));
    for (int q = 0; q < 4; ++q) worst = std::max(worst, std::abs(r.f_normalised.f[q] - ref.f[q]));
  }
  CHECK(worst > 0.01);
}

TEST_CASE("normalisation errors") {
  const auto no_zero = run_sweep(IdealGates{}, {10.0, 90.0}, 1);
  CHECK_THROWS_AS(normalise_scheme_A(no_zero), NormalisationError);
  const auto no_ninety = run_sweep(IdealGates{}, {0.0, 30.0}, 1);
  CHECK_THROWS_AS(normalise_scheme_B(no_ninety), NormalisationError);
  auto zeroed = run_sweep(IdealGates{}, {0.0, 90.0}, 1);
  zeroed[1].f_raw.f[kSpinC] = 0.0;
  CHECK_THROWS_AS(normalise_scheme_B(zeroed), NormalisationError);
  for (auto& r : zeroed) r.f_raw.f[kSpinA] = r.f_raw.f[kSpinB] = 0.0;
  CHECK_THROWS_AS(normalise_scheme_A(zeroed), NormalisationError);
}

TEST_CASE("records serialise deterministically and round-trip") {
  auto records = normalise(run_sweep(IdealGates{}, full_grid(), 1), NormalisationScheme::kSchemeB);
  records[4].f_raw.f[2] = 0.1 + 0.2;  // a value that needs all 17 digits
  const std::string text = format_records(records);
  CHECK(text == format_records(records));
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 11);
  CHECK(text.rfind(records_header() + "\n", 0) == 0);
  CHECK(text.find("0,0,1,1,0,0,1,1,0,0,1,1,0,0,0,0,1,1,2,2,ideal,B") != std::string::npos);

  const auto back = parse_records(text);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].eta_deg == records[i].eta_deg);
    CHECK(back[i].repeat_index == records[i].repeat_index);
    CHECK(back[i].f_raw.f == records[i].f_raw.f);
    CHECK(back[i].f_normalised.f == records[i].f_normalised.f);
    CHECK(back[i].mode == records[i].mode);
    CHECK(back[i].normalisation == records[i].normalisation);
  }
  CHECK_THROWS_AS(format_records({}), ArgumentError);
  CHECK_THROWS(parse_records("eta,wrong\n"));

  const fs::path dir = scratch_dir("records");
  write_records(dir / "sweep.csv", records);
  CHECK(read_records(dir / "sweep.csv").size() == records.size());
  CHECK_THROWS_AS(write_records(dir / "missing" / "sweep.csv", records), ConfigurationError);
  fs::remove_all(dir);
}

TEST_CASE("pulse files round-trip bit-exactly") {
  PulseFile f;
  f.pulse.phases = random_phases(50, 77);
  f.pulse.segment_duration = 1e-5;
  f.pulse.amplitude = 2.0 * std::numbers::pi * 1.0e4;
  f.target = "swap_BC";
  f.fidelity = 0.987654321012345;
  f.converged = false;
  CHECK(parse_pulse_file(format_pulse_file(f)) == f);
  PulseFile bare;
  bare.pulse.phases = {0.0};
  bare.target = "identity";
  CHECK(parse_pulse_file(format_pulse_file(bare)) == bare);
  CHECK(format_double(0.1) == "0.10000000000000001");

  std::string text = format_pulse_file(f);
  CHECK_THROWS_AS(parse_pulse_file(text.substr(0, text.size() / 2)), ParseError);
  CHECK_THROWS_AS(parse_pulse_file("format 2\n"), ParseError);
  const std::string bad_count = std::string("format 1\nsegments 3\nsegment_duration_s 1e-5\n") +
                                "amplitude_rad_s 1\nphases\n0.1\n0.2\n";
  CHECK_THROWS_AS(parse_pulse_file(bad_count), ParseError);
  CHECK_THROWS_AS(read_pulse_file("/nonexistent/x.pulse"), ConfigurationError);
}

TEST_CASE("gate table") {
  const SpinSystem s = crotonic_default();
  CHECK(target_gate("identity", s).matrix() == identity(16));
  CHECK(oracle::max_abs_diff(target_gate("swap_BC", s).matrix(),
                             oracle::embed_by_indices(swap_matrix(), 1, 2, 4)) == 0.0);
  const ComplexMatrix ps = partial_swap_unitary(degrees_to_radians(30.0)).matrix();
  CHECK(oracle::max_abs_diff(target_gate("pswap_30", s).matrix(), oracle::embed_by_indices(ps, 1, 2, 4)) <
        1e-15);
  const ComplexMatrix two_swaps = oracle::embed_by_indices(swap_matrix(), 0, 1, 4) *
                                  oracle::embed_by_indices(swap_matrix(), 2, 3, 4);
  CHECK(oracle::max_abs_diff(target_gate("swap_AB_CD", s).matrix(), two_swaps) == 0.0);
  const SpinSystem one({"P"}, {0.0}, Eigen::MatrixXd::Zero(1, 1));
  CHECK(oracle::max_abs_diff(target_gate("x180", one).matrix(), Complex(0, -1) * pauli_x()) < 1e-15);
  CHECK(partial_swap_gate_name(12.5) == "pswap_12.5");
  CHECK(format_degrees(30.0) == "30");
  CHECK_THROWS_AS(target_gate("cnot", s), ArgumentError);
  CHECK_THROWS_AS(target_gate("swap_AE", s), ArgumentError);
  CHECK_THROWS_AS(target_gate("swap_AA", s), ArgumentError);
  CHECK_THROWS_AS(target_gate("pswap_30", one), ArgumentError);
  CHECK_THROWS_AS(target_gate("pswap_x", s), ArgumentError);
}
