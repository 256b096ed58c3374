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
#include "homog/gates.hpp"
#include "homog/grape.hpp"
#include "homog/homogeniser.hpp"
#include "homog/kernels.hpp"
#include "homog/optimizer.hpp"
#include "homog/parallel.hpp"

#include <cmath>
#include <numbers>

using namespace homog;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmega = 2.0 * kPi * 1.0e4;

SpinSystem random_system(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> freq(-12000.0, 12000.0), j(-80.0, 80.0);
  std::vector<std::string> labels;
  std::vector<double> freqs;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    labels.push_back(spin_label(k));
    freqs.push_back(freq(rng));
    for (int l = 0; l < k; ++l) c(k, l) = c(l, k) = j(rng);
  }
  return SpinSystem(labels, freqs, c);
}

// Segment generator exponentiated directly by the Taylor oracle.
ComplexMatrix direct_segment(const ComplexMatrix& h0, int n, double omega, double phase, double dt) {
  const ControlOperators ops = control_operators(n);
  const ComplexMatrix h = h0 + omega * (std::cos(phase) * ops.ix + std::sin(phase) * ops.iy);
  return oracle::taylor_expm(Complex(0, -dt) * h);
}

PulseSpec make_pulse(int n, std::uint64_t seed, double dt = 10e-6, double omega = kOmega) {
  PulseSpec p;
  p.segment_duration = dt;
  p.amplitude = omega;
  p.phases = random_phases(n, seed);
  return p;
}

OptimizationConfig single_qubit_config() {
  OptimizationConfig c;
  c.ensemble = single_member_ensemble(SpinSystem({"P"}, {0.0}, Eigen::MatrixXd::Zero(1, 1)));
  c.rf_scales = {1.0};
  return c;
}

}  // namespace

TEST_CASE("perturbed pulse stays in range and is reproducible") {
  const PulseSpec p = make_pulse(40, 3);
  const PulseSpec q = perturbed_pulse(p, 0.3, 11);
  CHECK(q == perturbed_pulse(p, 0.3, 11));
  CHECK(q.amplitude == p.amplitude);
  REQUIRE(q.phases.size() == p.phases.size());
  for (double phi : q.phases) {
    CHECK(phi >= 0.0);
    CHECK(phi < 2.0 * kPi);
  }
  CHECK(perturbed_pulse(p, 0.0, 11) == p);
  CHECK_THROWS_AS(perturbed_pulse(p, -1.0, 1), ArgumentError);
}

TEST_CASE("pulse spec validation") {
  PulseSpec p = make_pulse(4, 1);
  CHECK_NOTHROW(p.validate());
  CHECK(p.n_segments() == 4);
  CHECK(p.duration() == doctest::Approx(40e-6));
  PulseSpec bad = p;
  bad.phases.clear();
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = p;
  bad.segment_duration = 0.0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = p;
  bad.amplitude = -1.0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = p;
  bad.phases[2] = std::nan("");
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("random phases are uniform in [0, 2 pi) and seed-determined") {
  const auto a = random_phases(1000, 42);
  CHECK(a == random_phases(1000, 42));
  CHECK(a != random_phases(1000, 43));
  double mean = 0.0;
  for (double x : a) {
    CHECK(x >= 0.0);
    CHECK(x < 2.0 * kPi);
    mean += x / 1000.0;
  }
  CHECK(std::abs(mean - kPi) < 0.2);
}

TEST_CASE("segment propagator examples") {
  const ComplexMatrix h0 = build_internal_hamiltonian(crotonic_default(), CouplingModel::kIsotropic);
  const PhaseOnlyPropagator prop(h0, kOmega, 1.0, 10e-6);
  CHECK(prop.segment(0.0) == prop.drift_and_x());

  const PhaseOnlyPropagator drift(h0, 0.0, 1.0, 10e-6);
  const ComplexMatrix free = oracle::taylor_expm(Complex(0, -10e-6) * h0);
  for (double phase : {0.0, 0.3, 2.0, 5.5}) CHECK(oracle::max_abs_diff(drift.segment(phase), free) < 1e-12);

  std::mt19937_64 rng(77);
  const SpinSystem two = random_system(2, rng);
  const ComplexMatrix h2 = build_internal_hamiltonian(two, CouplingModel::kIsotropic);
  PulseSpec p;
  p.phases = {0.7};
  CHECK(oracle::max_abs_diff(segment_propagator(h2, p, 0, 1.0).matrix(),
                             direct_segment(h2, 2, kOmega, 0.7, 10e-6)) <= 1e-10);
  CHECK_THROWS_AS(segment_propagator(h2, p, 1, 1.0), ArgumentError);
}

TEST_CASE("decomposition identity over random draws") {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi), omega(0.0, 2.0 * kPi * 2.0e4),
      scale(0.8, 1.2);
  double worst = 0.0;
  for (int draw = 0; draw < 60; ++draw) {
    const int n = (draw % 3 == 0) ? 1 : (draw % 3 == 1 ? 2 : 4);
    const ComplexMatrix h0 = build_internal_hamiltonian(
        random_system(n, rng), draw % 2 ? CouplingModel::kWeak : CouplingModel::kIsotropic);
    const double w = omega(rng), s = scale(rng), phi = phase(rng);
    const PhaseOnlyPropagator prop(h0, w, s, 10e-6);
    worst = std::max(worst, oracle::max_abs_diff(prop.segment(phi), direct_segment(h0, n, s * w, phi, 10e-6)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("drift that does not commute with Iz is rejected") {
  const ComplexMatrix hx = control_operators(1).ix;
  CHECK_THROWS_AS(PhaseOnlyPropagator(hx, kOmega, 1.0, 1e-5), ArgumentError);
}

TEST_CASE("z rotation derivative identity") {
  const RealVector iz = collective_iz_diagonal(4);
  for (double phi : {0.0, 0.4, 3.0, 6.1}) {
    const ComplexVector z = z_rotation_diagonal(iz, phi);
    for (Eigen::Index k = 0; k < iz.size(); ++k) {
      const Complex derivative = Complex(0, -iz(k)) * std::exp(Complex(0, -phi * iz(k)));
      CHECK(std::abs(Complex(0, -1) * iz(k) * z(k) - derivative) <= 1e-14);
      CHECK(std::abs(z(k) - std::exp(Complex(0, -phi * iz(k)))) <= 1e-15);
    }
  }
}

TEST_CASE("pulse propagator") {
  const ComplexMatrix h0 = build_internal_hamiltonian(crotonic_default(), CouplingModel::kIsotropic);
  const PulseSpec one = make_pulse(1, 3);
  CHECK(pulse_propagator(h0, one, 1.0).matrix() == segment_propagator(h0, one, 0, 1.0).matrix());

  // Commuting segments with no drift.
  PulseSpec same;
  same.phases.assign(7, 1.1);
  const ControlOperators ops = control_operators(2);
  const ComplexMatrix expected = oracle::taylor_expm(
      Complex(0, -kOmega * 7 * same.segment_duration) * (std::cos(1.1) * ops.ix + std::sin(1.1) * ops.iy));
  CHECK(oracle::max_abs_diff(pulse_propagator(ComplexMatrix::Zero(4, 4), same, 1.0).matrix(), expected) <
        1e-12);

  // Time ordering: earliest segment rightmost.
  const PulseSpec two = make_pulse(2, 5);
  const ComplexMatrix manual =
      segment_propagator(h0, two, 1, 1.0).matrix() * segment_propagator(h0, two, 0, 1.0).matrix();
  CHECK(oracle::max_abs_diff(pulse_propagator(h0, two, 1.0).matrix(), manual) < 1e-14);

  const PulseSpec long_pulse = make_pulse(500, 6);
  CHECK(pulse_propagator(h0, long_pulse, 1.0).unitarity_error() <= 1e-10);
}

TEST_CASE("gate fidelity") {
  const ComplexMatrix s = swap_matrix();
  CHECK(gate_fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gate_fidelity(std::polar(1.0, 0.83) * s, s) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gate_fidelity(identity(4), s) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(gate_fidelity(identity(2), s), ArgumentError);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 30; ++k) {
    const double f = gate_fidelity(oracle::random_unitary(8, rng), oracle::random_unitary(8, rng));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("zero amplitude gives a zero gradient") {
  const ComplexMatrix h0 = build_internal_hamiltonian(crotonic_default(), CouplingModel::kIsotropic);
  const PulseSpec p = make_pulse(20, 9, 10e-6, 0.0);
  const UnitaryMatrix target = UnitaryMatrix::trusted(kernels::embed_two_qubit(swap_matrix(), 1, 2, 4));
  for (double g : exact_phase_gradient(h0, p, 1.0, target)) CHECK(std::abs(g) < 1e-14);
}

TEST_CASE("single-segment gradient matches symbolic differentiation") {
  // H0 = 0, one qubit: U = cos(t/2) 1 - i sin(t/2)(cos phi sx + sin phi sy), t = Omega dt.
  std::mt19937_64 rng(13);
  const ComplexMatrix target = oracle::random_unitary(2, rng);
  const double t = kOmega * 10e-6;
  const Complex a = std::cos(t / 2) * target.adjoint().trace();
  const Complex b = Complex(0, -std::sin(t / 2)) * (target.adjoint() * pauli_x()).trace();
  const Complex c = Complex(0, -std::sin(t / 2)) * (target.adjoint() * pauli_y()).trace();
  for (double phi : {0.0, 0.9, 2.5, 4.4}) {
    const Complex g = a + b * std::cos(phi) + c * std::sin(phi);
    const Complex dg = -b * std::sin(phi) + c * std::cos(phi);
    const double fidelity = std::norm(g) / 4.0;
    const double derivative = 2.0 * (std::conj(g) * dg).real() / 4.0;
    PulseSpec p;
    p.phases = {phi};
    const auto exact = exact_phase_gradient(ComplexMatrix::Zero(2, 2), p, 1.0, UnitaryMatrix::trusted(target));
    CHECK(std::abs(exact[0] - derivative) < 1e-13);
    const PhaseOnlyPropagator prop(ComplexMatrix::Zero(2, 2), kOmega, 1.0, 10e-6);
    CHECK(std::abs(fidelity_and_gradient(prop, p.phases, target).fidelity - fidelity) < 1e-14);
  }
}

TEST_CASE("exact gradient agrees with central differences") {
  std::mt19937_64 rng(14);
  for (int n : {1, 2, 4}) {
    for (int inst = 0; inst < 3; ++inst) {
      const SpinSystem sys = n == 4 ? crotonic_default() : random_system(n, rng);
      const ComplexMatrix h0 = build_internal_hamiltonian(sys, CouplingModel::kIsotropic);
      const PulseSpec p = make_pulse(n == 1 ? 8 : 30, rng());
      const UnitaryMatrix target = pulse_propagator(h0, make_pulse(p.n_segments(), rng()), 1.0);
      const auto exact = exact_phase_gradient(h0, p, 1.0, target);
      const auto fd = finite_difference_gradient(h0, p, 1.0, target, 1e-6);
      CHECK(compare_gradients(exact, fd).max_relative_error <= 1e-6);
    }
  }
}

TEST_CASE("gradient comparison metric") {
  CHECK(compare_gradients({1.0, 2.0}, {1.0, 2.0}).max_relative_error == 0.0);
  const auto cmp = compare_gradients({1.0, 2.2}, {1.0, 2.0});
  CHECK(cmp.max_relative_error == doctest::Approx(0.1));
  CHECK(cmp.worst_index == 1);
  CHECK(compare_gradients({1e-14, 0.0}, {0.0, 1e-13}).max_relative_error == 0.0);
  // A vanishing exact gradient against finite differences at their noise level.
  const double resolution = finite_difference_resolution(1e-6);
  CHECK(resolution == doctest::Approx(2.22e-9).epsilon(1e-2));
  CHECK(compare_gradients({1e-16, 0.0}, {3e-10, -1e-10}).max_relative_error > 0.5);
  CHECK(compare_gradients({1e-16, 0.0}, {3e-10, -1e-10}, resolution).max_relative_error == 0.0);
  CHECK(compare_gradients({1e-16, 0.0}, {3e-8, 0.0}, resolution).max_relative_error > 0.5);
  CHECK_THROWS_AS(compare_gradients({1.0}, {1.0, 2.0}), ArgumentError);
}

TEST_CASE("segment evaluation performs no matrix exponentials") {
  const ComplexMatrix h0 = build_internal_hamiltonian(crotonic_default(), CouplingModel::kIsotropic);
  const PhaseOnlyPropagator prop(h0, kOmega, 1.0, 10e-6);
  const auto phases = random_phases(200, 3);
  const ComplexMatrix target = kernels::embed_two_qubit(swap_matrix(), 1, 2, 4);
  const auto before = matrix_exponential_count();
  (void)prop.propagate(phases);
  (void)fidelity_and_gradient(prop, phases, target);
  for (double phi : phases) (void)prop.segment(phi);
  CHECK(matrix_exponential_count() == before);
}

TEST_CASE("weighted mean") {
  CHECK(weighted_mean({0.9, 1.0}, {1.0, 3.0}) == doctest::Approx(0.975).epsilon(1e-15));
  CHECK_THROWS_AS(weighted_mean({1.0}, {1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(weighted_mean({1.0}, {0.0}), ArgumentError);
}

TEST_CASE("robust objective") {
  const SpinSystem s = crotonic_default();
  const ComplexMatrix h0 = build_internal_hamiltonian(s, CouplingModel::kIsotropic);
  const UnitaryMatrix target = UnitaryMatrix::trusted(kernels::embed_two_qubit(swap_matrix(), 1, 2, 4));
  const PulseSpec p = make_pulse(40, 21);

  OptimizationConfig config;
  config.rf_scales = {1.0};
  config.ensemble = single_member_ensemble(s);
  const double plain = gate_fidelity(pulse_propagator(h0, p, 1.0), target);
  const FidelityReport single = robust_objective(p, config, target);
  CHECK(std::abs(single.fidelity - plain) < 1e-13);
  REQUIRE(single.member_fidelities.size() == 1);

  config.ensemble = environment_ensemble(s, Eigen::MatrixXd::Zero(5, 4), {2, 3, 4});
  const FidelityReport sixteen = robust_objective(p, config, target);
  CHECK(sixteen.member_fidelities.size() == 16);
  CHECK(std::abs(sixteen.fidelity - single.fidelity) <= 1e-14);
  for (std::size_t j = 0; j < single.gradient.size(); ++j)
    CHECK(std::abs(sixteen.gradient[j] - single.gradient[j]) <= 1e-14);

  config.rf_scales = {0.95, 1.0, 1.05};
  config.ensemble = single_member_ensemble(s);
  const FidelityReport rf = robust_objective(p, config, target);
  double mean = 0.0;
  for (double scale : config.rf_scales) mean += gate_fidelity(pulse_propagator(h0, p, scale), target) / 3.0;
  CHECK(std::abs(rf.fidelity - mean) < 1e-13);
  for (double f : rf.member_fidelities) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("parallel and serial robust evaluation are bit-identical") {
  OptimizationConfig config;
  Eigen::MatrixXd hc(5, 4);
  hc << 150, 3, 0, 1, 5, 160, 2, 0, 1, 2, 6, 127, 1, 2, 6, 127, 1, 2, 6, 127;
  config.ensemble = environment_ensemble(crotonic_default(), hc, {2, 3, 4});
  const UnitaryMatrix target = target_gate("swap_BC", crotonic_default());
  const RobustProblem problem(config, kOmega, 10e-6, target);
  CHECK(problem.grid_size() == 48);
  const auto phases = random_phases(25, 8);
  const int saved = thread_count();
  set_thread_count(4);
  const FidelityReport par = problem.evaluate(phases);
  const FidelityReport par_again = problem.evaluate(phases);
  set_thread_count(saved);
  const FidelityReport ser = problem.evaluate_serial(phases);
  CHECK(par.fidelity == ser.fidelity);
  CHECK(par.gradient == ser.gradient);
  CHECK(par.member_fidelities == ser.member_fidelities);
  CHECK(par_again.fidelity == par.fidelity);
  CHECK(par_again.gradient == par.gradient);
}

TEST_CASE("optimization config validation") {
  OptimizationConfig c;
  CHECK_NOTHROW(c.validate());
  c.rf_scales = {};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = OptimizationConfig{};
  c.rf_scales = {1.0, -0.1};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = OptimizationConfig{};
  c.target_fidelity = 1.5;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = OptimizationConfig{};
  c.target_fidelity = 0.0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = OptimizationConfig{};
  c.ensemble.members.clear();
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = OptimizationConfig{};
  c.max_iterations = -1;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("maximize on a smooth test function") {
  // f(x) = -sum (x_i - i)^2 / (1 + i), maximum 0 at x_i = i.
  const Objective f = [](const std::vector<double>& x) {
    ValueAndGradient out;
    out.gradient.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - static_cast<double>(i);
      out.value -= d * d / (1.0 + i);
      out.gradient[i] = -2.0 * d / (1.0 + i);
    }
    return out;
  };
  for (auto method : {OptimizerMethod::kGradientAscent, OptimizerMethod::kQuasiNewton}) {
    AscentOptions opts;
    opts.method = method;
    opts.target_value = -1e-14;
    opts.max_iterations = 2000;
    const AscentResult r = maximize(f, std::vector<double>(6, 0.0), opts);
    CHECK(r.value >= -1e-14);
    CHECK(r.reason == StopReason::kTargetReached);
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] >= r.history[k - 1]);
  }
  CHECK(parse_optimizer_method("lbfgs") == OptimizerMethod::kQuasiNewton);
  CHECK(parse_optimizer_method("gradient") == OptimizerMethod::kGradientAscent);
  CHECK_THROWS_AS(parse_optimizer_method("newton"), ArgumentError);
}

TEST_CASE("optimizer returns immediately when already optimal") {
  const ComplexMatrix h0 = build_internal_hamiltonian(crotonic_default(), CouplingModel::kIsotropic);
  const PulseSpec init = make_pulse(30, 4);
  OptimizationConfig config;
  config.rf_scales = {1.0};
  const OptimizationResult r = optimize_pulse(pulse_propagator(h0, init, 1.0), config, init);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 0);
  CHECK(r.report.fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-qubit pi rotation is found") {
  OptimizationConfig config = single_qubit_config();
  config.target_fidelity = 1.0 - 1e-6;
  config.max_iterations = 200;
  const double dt = kPi / kOmega / 20.0;
  const PulseSpec init = make_pulse(20, 17, dt);
  const UnitaryMatrix target = target_gate("x180", config.ensemble.members[0].system);
  const OptimizationResult r = optimize_pulse(target, config, init);
  CHECK(r.report.converged);
  CHECK(r.report.fidelity >= 1.0 - 1e-6);
  CHECK(r.report.iterations <= 200);
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] >= r.history[k - 1]);
  for (double phi : r.pulse.phases) {
    CHECK(phi >= 0.0);
    CHECK(phi < 2.0 * kPi);
  }

  // Deterministic given the seed.
  const OptimizationResult again = optimize_pulse(target, config, init);
  CHECK(again.pulse.phases == r.pulse.phases);
  CHECK(again.report.fidelity == r.report.fidelity);
}

TEST_CASE("non-convergence is reported, not thrown") {
  OptimizationConfig config = single_qubit_config();
  config.max_iterations = 1;
  config.target_fidelity = 1.0;
  const PulseSpec init = make_pulse(20, 2, kPi / kOmega / 20.0);
  const OptimizationResult r =
      optimize_pulse(target_gate("x180", config.ensemble.members[0].system), config, init);
  CHECK(!r.report.converged);
  CHECK(r.report.iterations <= 1);
  CHECK(r.reason == StopReason::kMaxIterations);
}

TEST_CASE("target dimension must match the Hamiltonian") {
  OptimizationConfig config = single_qubit_config();
  CHECK_THROWS_AS(optimize_pulse(UnitaryMatrix(swap_matrix()), config, make_pulse(4, 1)), ArgumentError);
}
