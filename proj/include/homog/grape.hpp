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

// Phase-only GRAPE. Every segment has the same RF amplitude Omega, so
//
//   U_j = exp(-i [H0 + Omega (cos phi_j Ix + sin phi_j Iy)] dt) = Z_j X Z_j^dagger
//
// with Z_j = exp(-i phi_j Iz) diagonal and X = exp(-i (H0 + Omega Ix) dt)
// fixed. X is exponentiated once per (H0, RF scale); segments then cost one
// element-wise rescaling, and dU_j/dphi_j = i [U_j, Iz] exactly. This relies
// on [H0, Iz] = 0, which holds for homonuclear Zeeman and scalar couplings.

#include "homog/linalg.hpp"
#include "homog/optimizer.hpp"
#include "homog/spin_system.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace homog {

struct PulseSpec {
  double segment_duration = 10e-6;                     // s
  double amplitude = 2.0 * std::numbers::pi * 1.0e4;   // rad/s
  std::vector<double> phases;                          // rad, one per segment

  int n_segments() const { return static_cast<int>(phases.size()); }
  double duration() const { return segment_duration * static_cast<double>(phases.size()); }

  /// Throws ArgumentError unless N >= 1, dt > 0, Omega >= 0 and all finite.
  void validate() const;

  friend bool operator==(const PulseSpec&, const PulseSpec&) = default;
};

/// Uniform phases in [0, 2 pi) from a 64-bit Mersenne Twister seeded with `seed`.
std::vector<double> random_phases(int n, std::uint64_t seed);

/// Copy of `pulse` with each phase moved by a normal deviate of width `sigma`
/// (rad) and wrapped back into [0, 2 pi). A target built from it keeps the
/// fidelity and its gradient well above finite-difference rounding noise.
PulseSpec perturbed_pulse(const PulseSpec& pulse, double sigma, std::uint64_t seed);

/// Cached X and Iz for one (H0, Omega, RF scale, dt).
class PhaseOnlyPropagator {
 public:
  /// Performs the only matrix exponential of the segment evaluation.
  PhaseOnlyPropagator(const ComplexMatrix& h0, double amplitude, double rf_scale, double dt);

  Eigen::Index dimension() const { return x_.rows(); }
  const ComplexMatrix& drift_and_x() const { return x_; }
  const RealVector& iz_diagonal() const { return iz_; }

  /// Z(phase) X Z(phase)^dagger, element-wise.
  void segment(double phase, ComplexMatrix& out) const;
  ComplexMatrix segment(double phase) const;

  /// U_N ... U_1 for the given phases.
  ComplexMatrix propagate(const std::vector<double>& phases) const;

 private:
  ComplexMatrix x_;
  RealVector iz_;
};

/// exp(-i phi Iz) as its diagonal.
ComplexVector z_rotation_diagonal(const RealVector& iz_diagonal, double phase);

UnitaryMatrix segment_propagator(const ComplexMatrix& h0, const PulseSpec& pulse, int j,
                                 double rf_scale);

/// U(T) = U_N ... U_2 U_1
UnitaryMatrix pulse_propagator(const ComplexMatrix& h0, const PulseSpec& pulse, double rf_scale);

/// |tr(V^dagger U)|^2 / d^2
double gate_fidelity(const UnitaryMatrix& actual, const UnitaryMatrix& target);
double gate_fidelity(const ComplexMatrix& actual, const ComplexMatrix& target);

struct FidelityGradient {
  double fidelity = 0.0;
  std::vector<double> gradient;
};

/// Fidelity and d(fidelity)/d(phi_j) from one forward and one backward sweep.
FidelityGradient fidelity_and_gradient(const PhaseOnlyPropagator& propagator,
                                       const std::vector<double>& phases,
                                       const ComplexMatrix& target);

std::vector<double> exact_phase_gradient(const ComplexMatrix& h0, const PulseSpec& pulse,
                                         double rf_scale, const UnitaryMatrix& target);

/// Central differences of gate_fidelity(pulse_propagator(...)), independent of
/// the analytic gradient path.
std::vector<double> finite_difference_gradient(const ComplexMatrix& h0, const PulseSpec& pulse,
                                               double rf_scale, const UnitaryMatrix& target,
                                               double step = 1e-6);

struct GradientComparison {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
};

/// Rounding noise of a central difference with this step: 10 eps / step.
double finite_difference_resolution(double step);

/// Element-wise |exact - reference| / max(|reference_j|, 1e-3 max_k |reference_k|).
/// An exact gradient below 1e-12 everywhere whose reference stays within
/// `resolution` (the reference's own noise level) compares as identical.
GradientComparison compare_gradients(const std::vector<double>& exact,
                                     const std::vector<double>& reference,
                                     double resolution = 1e-12);

/// sum_k w_k f_k / sum_k w_k, accumulated in index order.
double weighted_mean(const std::vector<double>& values, const std::vector<double>& weights);

struct OptimizationConfig {
  double target_fidelity = 0.999;
  int max_iterations = 500;
  double gradient_tolerance = 1e-10;
  std::vector<double> rf_scales{0.95, 1.0, 1.05};
  EnvironmentEnsemble ensemble = single_member_ensemble(crotonic_default());
  CouplingModel coupling_model = CouplingModel::kIsotropic;
  std::uint64_t seed = 1;
  OptimizerMethod method = OptimizerMethod::kGradientAscent;

  /// Throws ArgumentError on empty/non-positive RF scales, empty ensemble,
  /// threshold outside (0, 1] or negative iteration budget.
  void validate() const;
};

struct FidelityReport {
  /// One entry per (member, RF scale), member-major.
  std::vector<double> member_fidelities;
  double fidelity = 0.0;
  std::vector<double> gradient;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Propagator caches for every (ensemble member, RF scale) pair.
class RobustProblem {
 public:
  RobustProblem(const OptimizationConfig& config, double amplitude, double dt,
                const UnitaryMatrix& target);

  std::size_t grid_size() const { return propagators_.size(); }
  Eigen::Index dimension() const { return target_.rows(); }

  /// Grid points evaluated concurrently; reduction in grid order.
  FidelityReport evaluate(const std::vector<double>& phases, bool with_gradient = true) const;

  /// Serial reference of evaluate().
  FidelityReport evaluate_serial(const std::vector<double>& phases,
                                 bool with_gradient = true) const;

 private:
  FidelityReport reduce(std::vector<FidelityGradient> points, bool with_gradient) const;

  std::vector<PhaseOnlyPropagator> propagators_;
  std::vector<double> weights_;
  ComplexMatrix target_;
};

FidelityReport robust_objective(const PulseSpec& pulse, const OptimizationConfig& config,
                                const UnitaryMatrix& target);

struct OptimizationResult {
  PulseSpec pulse;
  FidelityReport report;
  StopReason reason = StopReason::kMaxIterations;
  std::vector<double> history;
};

/// Phase-only GRAPE from `initial`. Returns the best pulse found; `converged`
/// is set iff the robust fidelity reached the configured threshold.
OptimizationResult optimize_pulse(const UnitaryMatrix& target, const OptimizationConfig& config,
                                  const PulseSpec& initial);

}  // namespace homog
