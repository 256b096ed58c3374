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

#include "homog/grape.hpp"

#include "homog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace homog {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// tr(P diag(iz) X) without forming the product.
Complex weighted_trace(const ComplexMatrix& p, const RealVector& iz, const ComplexMatrix& x) {
  Complex sum = 0.0;
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    Complex row = 0.0;
    for (Eigen::Index b = 0; b < x.cols(); ++b) row += x(a, b) * p(b, a);
    sum += iz(a) * row;
  }
  return sum;
}

void check_square_pair(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ArgumentError(std::string(what) + ": dimension mismatch");
}

}  // namespace

void PulseSpec::validate() const {
  if (phases.empty()) throw ArgumentError("pulse needs at least one segment");
  if (!(segment_duration > 0.0) || !std::isfinite(segment_duration))
    throw ArgumentError("pulse segment duration must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw ArgumentError("pulse amplitude must be non-negative");
  for (double p : phases)
    if (!std::isfinite(p)) throw ArgumentError("pulse phases must be finite");
}

std::vector<double> random_phases(int n, std::uint64_t seed) {
  if (n < 0) throw ArgumentError("random_phases: negative count");
  std::mt19937_64 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& p : out) p = kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

PulseSpec perturbed_pulse(const PulseSpec& pulse, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("perturbation width must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shift(0.0, sigma);
  PulseSpec out = pulse;
  for (double& p : out.phases) {
    p = std::fmod(p + shift(rng), kTwoPi);
    if (p < 0.0) p += kTwoPi;
  }
  return out;
}

PhaseOnlyPropagator::PhaseOnlyPropagator(const ComplexMatrix& h0, double amplitude,
                                         double rf_scale, double dt) {
  if (h0.rows() != h0.cols()) throw ArgumentError("H0 must be square");
  const int n = qubit_count(h0.rows());
  if (!(dt > 0.0)) throw ArgumentError("segment duration must be positive");
  iz_ = collective_iz_diagonal(n);
  const ComplexMatrix commutator = h0 * iz_.asDiagonal() - iz_.asDiagonal() * h0;
  if (max_abs(commutator) > 1e-9 * std::max(1.0, max_abs(h0)))
    throw ArgumentError("phase-only decomposition needs [H0, Iz] = 0");
  const ComplexMatrix generator =
      Complex(0.0, -dt) * (h0 + (rf_scale * amplitude) * control_operators(n).ix);
  x_ = expm_skew_hermitian(generator).matrix();
}

ComplexVector z_rotation_diagonal(const RealVector& iz_diagonal, double phase) {
  return iz_diagonal.unaryExpr([phase](double m) { return std::polar(1.0, -phase * m); });
}

void PhaseOnlyPropagator::segment(double phase, ComplexMatrix& out) const {
  const ComplexVector z = z_rotation_diagonal(iz_, phase);
  out.resize(x_.rows(), x_.cols());
  for (Eigen::Index b = 0; b < x_.cols(); ++b) {
    const Complex zb = std::conj(z(b));
    for (Eigen::Index a = 0; a < x_.rows(); ++a) out(a, b) = z(a) * x_(a, b) * zb;
  }
}

ComplexMatrix PhaseOnlyPropagator::segment(double phase) const {
  ComplexMatrix out;
  segment(phase, out);
  return out;
}

ComplexMatrix PhaseOnlyPropagator::propagate(const std::vector<double>& phases) const {
  ComplexMatrix total = identity(x_.rows());
  ComplexMatrix u;
  for (double phi : phases) {
    segment(phi, u);
    total = u * total;
  }
  return total;
}

UnitaryMatrix segment_propagator(const ComplexMatrix& h0, const PulseSpec& pulse, int j,
                                 double rf_scale) {
  pulse.validate();
  if (j < 0 || j >= pulse.n_segments()) throw ArgumentError("segment index out of range");
  const PhaseOnlyPropagator prop(h0, pulse.amplitude, rf_scale, pulse.segment_duration);
  return UnitaryMatrix::trusted(prop.segment(pulse.phases[static_cast<std::size_t>(j)]));
}

UnitaryMatrix pulse_propagator(const ComplexMatrix& h0, const PulseSpec& pulse, double rf_scale) {
  pulse.validate();
  const PhaseOnlyPropagator prop(h0, pulse.amplitude, rf_scale, pulse.segment_duration);
  return UnitaryMatrix::trusted(prop.propagate(pulse.phases));
}

double gate_fidelity(const ComplexMatrix& actual, const ComplexMatrix& target) {
  check_square_pair(actual, target, "gate_fidelity");
  const double d = static_cast<double>(actual.rows());
  return std::norm((target.adjoint() * actual).trace()) / (d * d);
}

double gate_fidelity(const UnitaryMatrix& actual, const UnitaryMatrix& target) {
  return gate_fidelity(actual.matrix(), target.matrix());
}

FidelityGradient fidelity_and_gradient(const PhaseOnlyPropagator& propagator,
                                       const std::vector<double>& phases,
                                       const ComplexMatrix& target) {
  check_square_pair(propagator.drift_and_x(), target, "fidelity_and_gradient");
  const std::size_t n = phases.size();
  const Eigen::Index dim = target.rows();
  const RealVector& iz = propagator.iz_diagonal();

  // forward[j] = U_j ... U_1
  std::vector<ComplexMatrix> forward(n + 1);
  forward[0] = identity(dim);
  ComplexMatrix u;
  for (std::size_t j = 0; j < n; ++j) {
    propagator.segment(phases[j], u);
    forward[j + 1].noalias() = u * forward[j];
  }
  const ComplexMatrix target_dag = target.adjoint();
  const Complex overlap = (target_dag * forward[n]).trace();
  const double d2 = static_cast<double>(dim * dim);

  FidelityGradient out;
  out.fidelity = std::norm(overlap) / d2;
  out.gradient.assign(n, 0.0);

  // backward = V^dagger U_N ... U_{j+1}; h_j = tr(backward_j Iz forward_j) and
  // d overlap / d phi_j = i (h_{j-1} - h_j).
  ComplexMatrix backward = target_dag;
  Complex h_next = weighted_trace(backward, iz, forward[n]);
  ComplexMatrix tmp;
  for (std::size_t j = n; j-- > 0;) {
    propagator.segment(phases[j], u);
    tmp.noalias() = backward * u;
    backward.swap(tmp);
    const Complex h = weighted_trace(backward, iz, forward[j]);
    const Complex d_overlap = Complex(0.0, 1.0) * (h - h_next);
    out.gradient[j] = 2.0 * (std::conj(overlap) * d_overlap).real() / d2;
    h_next = h;
  }
  return out;
}

std::vector<double> exact_phase_gradient(const ComplexMatrix& h0, const PulseSpec& pulse,
                                         double rf_scale, const UnitaryMatrix& target) {
  pulse.validate();
  const PhaseOnlyPropagator prop(h0, pulse.amplitude, rf_scale, pulse.segment_duration);
  return fidelity_and_gradient(prop, pulse.phases, target.matrix()).gradient;
}

std::vector<double> finite_difference_gradient(const ComplexMatrix& h0, const PulseSpec& pulse,
                                               double rf_scale, const UnitaryMatrix& target,
                                               double step) {
  pulse.validate();
  const PhaseOnlyPropagator prop(h0, pulse.amplitude, rf_scale, pulse.segment_duration);
  std::vector<double> grad(pulse.phases.size());
  std::vector<double> phases = pulse.phases;
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const double saved = phases[j];
    phases[j] = saved + step;
    const double up = gate_fidelity(prop.propagate(phases), target.matrix());
    phases[j] = saved - step;
    const double down = gate_fidelity(prop.propagate(phases), target.matrix());
    phases[j] = saved;
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

double finite_difference_resolution(double step) {
  return 10.0 * std::numeric_limits<double>::epsilon() / step;
}

GradientComparison compare_gradients(const std::vector<double>& exact,
                                     const std::vector<double>& reference, double resolution) {
  if (exact.size() != reference.size()) throw ArgumentError("compare_gradients: size mismatch");
  double scale = 0.0;
  double exact_scale = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    scale = std::max(scale, std::abs(reference[j]));
    exact_scale = std::max(exact_scale, std::abs(exact[j]));
  }
  GradientComparison out;
  if (exact_scale < 1e-12 && scale <= std::max(resolution, 1e-12)) return out;
  const double floor = 1e-3 * std::max(scale, exact_scale);
  for (std::size_t j = 0; j < exact.size(); ++j) {
    const double rel = std::abs(exact[j] - reference[j]) / std::max(std::abs(reference[j]), floor);
    if (rel > out.max_relative_error) {
      out.max_relative_error = rel;
      out.worst_index = j;
    }
  }
  return out;
}

double weighted_mean(const std::vector<double>& values, const std::vector<double>& weights) {
  if (values.size() != weights.size() || values.empty())
    throw ArgumentError("weighted_mean: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += weights[i] * values[i];
    den += weights[i];
  }
  if (!(den > 0.0)) throw ArgumentError("weighted_mean: weights must sum to a positive value");
  return num / den;
}

void OptimizationConfig::validate() const {
  if (rf_scales.empty()) throw ArgumentError("rf_scales must not be empty");
  for (double s : rf_scales)
    if (!(s > 0.0) || !std::isfinite(s)) throw ArgumentError("rf_scales must be positive");
  if (ensemble.members.empty()) throw ArgumentError("ensemble must not be empty");
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0))
    throw ArgumentError("target fidelity must lie in (0, 1]");
  if (max_iterations < 0) throw ArgumentError("max_iterations must be non-negative");
  if (!(gradient_tolerance >= 0.0)) throw ArgumentError("gradient tolerance must be >= 0");
}

RobustProblem::RobustProblem(const OptimizationConfig& config, double amplitude, double dt,
                             const UnitaryMatrix& target)
    : target_(target.matrix()) {
  config.validate();
  for (const auto& member : config.ensemble.members) {
    const ComplexMatrix h0 = build_internal_hamiltonian(member.system, config.coupling_model);
    if (h0.rows() != target_.rows())
      throw ArgumentError("target dimension does not match the spin system");
    for (double scale : config.rf_scales) {
      propagators_.emplace_back(h0, amplitude, scale, dt);
      weights_.push_back(static_cast<double>(member.weight) /
                         static_cast<double>(config.rf_scales.size()));
    }
  }
}

FidelityReport RobustProblem::reduce(std::vector<FidelityGradient> points,
                                     bool with_gradient) const {
  FidelityReport report;
  for (const auto& p : points) report.member_fidelities.push_back(p.fidelity);
  report.fidelity = weighted_mean(report.member_fidelities, weights_);
  if (with_gradient) {
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    report.gradient.assign(points.front().gradient.size(), 0.0);
    for (std::size_t k = 0; k < points.size(); ++k)
      for (std::size_t j = 0; j < report.gradient.size(); ++j)
        report.gradient[j] += weights_[k] * points[k].gradient[j];
    double sq = 0.0;
    for (double& g : report.gradient) {
      g /= total;
      sq += g * g;
    }
    report.gradient_norm = std::sqrt(sq);
  }
  return report;
}

FidelityReport RobustProblem::evaluate(const std::vector<double>& phases,
                                       bool with_gradient) const {
  std::vector<FidelityGradient> points(propagators_.size());
  const auto count = static_cast<std::int64_t>(propagators_.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto& prop = propagators_[static_cast<std::size_t>(k)];
    if (with_gradient) {
      points[static_cast<std::size_t>(k)] = fidelity_and_gradient(prop, phases, target_);
    } else {
      points[static_cast<std::size_t>(k)].fidelity = gate_fidelity(prop.propagate(phases), target_);
    }
  }
  return reduce(std::move(points), with_gradient);
}

FidelityReport RobustProblem::evaluate_serial(const std::vector<double>& phases,
                                              bool with_gradient) const {
  std::vector<FidelityGradient> points;
  for (const auto& prop : propagators_) {
    if (with_gradient) {
      points.push_back(fidelity_and_gradient(prop, phases, target_));
    } else {
      points.push_back({gate_fidelity(prop.propagate(phases), target_), {}});
    }
  }
  return reduce(std::move(points), with_gradient);
}

FidelityReport robust_objective(const PulseSpec& pulse, const OptimizationConfig& config,
                                const UnitaryMatrix& target) {
  pulse.validate();
  const RobustProblem problem(config, pulse.amplitude, pulse.segment_duration, target);
  return problem.evaluate(pulse.phases);
}

OptimizationResult optimize_pulse(const UnitaryMatrix& target, const OptimizationConfig& config,
                                  const PulseSpec& initial) {
  initial.validate();
  const RobustProblem problem(config, initial.amplitude, initial.segment_duration, target);

  AscentOptions options;
  options.method = config.method;
  options.max_iterations = config.max_iterations;
  options.target_value = config.target_fidelity;
  options.gradient_tolerance = config.gradient_tolerance;

  const AscentResult ascent = maximize(
      [&](const std::vector<double>& phases) {
        FidelityReport r = problem.evaluate(phases);
        return ValueAndGradient{r.fidelity, std::move(r.gradient)};
      },
      initial.phases, options);

  OptimizationResult result;
  result.pulse = initial;
  result.pulse.phases = ascent.x;
  for (double& p : result.pulse.phases) {
    p = std::fmod(p, kTwoPi);
    if (p < 0.0) p += kTwoPi;
  }
  result.report = problem.evaluate(result.pulse.phases);
  result.report.iterations = ascent.iterations;
  result.report.converged = result.report.fidelity >= config.target_fidelity;
  result.reason = ascent.reason;
  result.history = ascent.history;
  return result;
}

}  // namespace homog
