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

#include "homog/cli.hpp"

#include "homog/errors.hpp"
#include "homog/experiment.hpp"
#include "homog/gates.hpp"
#include "homog/grape.hpp"
#include "homog/homogeniser.hpp"
#include "homog/parallel.hpp"
#include "homog/pulse_io.hpp"
#include "homog/records_io.hpp"
#include "homog/spin_config.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <algorithm>
#include <ostream>
#include <sstream>

namespace homog {
namespace {

struct CommonOptions {
  int threads = 0;
  std::string spin_config;
  std::string coupling_model = "isotropic";
  std::string out;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  std::string mode = "ideal";
  std::string grid = "0:90:10";
  int repeats = 1;
  std::string scheme = "none";
  std::string pulse_dir;
  std::vector<double> rf_scales{1.0};
};

struct ConvergeOptions {
  double eta_deg = 0.0;
  int n = 1;
  bool map = false;
  bool full = false;
  double f_system = 1.0;
  double f_reservoir = 0.0;
};

struct DesignOptions {
  std::string gate;
  int segments = 3000;
  double dt = 10e-6;
  double amplitude = 2.0 * std::numbers::pi * 1.0e4;
  std::vector<double> rf_scales{0.95, 1.0, 1.05};
  bool collapse_ensemble = false;
  int max_iterations = 500;
  double target_fidelity = 0.99;
  std::string method = "lbfgs";
  std::string spin_system_name;
};

struct GradcheckOptions {
  int spins = 4;
  int segments = 50;
  int instances = 3;
  bool zero_amplitude = false;
  double target_spread = 0.3;
  double step = 1e-6;
  double tolerance = 1e-6;
};

struct EntropyOptions {
  std::string grid = "0:90:10";
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::size_t begin = 0;
  for (;;) {
    const auto colon = text.find(':', begin);
    const std::string tok = text.substr(begin, colon == std::string::npos ? colon : colon - begin);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw ConfigurationError("grid '" + text + "' must be start:stop:step in degrees");
    parts.push_back(v);
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 3) throw ConfigurationError("grid '" + text + "' must be start:stop:step");
  try {
    return eta_grid_degrees(parts[0], parts[1], parts[2]);
  } catch (const ArgumentError& e) {
    throw ConfigurationError(std::string("grid '") + text + "': " + e.what());
  }
}

SpinConfig spin_config_from(const CommonOptions& common) {
  if (common.spin_config.empty()) return SpinConfig{};
  return load_spin_config(common.spin_config);
}

void emit(const CommonOptions& common, const std::string& text, std::ostream& out) {
  if (common.out.empty()) {
    out << text;
  } else {
    write_text_file(common.out, text);
  }
}

int cmd_sweep(const CommonOptions& common, const SweepOptions& opt, std::ostream& out,
              std::ostream& err) {
  const SweepMode mode = parse_sweep_mode(opt.mode);
  const NormalisationScheme scheme = parse_normalisation(opt.scheme);
  const std::vector<double> grid = parse_grid(opt.grid);
  if (opt.repeats < 1) throw ConfigurationError("--repeats must be at least 1");
  auto has = [&](double eta) { return std::find(grid.begin(), grid.end(), eta) != grid.end(); };
  if (scheme != NormalisationScheme::kNone && !has(0.0))
    throw ConfigurationError("normalisation needs eta = 0 in the grid");
  if (scheme == NormalisationScheme::kSchemeB && !has(90.0))
    throw ConfigurationError("scheme B needs eta = 90 in the grid");
  const InteractionSchedule& schedule = standard_schedule();

  std::vector<SweepRecord> records;
  if (mode == SweepMode::kIdealGates) {
    records = run_sweep(IdealGates{}, grid, opt.repeats, schedule);
  } else {
    if (opt.pulse_dir.empty()) throw ConfigurationError("grape mode needs --pulse-dir");
    const SpinConfig config = spin_config_from(common);
    const PulseLibrary library = load_pulse_library(opt.pulse_dir, schedule, grid);
    const PulsedGates gates(library, ensemble_from_config(config),
                            parse_coupling_model(common.coupling_model), opt.rf_scales);
    records = run_sweep(gates, grid, opt.repeats, schedule);
  }
  try {
    records = normalise(std::move(records), scheme);
  } catch (const NormalisationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  emit(common, format_records(records), out);
  return kExitSuccess;
}

int cmd_converge(const CommonOptions& common, const ConvergeOptions& opt, std::ostream& out) {
  if (opt.map && opt.full) throw ConfigurationError("choose one of --map and --full");
  if (opt.n < 1) throw ConfigurationError("--n must be at least 1");
  if (std::abs(opt.f_system) > 1.0 || std::abs(opt.f_reservoir) > 1.0)
    throw ConfigurationError("polarisations must satisfy |f| <= 1");
  const double eta = degrees_to_radians(opt.eta_deg);
  std::ostringstream os;
  if (opt.map) {
    const auto fs = marginal_map_iterate(opt.f_system, opt.f_reservoir, eta, opt.n);
    os << "step,system_f,system_distance\n";
    os << 0 << ',' << format_double(opt.f_system) << ','
       << format_double(0.5 * std::abs(opt.f_system - opt.f_reservoir)) << '\n';
    for (std::size_t k = 0; k < fs.size(); ++k)
      os << k + 1 << ',' << format_double(fs[k]) << ','
         << format_double(0.5 * std::abs(fs[k] - opt.f_reservoir)) << '\n';
  } else {
    if (opt.n > kMaxChainReservoirs)
      throw ConfigurationError("full-state mode supports at most " +
                               std::to_string(kMaxChainReservoirs) +
                               " reservoir qubits; rerun with --map for larger chains");
    const HomogenisationTrace trace =
        homogenize_chain(state_from_f(opt.f_system), opt.f_reservoir, opt.n, eta);
    os << "step,system_f,system_distance,max_reservoir_distance";
    for (int k = 1; k <= opt.n; ++k) os << ",reservoir_" << k;
    os << '\n';
    for (const auto& s : trace.steps) {
      const double worst = *std::max_element(s.reservoir_distances.begin(), s.reservoir_distances.end());
      os << s.step << ',' << format_double(s.system_f) << ',' << format_double(s.system_distance)
         << ',' << format_double(worst);
      for (double d : s.reservoir_distances) os << ',' << format_double(d);
      os << '\n';
    }
  }
  emit(common, os.str(), out);
  return kExitSuccess;
}

int cmd_design(const CommonOptions& common, const DesignOptions& opt, std::ostream& out) {
  if (common.out.empty()) throw ConfigurationError("design needs --out for the pulse file");
  if (opt.segments < 1) throw ConfigurationError("--segments must be positive");
  const SpinConfig config = spin_config_from(common);
  const UnitaryMatrix target = target_gate(opt.gate, config.system);

  OptimizationConfig oc;
  oc.target_fidelity = opt.target_fidelity;
  oc.max_iterations = opt.max_iterations;
  oc.rf_scales = opt.rf_scales;
  oc.ensemble = opt.collapse_ensemble ? single_member_ensemble(config.system)
                                      : ensemble_from_config(config);
  oc.coupling_model = parse_coupling_model(common.coupling_model);
  oc.seed = common.seed;
  oc.method = parse_optimizer_method(opt.method);
  oc.validate();

  PulseSpec initial;
  initial.segment_duration = opt.dt;
  initial.amplitude = opt.amplitude;
  initial.phases = random_phases(opt.segments, oc.seed);
  initial.validate();

  const OptimizationResult result = optimize_pulse(target, oc, initial);

  PulseFile file;
  file.pulse = result.pulse;
  file.spin_system = opt.spin_system_name.empty()
                         ? (common.spin_config.empty() ? "crotonic" : common.spin_config)
                         : opt.spin_system_name;
  file.target = opt.gate;
  file.fidelity = result.report.fidelity;
  file.converged = result.report.converged;
  write_pulse_file(common.out, file);

  out << "gate " << opt.gate << '\n'
      << "fidelity " << format_double(result.report.fidelity) << '\n'
      << "worst_member_fidelity "
      << format_double(*std::min_element(result.report.member_fidelities.begin(),
                                         result.report.member_fidelities.end()))
      << '\n'
      << "gradient_norm " << format_double(result.report.gradient_norm) << '\n'
      << "iterations " << result.report.iterations << '\n'
      << "stop " << to_string(result.reason) << '\n'
      << "converged " << (result.report.converged ? 1 : 0) << '\n';
  return result.report.converged ? kExitSuccess : kExitNumericFailure;
}

SpinSystem gradcheck_system(int spins, std::mt19937_64& rng) {
  if (spins == 4) return crotonic_default();
  if (spins != 1 && spins != 2) throw ConfigurationError("--spins must be 1, 2 or 4");
  std::uniform_real_distribution<double> freq(-8000.0, 8000.0);
  std::uniform_real_distribution<double> coupling(10.0, 80.0);
  std::vector<std::string> labels;
  std::vector<double> freqs;
  for (int k = 0; k < spins; ++k) {
    labels.push_back(spin_label(k));
    freqs.push_back(freq(rng));
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(spins, spins);
  if (spins == 2) j(0, 1) = j(1, 0) = coupling(rng);
  return SpinSystem(labels, freqs, j);
}

int cmd_gradcheck(const CommonOptions& common, const GradcheckOptions& opt, std::ostream& out) {
  if (opt.segments < 1 || opt.instances < 1)
    throw ConfigurationError("--segments and --instances must be positive");
  const CouplingModel model = parse_coupling_model(common.coupling_model);
  std::mt19937_64 rng(common.seed);
  double worst = 0.0;
  std::size_t worst_segment = 0;
  int worst_instance = 0;
  for (int inst = 0; inst < opt.instances; ++inst) {
    const SpinSystem system = gradcheck_system(opt.spins, rng);
    const ComplexMatrix h0 = build_internal_hamiltonian(system, model);
    PulseSpec pulse;
    pulse.amplitude = opt.zero_amplitude ? 0.0 : 2.0 * std::numbers::pi * 1.0e4;
    pulse.segment_duration = 10e-6;
    pulse.phases = random_phases(opt.segments, rng());
    const UnitaryMatrix target =
        pulse_propagator(h0, perturbed_pulse(pulse, opt.target_spread, rng()), 1.0);

    const auto exact = exact_phase_gradient(h0, pulse, 1.0, target);
    const auto fd = finite_difference_gradient(h0, pulse, 1.0, target, opt.step);
    const GradientComparison cmp =
        compare_gradients(exact, fd, finite_difference_resolution(opt.step));
    double max_abs_grad = 0.0;
    for (double g : exact) max_abs_grad = std::max(max_abs_grad, std::abs(g));
    out << "instance " << inst << " max_relative_error " << format_double(cmp.max_relative_error)
        << " max_abs_gradient " << format_double(max_abs_grad) << '\n';
    if (cmp.max_relative_error > worst || inst == 0) {
      worst = std::max(worst, cmp.max_relative_error);
      worst_segment = cmp.worst_index;
      worst_instance = inst;
    }
  }
  out << "max_relative_error " << format_double(worst) << '\n';
  if (worst > opt.tolerance) {
    out << "FAIL: instance " << worst_instance << " segment " << worst_segment << " exceeds "
        << format_double(opt.tolerance) << '\n';
    return kExitNumericFailure;
  }
  out << "PASS\n";
  return kExitSuccess;
}

int cmd_entropy(const CommonOptions& common, const EntropyOptions& opt, std::ostream& out) {
  const std::vector<double> grid_deg = parse_grid(opt.grid);
  std::vector<double> grid;
  for (double d : grid_deg) grid.push_back(degrees_to_radians(d));
  emit(common, format_entropy_table(grid_deg, entropy_profile(grid)), out);
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum homogeniser simulation and phase-only GRAPE pulse design", "homog"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--threads", common.threads, "Cap on worker threads (default: all)");

  auto add_common = [&](CLI::App* sub, bool spin, bool seed) {
    sub->add_option("--out", common.out, "Output file (stdout when omitted)");
    if (spin) {
      sub->add_option("--spin-config", common.spin_config, "Spin-system config file")
          ->check(CLI::ExistingFile);
      sub->add_option("--coupling-model", common.coupling_model, "isotropic | weak")
          ->check(CLI::IsMember({"isotropic", "weak"}));
    }
    if (seed) sub->add_option("--seed", common.seed, "Random seed");
  };

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Eta sweep of the four-qubit homogeniser");
  add_common(sweep_cmd, true, false);
  sweep_cmd->add_option("--mode", sweep.mode, "ideal | grape")->check(CLI::IsMember({"ideal", "grape"}));
  sweep_cmd->add_option("--grid", sweep.grid, "start:stop:step in degrees");
  sweep_cmd->add_option("--repeats", sweep.repeats, "Repeats per eta");
  sweep_cmd->add_option("--scheme", sweep.scheme, "none | A | B")->check(CLI::IsMember({"none", "A", "B"}));
  sweep_cmd->add_option("--pulse-dir", sweep.pulse_dir, "Directory of <gate>.pulse files (grape mode)");
  sweep_cmd->add_option("--rf-scales", sweep.rf_scales, "RF amplitude multipliers (grape mode)");

  ConvergeOptions converge;
  auto* converge_cmd = app.add_subcommand("converge", "System convergence through N reservoir qubits");
  add_common(converge_cmd, false, false);
  converge_cmd->add_option("--eta", converge.eta_deg, "Coupling in degrees")->required();
  converge_cmd->add_option("--n", converge.n, "Number of reservoir qubits")->required();
  converge_cmd->add_flag("--map", converge.map, "Marginal map (any n)");
  converge_cmd->add_flag("--full", converge.full, "Full density-matrix simulation (default, n <= 9)");
  converge_cmd->add_option("--fs", converge.f_system, "Initial system polarisation");
  converge_cmd->add_option("--fr", converge.f_reservoir, "Reservoir polarisation");

  DesignOptions design;
  auto* design_cmd = app.add_subcommand("design", "Design a phase-only GRAPE pulse");
  add_common(design_cmd, true, true);
  design_cmd->add_option("--gate", design.gate, "Target gate name")->required();
  design_cmd->add_option("--segments", design.segments, "Number of segments");
  design_cmd->add_option("--dt", design.dt, "Segment duration in seconds");
  design_cmd->add_option("--amplitude", design.amplitude, "RF amplitude in rad/s");
  design_cmd->add_option("--rf-scales", design.rf_scales, "RF amplitude multipliers");
  design_cmd->add_flag("--collapse-ensemble", design.collapse_ensemble,
                       "Ignore protons and design for the bare spin system");
  design_cmd->add_option("--max-iter", design.max_iterations, "Iteration budget");
  design_cmd->add_option("--target-fidelity", design.target_fidelity, "Fidelity threshold");
  design_cmd->add_option("--method", design.method, "gradient | lbfgs")
      ->check(CLI::IsMember({"gradient", "lbfgs"}));
  design_cmd->add_option("--spin-system-name", design.spin_system_name,
                         "Spin-system reference stored in the pulse file");

  GradcheckOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Exact vs finite-difference GRAPE gradients");
  add_common(grad_cmd, false, true);
  grad_cmd->add_option("--coupling-model", common.coupling_model, "isotropic | weak")
      ->check(CLI::IsMember({"isotropic", "weak"}));
  grad_cmd->add_option("--spins", grad.spins, "1, 2 or 4 (crotonic)");
  grad_cmd->add_option("--segments", grad.segments, "Segments per pulse");
  grad_cmd->add_option("--instances", grad.instances, "Random instances");
  grad_cmd->add_flag("--zero-amplitude", grad.zero_amplitude, "Use Omega = 0");
  grad_cmd->add_option("--target-spread", grad.target_spread,
                       "Phase noise (rad) between the pulse and the pulse defining the target");
  grad_cmd->add_option("--step", grad.step, "Central-difference step (rad)");
  grad_cmd->add_option("--tolerance", grad.tolerance, "Maximum relative error");

  EntropyOptions entropy;
  auto* entropy_cmd = app.add_subcommand("entropy", "Single-qubit entropies over an eta grid");
  add_common(entropy_cmd, false, false);
  entropy_cmd->add_option("--grid", entropy.grid, "start:stop:step in degrees");

  std::vector<std::string> argv_storage{"homog"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitConfigError;
  }

  set_thread_count(common.threads);
  try {
    if (sweep_cmd->parsed()) return cmd_sweep(common, sweep, out, err);
    if (converge_cmd->parsed()) return cmd_converge(common, converge, out);
    if (design_cmd->parsed()) return cmd_design(common, design, out);
    if (grad_cmd->parsed()) return cmd_gradcheck(common, grad, out);
    if (entropy_cmd->parsed()) return cmd_entropy(common, entropy, out);
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  return kExitConfigError;
}

}  // namespace homog
