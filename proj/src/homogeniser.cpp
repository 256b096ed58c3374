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

#include "homog/homogeniser.hpp"

#include "homog/errors.hpp"
#include "homog/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace homog {
namespace {

using Layout = std::array<int, kChainLength>;
using SwapLayer = std::vector<std::pair<int, int>>;

constexpr Layout kIdentityLayout{kSpinA, kSpinB, kSpinC, kSpinD};
constexpr int kMiddleLeft = 1;
constexpr int kMiddleRight = 2;

const std::vector<SwapLayer>& routing_moves() {
  static const std::vector<SwapLayer> moves{{{0, 1}}, {{1, 2}}, {{2, 3}}, {{0, 1}, {2, 3}}};
  return moves;
}

Layout apply_layer(Layout layout, const SwapLayer& layer) {
  for (auto [a, b] : layer) std::swap(layout[a], layout[b]);
  return layout;
}

// Fewest SWAP layers from `start` to a layout satisfying `done`.
template <typename Pred>
std::vector<SwapLayer> shortest_route(const Layout& start, Pred done) {
  std::map<Layout, std::pair<Layout, int>> parent;
  std::deque<Layout> queue{start};
  parent.emplace(start, std::make_pair(start, -1));
  while (!queue.empty()) {
    const Layout current = queue.front();
    queue.pop_front();
    if (done(current)) {
      std::vector<SwapLayer> path;
      for (Layout at = current; parent.at(at).second >= 0; at = parent.at(at).first)
        path.push_back(routing_moves()[parent.at(at).second]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    const auto& moves = routing_moves();
    for (int m = 0; m < static_cast<int>(moves.size()); ++m) {
      const Layout next = apply_layer(current, moves[m]);
      if (parent.emplace(next, std::make_pair(current, m)).second) queue.push_back(next);
    }
  }
  throw ArgumentError("no chain route found");
}

// Maps position-ordered basis states onto logical qubit order.
ComplexMatrix relabel_matrix(const Layout& layout) {
  const Eigen::Index dim = Eigen::Index{1} << kChainLength;
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index j = 0;
    for (int pos = 0; pos < kChainLength; ++pos) {
      if ((i >> (kChainLength - 1 - pos)) & 1) j |= Eigen::Index{1} << (kChainLength - 1 - layout[pos]);
    }
    p(j, i) = 1.0;
  }
  return p;
}

std::string describe(const std::vector<Contact>& order) {
  std::ostringstream os;
  for (std::size_t i = 0; i < order.size(); ++i)
    os << (i ? " " : "") << '(' << spin_label(order[i].system) << ','
       << spin_label(order[i].reservoir) << ')';
  return os.str();
}

}  // namespace

UnitaryMatrix partial_swap_unitary(double eta) {
  if (!std::isfinite(eta)) throw ArgumentError("partial swap angle must be finite");
  return UnitaryMatrix::trusted(std::cos(eta) * identity(4) +
                                Complex(0.0, std::sin(eta)) * swap_matrix());
}

std::string spin_label(int spin) {
  if (spin < 0 || spin >= 26) throw ArgumentError("spin index out of range");
  return std::string(1, static_cast<char>('A' + spin));
}

InteractionSchedule::InteractionSchedule(std::vector<ScheduleStep> steps, bool adjacency_required)
    : steps_(std::move(steps)), adjacency_required_(adjacency_required) {
  Layout layout = kIdentityLayout;
  std::array<std::array<int, kChainLength>, kChainLength> met{};
  for (const auto& s : steps_) {
    if (s.position_a < 0 || s.position_a >= kChainLength || s.position_b < 0 ||
        s.position_b >= kChainLength || s.position_a == s.position_b)
      throw ArgumentError("schedule step acts on invalid positions");
    if (adjacency_required_ && std::abs(s.position_a - s.position_b) != 1)
      throw ArgumentError("schedule step acts on non-adjacent positions");
    if (s.kind == StepKind::kSwap) {
      std::swap(layout[s.position_a], layout[s.position_b]);
      continue;
    }
    int p = layout[s.position_a];
    int q = layout[s.position_b];
    if (is_reservoir_qubit(p)) std::swap(p, q);
    if (!is_system_qubit(p) || !is_reservoir_qubit(q))
      throw ArgumentError("partial swap must pair a system qubit with a reservoir qubit");
    ++met[p][q];
    contacts_.push_back({p, q});
  }
  for (int s : {kSpinA, kSpinB})
    for (int r : {kSpinC, kSpinD})
      if (met[s][r] != 1)
        throw ArgumentError("system qubit " + spin_label(s) + " must contact reservoir qubit " +
                            spin_label(r) + " exactly once");
  final_layout_ = layout;
}

int InteractionSchedule::partial_swap_count() const {
  return static_cast<int>(std::count_if(steps_.begin(), steps_.end(), [](const ScheduleStep& s) {
    return s.kind == StepKind::kPartialSwap;
  }));
}

int InteractionSchedule::layer_count() const {
  int layers = 0;
  for (const auto& s : steps_) layers = std::max(layers, s.layer + 1);
  return layers;
}

InteractionSchedule route_contacts(const std::vector<Contact>& order) {
  std::vector<ScheduleStep> steps;
  Layout layout = kIdentityLayout;
  int layer = 0;
  auto emit_route = [&](const std::vector<SwapLayer>& route) {
    for (const auto& moves : route) {
      for (auto [a, b] : moves) steps.push_back({StepKind::kSwap, a, b, layer});
      layout = apply_layer(layout, moves);
      ++layer;
    }
  };
  for (const Contact& c : order) {
    emit_route(shortest_route(layout, [&](const Layout& l) {
      return (l[kMiddleLeft] == c.system && l[kMiddleRight] == c.reservoir) ||
             (l[kMiddleLeft] == c.reservoir && l[kMiddleRight] == c.system);
    }));
    steps.push_back({StepKind::kPartialSwap, kMiddleLeft, kMiddleRight, layer++});
  }
  emit_route(shortest_route(layout, [](const Layout& l) { return l == kIdentityLayout; }));
  return InteractionSchedule(std::move(steps));
}

std::vector<double> validation_angles() {
  std::vector<double> out;
  for (double deg : {0.0, 10.0, 17.0, 30.0, 45.0, 52.5, 63.0, 80.0, 90.0})
    out.push_back(degrees_to_radians(deg));
  return out;
}

void validate_schedule(const InteractionSchedule& schedule) {
  for (double eta : validation_angles()) {
    const MarginalSet sim = simulate_homogeniser(eta, schedule);
    const MarginalSet ref = closed_form_marginals(eta);
    for (int q = 0; q < kChainLength; ++q) {
      if (std::abs(sim.f[q] - ref.f[q]) > 1e-10) {
        std::ostringstream os;
        os << "schedule " << describe(schedule.contacts()) << " gives f_" << spin_label(q) << " = "
           << sim.f[q] << " at eta = " << radians_to_degrees(eta) << " deg, closed form "
           << ref.f[q];
        throw ScheduleValidationError(os.str());
      }
    }
  }
}

std::vector<std::vector<Contact>> matching_contact_orders() {
  std::vector<int> perm{0, 1, 2, 3};
  std::vector<std::vector<Contact>> found;
  do {
    std::vector<Contact> order;
    for (int i : perm) order.push_back(kInitialGuessContactOrder[i]);
    try {
      validate_schedule(route_contacts(order));
      found.push_back(order);
    } catch (const ScheduleValidationError&) {
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

const InteractionSchedule& standard_schedule() {
  static const InteractionSchedule schedule = [] {
    InteractionSchedule s = route_contacts(kStandardContactOrder);
    validate_schedule(s);
    return s;
  }();
  return schedule;
}

DensityMatrix homogeniser_initial_state() {
  const DensityMatrix pure = basis_state(2, 0);
  return tensor_product(pure, maximally_mixed(2));
}

MarginalSet marginals(const DensityMatrix& rho) {
  if (rho.num_qubits() != kChainLength) throw ArgumentError("marginals expects four qubits");
  MarginalSet out;
  for (int q = 0; q < kChainLength; ++q) out.f[q] = polarisation(partial_trace(rho, {q}));
  return out;
}

UnitaryMatrix circuit_unitary(double eta, const InteractionSchedule& schedule) {
  const ComplexMatrix ps = partial_swap_unitary(eta).matrix();
  const ComplexMatrix sw = swap_matrix();
  ComplexMatrix u = identity(Eigen::Index{1} << kChainLength);
  for (const auto& s : schedule.steps()) {
    const ComplexMatrix& g = s.kind == StepKind::kPartialSwap ? ps : sw;
    u = kernels::embed_two_qubit(g, s.position_a, s.position_b, kChainLength) * u;
  }
  return UnitaryMatrix::trusted(relabel_matrix(schedule.final_layout()) * u);
}

DensityMatrix evolve_homogeniser(double eta, const InteractionSchedule& schedule) {
  const ComplexMatrix ps = partial_swap_unitary(eta).matrix();
  const ComplexMatrix sw = swap_matrix();
  ComplexMatrix rho = homogeniser_initial_state().matrix();
  for (const auto& s : schedule.steps())
    kernels::apply_two_qubit_gate(rho, s.kind == StepKind::kPartialSwap ? ps : sw, s.position_a,
                                  s.position_b);
  if (schedule.final_layout() != kIdentityLayout) {
    const ComplexMatrix p = relabel_matrix(schedule.final_layout());
    rho = p * rho * p.adjoint();
  }
  return DensityMatrix::trusted(std::move(rho));
}

MarginalSet simulate_homogeniser(double eta, const InteractionSchedule& schedule) {
  return marginals(evolve_homogeniser(eta, schedule));
}

MarginalSet closed_form_marginals(double eta) {
  const double c = std::cos(eta);
  const double c2 = c * c;
  const double c4 = c2 * c2;
  const double c6 = c4 * c2;
  const double c8 = c4 * c4;
  MarginalSet m;
  m.f[kSpinB] = c4;
  m.f[kSpinC] = 1.0 - c4;
  m.f[kSpinA] = 4.0 * c2 - 9.0 * c4 + 8.0 * c6 - 2.0 * c8;
  m.f[kSpinD] = 1.0 - m.f[kSpinA];
  return m;
}

double HomogenisationTrace::max_final_reservoir_distance() const {
  if (steps.empty() || steps.back().reservoir_distances.empty()) return 0.0;
  const auto& d = steps.back().reservoir_distances;
  return *std::max_element(d.begin(), d.end());
}

HomogenisationTrace homogenize_chain(const DensityMatrix& system, Polarisation reservoir_f,
                                     int n_reservoir, double eta) {
  if (system.num_qubits() != 1) throw ArgumentError("homogenize_chain: system must be one qubit");
  if (n_reservoir < 1) throw ArgumentError("homogenize_chain: need at least one reservoir qubit");
  if (n_reservoir > kMaxChainReservoirs)
    throw SizeError("homogenize_chain: full-state mode supports at most " +
                    std::to_string(kMaxChainReservoirs) +
                    " reservoir qubits; use the marginal map for larger chains");
  const DensityMatrix xi = state_from_f(reservoir_f);

  DensityMatrix joint = system;
  for (int k = 0; k < n_reservoir; ++k) joint = tensor_product(joint, xi);
  ComplexMatrix rho = joint.matrix();

  HomogenisationTrace trace;
  trace.eta = eta;
  trace.reservoir_f = reservoir_f;
  auto record = [&](int step) {
    const DensityMatrix state = DensityMatrix::trusted(rho);
    HomogenisationStep s;
    s.step = step;
    const DensityMatrix sys = partial_trace(state, {0});
    s.system_f = polarisation(sys);
    s.system_distance = trace_distance(sys, xi);
    for (int k = 1; k <= n_reservoir; ++k)
      s.reservoir_distances.push_back(trace_distance(partial_trace(state, {k}), xi));
    trace.steps.push_back(std::move(s));
  };

  const ComplexMatrix ps = partial_swap_unitary(eta).matrix();
  record(0);
  for (int k = 1; k <= n_reservoir; ++k) {
    kernels::apply_two_qubit_gate(rho, ps, 0, k);
    record(k);
  }
  return trace;
}

std::vector<Polarisation> marginal_map_iterate(Polarisation f_system, Polarisation f_reservoir,
                                               double eta, int n) {
  if (n < 0) throw ArgumentError("marginal_map_iterate: negative step count");
  const double c2 = std::cos(eta) * std::cos(eta);
  const double s2 = std::sin(eta) * std::sin(eta);
  std::vector<Polarisation> out;
  out.reserve(static_cast<std::size_t>(n));
  double f = f_system;
  for (int k = 0; k < n; ++k) {
    f = f * c2 + f_reservoir * s2;
    out.push_back(f);
  }
  return out;
}

std::vector<EntropyRow> entropy_profile(const std::vector<double>& eta_grid) {
  const InteractionSchedule& schedule = standard_schedule();
  std::vector<EntropyRow> rows(eta_grid.size());
  const auto count = static_cast<std::int64_t>(eta_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    EntropyRow& row = rows[static_cast<std::size_t>(i)];
    row.eta = eta_grid[static_cast<std::size_t>(i)];
    const MarginalSet sim = simulate_homogeniser(row.eta, schedule);
    const MarginalSet ref = closed_form_marginals(row.eta);
    for (int q = 0; q < kChainLength; ++q) {
      // Round-off can push |f| a few ulps past 1.
      row.entropy[q] = von_neumann_entropy(std::clamp(sim.f[q], -1.0, 1.0));
      row.theory_entropy[q] = von_neumann_entropy(std::clamp(ref.f[q], -1.0, 1.0));
    }
    row.sum = std::accumulate(row.entropy.begin(), row.entropy.end(), 0.0);
    row.theory_sum = std::accumulate(row.theory_entropy.begin(), row.theory_entropy.end(), 0.0);
  }
  return rows;
}

}  // namespace homog
