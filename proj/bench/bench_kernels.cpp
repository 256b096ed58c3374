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

// Wall-clock comparison of the OpenMP kernels against their serial references.

#include "homog/grape.hpp"
#include "homog/homogeniser.hpp"
#include "homog/kernels.hpp"
#include "homog/parallel.hpp"
#include "homog/spin_system.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

namespace {

double seconds(const std::function<void()>& body, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count() / reps;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %10.4f ms  parallel %10.4f ms  speedup %5.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
  using namespace homog;
  std::printf("threads: %d\n", thread_count());

  const int n = 10;
  ComplexMatrix rho = ComplexMatrix::Random(1 << n, 1 << n);
  rho = (rho + rho.adjoint()).eval();
  const ComplexMatrix gate = partial_swap_unitary(degrees_to_radians(30.0)).matrix();
  const double t_ref = seconds([&] { rho = kernels::apply_two_qubit_gate_reference(rho, gate, 3, 7); }, 3);
  const double t_par = seconds([&] { kernels::apply_two_qubit_gate(rho, gate, 3, 7); }, 20);
  report("two-qubit gate, 10 qubits", t_ref, t_par);

  OptimizationConfig config;
  config.ensemble = environment_ensemble(crotonic_default(), Eigen::MatrixXd::Zero(5, 4), {2, 3, 4});
  config.rf_scales = {0.95, 1.0, 1.05};
  const UnitaryMatrix target = UnitaryMatrix::trusted(swap_matrix());
  std::vector<double> phases = random_phases(300, 7);
  RobustProblem problem(config, 2.0 * 3.141592653589793 * 1.0e4, 10e-6,
                        UnitaryMatrix::trusted(kernels::embed_two_qubit(target.matrix(), 1, 2, 4)));
  const double g_ser = seconds([&] { (void)problem.evaluate_serial(phases); }, 3);
  const double g_par = seconds([&] { (void)problem.evaluate(phases); }, 3);
  report("robust fidelity + gradient", g_ser, g_par);
  return 0;
}
