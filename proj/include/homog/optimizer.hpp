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

#include <functional>
#include <string>
#include <vector>

namespace homog {

enum class OptimizerMethod {
  kGradientAscent,  // steepest ascent, backtracking line search
  kQuasiNewton,     // L-BFGS direction, same line search
};

OptimizerMethod parse_optimizer_method(const std::string& name);
std::string to_string(OptimizerMethod method);

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

using Objective = std::function<ValueAndGradient(const std::vector<double>&)>;

struct AscentOptions {
  OptimizerMethod method = OptimizerMethod::kGradientAscent;
  int max_iterations = 500;
  double target_value = 1.0;
  double gradient_tolerance = 1e-10;
  int lbfgs_memory = 12;
};

enum class StopReason { kTargetReached, kSmallGradient, kMaxIterations, kLineSearchFailed };
std::string to_string(StopReason reason);

struct AscentResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> gradient;
  int iterations = 0;
  StopReason reason = StopReason::kMaxIterations;
  /// Objective after each accepted step, starting with the initial point.
  std::vector<double> history;
};

/// Maximises `objective` from `x0`. Every accepted step satisfies the Armijo
/// condition, so `history` is non-decreasing.
AscentResult maximize(const Objective& objective, std::vector<double> x0,
                      const AscentOptions& options);

}  // namespace homog
