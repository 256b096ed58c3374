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

#include "homog/optimizer.hpp"

#include "homog/errors.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace homog {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion on the minimisation problem -f; returns an ascent direction.
std::vector<double> lbfgs_direction(const std::vector<double>& grad,
                                    const std::deque<CurvaturePair>& memory) {
  std::vector<double> q(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) q[i] = -grad[i];
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    alpha[k] = memory[k].rho * dot(memory[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * memory[k].y[i];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const double beta = memory[k].rho * dot(memory[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += memory[k].s[i] * (alpha[k] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

OptimizerMethod parse_optimizer_method(const std::string& name) {
  if (name == "gradient" || name == "gradient-ascent") return OptimizerMethod::kGradientAscent;
  if (name == "lbfgs" || name == "quasi-newton") return OptimizerMethod::kQuasiNewton;
  throw ArgumentError("unknown optimizer method '" + name + "'");
}

std::string to_string(OptimizerMethod method) {
  return method == OptimizerMethod::kGradientAscent ? "gradient" : "lbfgs";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTargetReached:
      return "target reached";
    case StopReason::kSmallGradient:
      return "gradient below tolerance";
    case StopReason::kMaxIterations:
      return "iteration limit";
    case StopReason::kLineSearchFailed:
      return "line search failed";
  }
  return "unknown";
}

AscentResult maximize(const Objective& objective, std::vector<double> x0,
                      const AscentOptions& options) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 50;

  AscentResult result;
  result.x = std::move(x0);
  ValueAndGradient current = objective(result.x);
  result.history.push_back(current.value);
  std::deque<CurvaturePair> memory;
  double step = 1.0;

  auto finish = [&](StopReason reason) {
    result.value = current.value;
    result.gradient = current.gradient;
    result.reason = reason;
    return result;
  };

  for (;;) {
    if (current.value >= options.target_value) return finish(StopReason::kTargetReached);
    if (norm(current.gradient) < options.gradient_tolerance)
      return finish(StopReason::kSmallGradient);
    if (result.iterations >= options.max_iterations) return finish(StopReason::kMaxIterations);

    std::vector<double> direction = current.gradient;
    if (options.method == OptimizerMethod::kQuasiNewton) {
      direction = lbfgs_direction(current.gradient, memory);
      if (dot(direction, current.gradient) <= 0.0) {
        memory.clear();
        direction = current.gradient;
      }
      step = memory.empty() ? 1.0 / std::max(1.0, norm(direction)) : 1.0;
    }
    const double slope = dot(direction, current.gradient);

    bool accepted = false;
    std::vector<double> trial(result.x.size());
    ValueAndGradient next;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = result.x[i] + step * direction[i];
      next = objective(trial);
      if (std::isfinite(next.value) && next.value >= current.value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return finish(StopReason::kLineSearchFailed);
    if (next.value < current.value) throw std::logic_error("accepted step decreased the objective");

    if (options.method == OptimizerMethod::kQuasiNewton) {
      CurvaturePair pair;
      pair.s.resize(trial.size());
      pair.y.resize(trial.size());
      for (std::size_t i = 0; i < trial.size(); ++i) {
        pair.s[i] = trial[i] - result.x[i];
        pair.y[i] = current.gradient[i] - next.gradient[i];
      }
      const double sy = dot(pair.s, pair.y);
      if (sy > 1e-12 * norm(pair.s) * norm(pair.y)) {
        pair.rho = 1.0 / sy;
        memory.push_back(std::move(pair));
        if (static_cast<int>(memory.size()) > options.lbfgs_memory) memory.pop_front();
      }
    } else {
      // Barzilai-Borwein guess for the next trial step, doubling as fallback.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        const double si = trial[i] - result.x[i];
        ss += si * si;
        sy += si * (current.gradient[i] - next.gradient[i]);
      }
      step = sy > 0.0 ? ss / sy : 2.0 * step;
    }
    result.x = trial;
    current = std::move(next);
    ++result.iterations;
    result.history.push_back(current.value);
  }
}

}  // namespace homog
