// Copyright 2026 The sinexp Authors
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

#ifndef SINEXP_SOLVER_H_
#define SINEXP_SOLVER_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinexp/inexact_projection.h"
#include "sinexp/problems.h"
#include "sinexp/stepsize.h"
#include "sinexp/types.h"

namespace sinexp {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Why a level group started at this iteration.
enum class LevelEvent { kNone, kStart, kDescent, kOscillation };

std::string_view LevelEventName(LevelEvent event);
LevelEvent ParseLevelEvent(std::string_view name);

// One outer iteration. Values refer to the point the step was taken from
// (after a level reset, if any); feasibility_residual is that of x_{k+1}.
// Fields that do not apply to the rule are NaN.
struct TraceRecord {
  std::int64_t k = 0;
  std::int64_t ell = 0;
  double f_xk = kNaN;
  double f_rec = kNaN;
  double f_lev = kNaN;
  double delta_ell = kNaN;
  double sigma = kNaN;
  double t_k = kNaN;
  double t_tilde_k = kNaN;
  double norm_s_k = kNaN;
  int fw_inner_iterations = 0;
  double feasibility_residual = kNaN;
  double dist_to_xstar = kNaN;
  LevelEvent event = LevelEvent::kNone;
};

struct StepVectors {
  Vector x;       // x_k
  Vector s;       // s_k
  Vector x_next;  // x_{k+1}
  double eps = 0.0;
};

// Append-only; `steps` is filled only when iterates are kept.
struct Trace {
  std::vector<TraceRecord> records;
  std::vector<StepVectors> steps;

  bool has_iterates() const {
    return !records.empty() && steps.size() == records.size();
  }
};

struct SolverState {
  std::int64_t k = 0;
  Vector x;
  double f_x = 0.0;
  double eps = 0.0;
};

struct StepOutcome {
  bool stationary = false;  // 0 in df(x_k): no step was taken
  SolverState next;
  TraceRecord record;
  StepVectors vectors;
};

// Algorithm 1 step: s_k from the oracle, t_k from the rule, then
// x_{k+1} = fw_project(C, params, x_k, x_k - t_k s_k). The dynamic rule
// requires `f_lev`. A projection that runs out of inner iterations is
// restarted up to `projection_retries` times with ten times the budget.
StepOutcome StepAlgorithm1(const SolverState& state,
                           const ProblemInstance& problem,
                           const ToleranceParams& params,
                           const StepsizeRule& rule,
                           const ProjectionOptions& projection = {},
                           std::optional<double> f_lev = std::nullopt,
                           int projection_retries = 0);

enum class SolverStatus {
  kConverged,
  kTargetReached,
  kBudget,
  kStationary,
  kZeroSubgradient,
  kProjectionFailed,
};

std::string_view SolverStatusName(SolverStatus status);

struct SolverOptions {
  ToleranceParams params;
  ProjectionOptions projection;
  // Restarts of a projection that exhausted its budget, each with ten times
  // the previous budget.
  int projection_retries = 3;
  std::int64_t max_iterations = 100'000;
  bool keep_iterates = true;
  // Constant eps_k handed to the subgradient oracle; must respect the rule's
  // cap when mu > 0.
  double epsilon = 0.0;
  // Polyak only: stop once f_rec - f* <= target_gap.
  std::optional<double> target_gap;
};

struct RadiusPolicy {
  // R = ||x_1 - x_0|| unless a fixed positive value is given.
  std::optional<double> fixed;
};

struct LevelOptions {
  // delta_0 = ||s_0|| / 2 unless given.
  std::optional<double> delta0;
  RadiusPolicy radius;
  // Stop once delta_ell <= stop_relative (1 + |f_rec|).
  double stop_relative = 1e-3;
};

struct SolverReport {
  SolverStatus status = SolverStatus::kBudget;
  std::string message;
  std::string rule;
  std::int64_t iterations = 0;  // k at termination
  std::int64_t groups = 0;      // ell at termination
  Vector x_final;
  Vector x_rec;
  double f_rec = kNaN;
  std::int64_t k_rec = 0;
  double delta0 = kNaN;
  double delta_final = kNaN;
  double radius = kNaN;
  std::int64_t total_inner_iterations = 0;
  Trace trace;
};

// Algorithm 1 with the exogenous or Polyak rule.
SolverReport RunAlgorithm1(const ProblemInstance& problem, const Vector& x0,
                           const StepsizeRule& rule,
                           const SolverOptions& options = {});

// Algorithm 1 driven by the dynamic rule with target-level management:
// record values, iteration groups, path length sigma and delta halving.
SolverReport RunSinexpd(const ProblemInstance& problem, const Vector& x0,
                        const DynamicRule& rule,
                        const LevelOptions& level = {},
                        const SolverOptions& options = {});

}  // namespace sinexp

#endif  // SINEXP_SOLVER_H_
