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

#include "sinexp/solver.h"

#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "sinexp/barrier_lmo.h"

namespace sinexp {

namespace {

void RequireStart(const ProblemInstance& problem, const Vector& x0) {
  if (!problem.objective) throw ContractViolation("solver: missing objective");
  RequireDimension(x0, problem.set.dimension(), "solver x0");
  if (!problem.set.Contains(x0, 1e-8)) {
    throw ContractViolation("solver: x0 is not feasible");
  }
}

void RequireValid(const StepsizeRule& rule, const SolverOptions& options) {
  const RuleConstants constants =
      RuleConstants::From(options.params, RuleMu(rule));
  const ValidationReport report = Validate(rule, constants);
  if (!report.ok()) {
    throw ContractViolation("stepsize rule rejected: " + report.violations.front());
  }
  if (options.epsilon < 0.0) {
    throw ContractViolation("solver: epsilon must be >= 0");
  }
  if (options.epsilon > 0.0 && RuleMu(rule) == 0.0) {
    throw ContractViolation("solver: epsilon > 0 requires mu > 0");
  }
}

double DistanceTo(const std::optional<Vector>& target, const Vector& x) {
  return target ? (x - *target).norm() : kNaN;
}

}  // namespace

std::string_view LevelEventName(LevelEvent event) {
  switch (event) {
    case LevelEvent::kNone:
      return "none";
    case LevelEvent::kStart:
      return "start";
    case LevelEvent::kDescent:
      return "descent";
    case LevelEvent::kOscillation:
      return "oscillation";
  }
  return "none";
}

LevelEvent ParseLevelEvent(std::string_view name) {
  if (name == "start") return LevelEvent::kStart;
  if (name == "descent") return LevelEvent::kDescent;
  if (name == "oscillation") return LevelEvent::kOscillation;
  if (name == "none" || name.empty()) return LevelEvent::kNone;
  throw ContractViolation("unknown level event '" + std::string(name) + "'");
}

std::string_view SolverStatusName(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged:
      return "converged";
    case SolverStatus::kTargetReached:
      return "target-reached";
    case SolverStatus::kBudget:
      return "budget";
    case SolverStatus::kStationary:
      return "unconstrained-stationary";
    case SolverStatus::kZeroSubgradient:
      return "zero-subgradient";
    case SolverStatus::kProjectionFailed:
      return "projection-failed";
  }
  return "unknown";
}

StepOutcome StepAlgorithm1(const SolverState& state,
                           const ProblemInstance& problem,
                           const ToleranceParams& params,
                           const StepsizeRule& rule,
                           const ProjectionOptions& projection,
                           std::optional<double> f_lev,
                           int projection_retries) {
  const Objective& objective = *problem.objective;
  StepOutcome outcome;
  outcome.record.k = state.k;
  outcome.record.f_xk = state.f_x;
  if (objective.IsStationary(state.x)) {
    outcome.stationary = true;
    outcome.next = state;
    return outcome;
  }
  const Vector s = objective.Subgradient(state.x, state.eps);
  const double norm_s = s.norm();

  double t = 0.0;
  double t_tilde = kNaN;
  if (const auto* exo = std::get_if<ExogenousRule>(&rule)) {
    t = ExogenousStep(*exo, state.k, s);
  } else if (const auto* polyak = std::get_if<PolyakRule>(&rule)) {
    t = PolyakStep(*polyak, state.k, state.f_x, s);
  } else {
    if (!f_lev) throw ContractViolation("dynamic step requires a target level");
    const DynamicStep step = ComputeDynamicStep(std::get<DynamicRule>(rule),
                                                state.k, state.f_x, *f_lev, s);
    t = step.t;
    t_tilde = step.t_tilde;
  }
  if (state.eps > 0.0 &&
      state.eps > EpsilonCap(rule, state.k, state.f_x, f_lev.value_or(kNaN))) {
    throw ContractViolation("eps_k = " + std::to_string(state.eps) +
                            " exceeds the rule's cap at k = " +
                            std::to_string(state.k));
  }

  const Vector v = state.x - t * s;
  ProjectionOptions attempt = projection;
  if (attempt.max_inner <= 0) {
    attempt.max_inner = DefaultMaxInner(problem.set.dimension());
  }
  int spent = 0;
  ProjectionResult proj;
  for (int retry = 0;; ++retry) {
    try {
      proj = FwProject(problem.set, params, state.x, v, attempt);
      break;
    } catch (const ProjectionFailure& failure) {
      spent += failure.iterations();
      if (retry >= projection_retries ||
          attempt.max_inner > std::numeric_limits<int>::max() / 10) {
        throw;
      }
      attempt.max_inner *= 10;
    }
  }
  proj.inner_iterations += spent;

  outcome.next.k = state.k + 1;
  outcome.next.x = std::move(proj.point);
  outcome.next.f_x = objective.Value(outcome.next.x);
  outcome.next.eps = state.eps;

  TraceRecord& rec = outcome.record;
  rec.f_lev = f_lev.value_or(kNaN);
  rec.t_k = t;
  rec.t_tilde_k = t_tilde;
  rec.norm_s_k = norm_s;
  rec.fw_inner_iterations = proj.inner_iterations;
  rec.feasibility_residual = problem.set.FeasibilityResidual(outcome.next.x);
  rec.dist_to_xstar = DistanceTo(problem.x_star, state.x);

  outcome.vectors = StepVectors{state.x, s, outcome.next.x, state.eps};
  return outcome;
}

SolverReport RunAlgorithm1(const ProblemInstance& problem, const Vector& x0,
                           const StepsizeRule& rule,
                           const SolverOptions& options) {
  if (std::holds_alternative<DynamicRule>(rule)) {
    throw ContractViolation(
        "run_algorithm1: the dynamic rule needs level management (RunSinexpd)");
  }
  RequireStart(problem, x0);
  RequireValid(rule, options);
  const auto* polyak = std::get_if<PolyakRule>(&rule);

  SolverReport report;
  report.rule = RuleName(rule);
  SolverState state{0, x0, problem.objective->Value(x0), options.epsilon};
  report.f_rec = state.f_x;
  report.x_rec = x0;

  while (true) {
    if (state.f_x < report.f_rec) {
      report.f_rec = state.f_x;
      report.x_rec = state.x;
      report.k_rec = state.k;
    }
    if (polyak && options.target_gap &&
        report.f_rec - polyak->f_star <= *options.target_gap) {
      report.status = SolverStatus::kTargetReached;
      break;
    }
    if (state.k >= options.max_iterations) {
      report.status = SolverStatus::kBudget;
      break;
    }
    StepOutcome outcome;
    try {
      outcome = StepAlgorithm1(state, problem, options.params, rule,
                               options.projection, std::nullopt,
                               options.projection_retries);
    } catch (const ZeroSubgradientError& e) {
      report.status = SolverStatus::kZeroSubgradient;
      report.message = e.what();
      break;
    } catch (const SolverError& e) {
      report.status = SolverStatus::kProjectionFailed;
      report.message = "iteration " + std::to_string(state.k) + ": " + e.what();
      break;
    }
    if (outcome.stationary) {
      report.status = SolverStatus::kStationary;
      break;
    }
    outcome.record.f_rec = report.f_rec;
    report.total_inner_iterations += outcome.record.fw_inner_iterations;
    report.trace.records.push_back(outcome.record);
    if (options.keep_iterates) {
      report.trace.steps.push_back(std::move(outcome.vectors));
    }
    state = std::move(outcome.next);
  }
  report.iterations = state.k;
  report.x_final = state.x;
  return report;
}

SolverReport RunSinexpd(const ProblemInstance& problem, const Vector& x0,
                        const DynamicRule& rule, const LevelOptions& level,
                        const SolverOptions& options) {
  RequireStart(problem, x0);
  const StepsizeRule any_rule = rule;
  RequireValid(any_rule, options);
  if (level.delta0 && !(*level.delta0 > 0.0)) {
    throw ContractViolation("sinexpd: delta0 must be positive");
  }
  if (level.radius.fixed && !(*level.radius.fixed > 0.0)) {
    throw ContractViolation("sinexpd: R must be positive");
  }
  const Objective& objective = *problem.objective;

  SolverReport report;
  report.rule = RuleName(any_rule);
  report.radius = level.radius.fixed.value_or(kNaN);

  SolverState state{0, x0, objective.Value(x0), options.epsilon};
  double f_rec = std::numeric_limits<double>::infinity();
  Vector x_rec = x0;
  std::int64_t ell = 0;
  double group_record = kNaN;  // f^rec at k(ell)
  double delta = kNaN;
  double sigma = 0.0;

  while (true) {
    // Record update.
    if (state.f_x < f_rec) {
      f_rec = state.f_x;
      x_rec = state.x;
      report.k_rec = state.k;
    }
    if (objective.IsStationary(state.x)) {
      report.status = SolverStatus::kStationary;
      break;
    }

    LevelEvent event = LevelEvent::kNone;
    if (state.k == 0) {
      if (level.delta0) {
        delta = *level.delta0;
      } else {
        const double norm_s0 = objective.Subgradient(state.x, state.eps).norm();
        if (norm_s0 == 0.0) {
          report.status = SolverStatus::kZeroSubgradient;
          report.message = "delta0 = ||s_0|| / 2 is zero";
          break;
        }
        delta = 0.5 * norm_s0;
      }
      report.delta0 = delta;
      group_record = f_rec;
      event = LevelEvent::kStart;
    } else if (state.f_x <= group_record - 0.5 * delta) {
      // Sufficient descent: new group, same delta.
      ++ell;
      sigma = 0.0;
      group_record = f_rec;
      event = LevelEvent::kDescent;
    } else if (sigma > report.radius) {
      // Oscillation: new group, halve delta, restart from the record point.
      ++ell;
      sigma = 0.0;
      delta *= 0.5;
      state.x = x_rec;
      state.f_x = f_rec;
      group_record = f_rec;
      event = LevelEvent::kOscillation;
    }

    if (delta <= level.stop_relative * (1.0 + std::abs(f_rec))) {
      report.status = SolverStatus::kConverged;
      break;
    }
    if (state.k >= options.max_iterations) {
      report.status = SolverStatus::kBudget;
      break;
    }

    const double f_lev = group_record - delta;
    if (!(state.f_x - f_lev > 0.0)) {
      throw SolverError("sinexpd: invariant f(x_k) > f_lev violated at k = " +
                        std::to_string(state.k));
    }

    StepOutcome outcome;
    try {
      outcome = StepAlgorithm1(state, problem, options.params, any_rule,
                               options.projection, f_lev,
                               options.projection_retries);
    } catch (const ZeroSubgradientError& e) {
      report.status = SolverStatus::kZeroSubgradient;
      report.message = e.what();
      break;
    } catch (const SolverError& e) {
      report.status = SolverStatus::kProjectionFailed;
      report.message = "iteration " + std::to_string(state.k) + ": " + e.what();
      break;
    }
    if (outcome.stationary) {
      report.status = SolverStatus::kStationary;
      break;
    }

    TraceRecord& rec = outcome.record;
    rec.ell = ell;
    rec.f_rec = f_rec;
    rec.delta_ell = delta;
    rec.sigma = sigma;
    rec.event = event;

    // R = ||x_1 - x_0|| once x_1 exists; the k = 0 step cannot trigger the
    // oscillation test because sigma_0 = 0.
    if (state.k == 0 && !level.radius.fixed) {
      const double first_move = (outcome.next.x - state.x).norm();
      report.radius = first_move > 0.0 ? first_move : rec.t_tilde_k;
    }
    sigma += rec.t_tilde_k;

    report.total_inner_iterations += rec.fw_inner_iterations;
    report.trace.records.push_back(rec);
    if (options.keep_iterates) {
      report.trace.steps.push_back(std::move(outcome.vectors));
    }
    state = std::move(outcome.next);
  }

  report.iterations = state.k;
  report.groups = ell;
  report.x_final = state.x;
  report.x_rec = x_rec;
  report.f_rec = f_rec;
  report.delta_final = delta;
  return report;
}

}  // namespace sinexp
