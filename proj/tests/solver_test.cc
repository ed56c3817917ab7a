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
#include <memory>

#include <gtest/gtest.h>

#include "sinexp/analysis.h"
#include "test_support.h"

namespace sinexp {
namespace {

using testing::CaseRng;

Vector V(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

ProblemInstance UnitSquareProblem() {
  return BoxL1Problem(V({2.0, 0.5}), V({0, 0}), V({1, 1}));
}

// f(x) = x + 1 on [0, 20]: f* = 1 at 0, ||s|| = 1 everywhere.
ProblemInstance Ramp() {
  return BoxL1Problem(V({-1.0}), V({0.0}), V({20.0}));
}

DynamicRule UnitBetaRule() {
  return DynamicRule{Sequence::Constant(1.0), 1.0, 1.0, 0.0};
}

SolverOptions ExactOptions() {
  SolverOptions options;
  options.params = ToleranceParams::Exact();
  return options;
}

TEST(StepAlgorithm1Test, FirstExogenousStepOnBall) {
  ProblemInstance problem{std::make_shared<const ShiftedL1>(V({3.0, 0.0})),
                          FeasibleSet::MakeBall(Vector::Zero(2), 1.0),
                          std::nullopt, std::nullopt, std::nullopt};
  // Minimizer of ||x - (3, 0)||_1 over the unit disk by grid search.
  Vector grid_best;
  double grid_value = 1e300;
  for (int i = 0; i < 4000; ++i) {
    const double a = 2.0 * std::acos(-1.0) * i / 4000;
    for (double r : {0.25, 0.5, 0.75, 1.0}) {
      const Vector x = r * V({std::cos(a), std::sin(a)});
      const double value = problem.objective->Value(x);
      if (value < grid_value) {
        grid_value = value;
        grid_best = x;
      }
    }
  }
  const Vector x_star = V({1.0, 0.0});
  EXPECT_LE((grid_best - x_star).norm(), 1e-2);

  const ToleranceParams params;
  const ExogenousRule rule{Sequence::Harmonic(1.0)};
  const SolverState state{0, Vector::Zero(2), 3.0, 0.0};
  const auto outcome = StepAlgorithm1(state, problem, params, rule);
  ASSERT_FALSE(outcome.stationary);
  EXPECT_EQ(outcome.vectors.s, V({-1.0, 0.0}));
  EXPECT_DOUBLE_EQ(outcome.record.t_k, 1.0);
  const Vector& x1 = outcome.next.x;
  EXPECT_TRUE(problem.set.Contains(x1, 1e-8));
  const double rho = RuleConstants::From(params).rho;
  EXPECT_LE((x1 - x_star).squaredNorm(),
            (state.x - x_star).squaredNorm() + rho * 1.0);
  EXPECT_LT((x1 - x_star).norm(), (state.x - x_star).norm());
  EXPECT_EQ(outcome.next.k, 1);
  EXPECT_DOUBLE_EQ(outcome.next.f_x, problem.objective->Value(x1));
}

TEST(StepAlgorithm1Test, ZeroPolyakStepIsAFixedPoint) {
  const auto problem = UnitSquareProblem();
  const PolyakRule rule = DefaultPolyakRule(*problem.f_star, {});
  const SolverState state{4, *problem.x_star, *problem.f_star, 0.0};
  const auto outcome = StepAlgorithm1(state, problem, {}, rule);
  EXPECT_EQ(outcome.record.t_k, 0.0);
  EXPECT_EQ(outcome.next.x, *problem.x_star);
  EXPECT_EQ(outcome.record.fw_inner_iterations, 1);
}

TEST(StepAlgorithm1Test, DynamicRuleNeedsLevel) {
  const auto problem = UnitSquareProblem();
  const SolverState state{0, V({0.5, 0.5}), 1.5, 0.0};
  EXPECT_THROW(StepAlgorithm1(state, problem, {}, DefaultDynamicRule({})),
               ContractViolation);
  const auto outcome =
      StepAlgorithm1(state, problem, {}, DefaultDynamicRule({}), {}, 1.0);
  EXPECT_DOUBLE_EQ(outcome.record.f_lev, 1.0);
  EXPECT_GT(outcome.record.t_tilde_k, 0.0);
}

TEST(StepAlgorithm1Test, StationaryPointStops) {
  ProblemInstance problem{ShiftedL1::Plain(2),
                          FeasibleSet::MakeBox(V({-1, -1}), V({1, 1})),
                          std::nullopt, std::nullopt, std::nullopt};
  const SolverState state{0, Vector::Zero(2), 0.0, 0.0};
  EXPECT_TRUE(StepAlgorithm1(state, problem, {}, ExogenousRule{}).stationary);
  const auto report = RunAlgorithm1(problem, Vector::Zero(2), ExogenousRule{});
  EXPECT_EQ(report.status, SolverStatus::kStationary);
  EXPECT_EQ(report.iterations, 0);
}

class FlatWithoutCertificate final : public Objective {
 public:
  std::string name() const override { return "flat"; }
  double Value(const Vector&) const override { return 1.0; }
  Vector Subgradient(const Vector& x, double) const override {
    return Vector::Zero(x.size());
  }
  bool IsStationary(const Vector&) const override { return false; }
};

TEST(RunAlgorithm1Test, ZeroSubgradientEndsPolyakRun) {
  ProblemInstance problem{std::make_shared<const FlatWithoutCertificate>(),
                          FeasibleSet::MakeBox(V({0, 0}), V({1, 1})), 0.0,
                          std::nullopt, std::nullopt};
  const auto report = RunAlgorithm1(problem, V({0.5, 0.5}),
                                    DefaultPolyakRule(0.0, {}));
  EXPECT_EQ(report.status, SolverStatus::kZeroSubgradient);
  EXPECT_TRUE(report.trace.records.empty());
}

TEST(RunAlgorithm1Test, PolyakReachesTargetWithFeasibleIterates) {
  const auto problem = UnitSquareProblem();
  SolverOptions options;
  options.target_gap = 1e-3;
  options.max_iterations = 5000;
  const auto report = RunAlgorithm1(problem, V({0.0, 0.0}),
                                    DefaultPolyakRule(1.0, {}), options);
  EXPECT_EQ(report.status, SolverStatus::kTargetReached);
  EXPECT_LE(report.f_rec - 1.0, 1e-3);
  EXPECT_EQ(report.rule, "polyak");
  ASSERT_TRUE(report.trace.has_iterates());
  for (const auto& rec : report.trace.records) {
    EXPECT_LE(rec.feasibility_residual, 1e-8);
    EXPECT_FALSE(std::isnan(rec.dist_to_xstar));
  }
  EXPECT_DOUBLE_EQ(problem.objective->Value(report.x_rec), report.f_rec);
}

TEST(RunAlgorithm1Test, PolyakFromOptimumStaysThere) {
  const auto problem = UnitSquareProblem();
  SolverOptions options;
  options.max_iterations = 10;
  const auto report = RunAlgorithm1(problem, *problem.x_star,
                                    DefaultPolyakRule(1.0, {}), options);
  EXPECT_EQ(report.status, SolverStatus::kBudget);
  ASSERT_EQ(report.trace.steps.size(), 10u);
  for (const auto& step : report.trace.steps) {
    EXPECT_EQ(step.x_next, *problem.x_star);
  }
}

TEST(RunAlgorithm1Test, BudgetAndIterateRetention) {
  const auto problem = UnitSquareProblem();
  SolverOptions options;
  options.max_iterations = 25;
  options.keep_iterates = false;
  const auto report =
      RunAlgorithm1(problem, V({0.0, 1.0}), ExogenousRule{}, options);
  EXPECT_EQ(report.status, SolverStatus::kBudget);
  EXPECT_EQ(report.iterations, 25);
  EXPECT_EQ(report.trace.records.size(), 25u);
  EXPECT_TRUE(report.trace.steps.empty());
  for (std::size_t k = 0; k < report.trace.records.size(); ++k) {
    EXPECT_EQ(report.trace.records[k].k, static_cast<std::int64_t>(k));
  }
}

TEST(RunAlgorithm1Test, ProjectionFailureKeepsTrace) {
  ProblemInstance problem{std::make_shared<const ShiftedL1>(V({3.0, 0.3})),
                          FeasibleSet::MakeBall(Vector::Zero(2), 1.0),
                          std::nullopt, std::nullopt, std::nullopt};
  SolverOptions options = ExactOptions();
  options.projection.max_inner = 2;
  options.projection.gap_floor = 1e-15;
  options.projection_retries = 0;
  const auto report =
      RunAlgorithm1(problem, V({0.0, 1.0}), ExogenousRule{}, options);
  EXPECT_EQ(report.status, SolverStatus::kProjectionFailed);
  EXPECT_NE(report.message.find("iteration"), std::string::npos);
}

TEST(RunAlgorithm1Test, RetriesRescueShortBudgets) {
  ProblemInstance problem{std::make_shared<const ShiftedL1>(V({3.0, 0.3})),
                          FeasibleSet::MakeBall(Vector::Zero(2), 1.0),
                          std::nullopt, std::nullopt, std::nullopt};
  SolverOptions options;
  options.projection.max_inner = 1;
  options.projection_retries = 6;
  options.max_iterations = 20;
  const auto report =
      RunAlgorithm1(problem, V({0.0, 1.0}), ExogenousRule{}, options);
  EXPECT_EQ(report.status, SolverStatus::kBudget);
}

TEST(RunAlgorithm1Test, RejectsBadInputs) {
  const auto problem = UnitSquareProblem();
  EXPECT_THROW(RunAlgorithm1(problem, V({0, 0}), DefaultDynamicRule({})),
               ContractViolation);
  EXPECT_THROW(RunAlgorithm1(problem, V({2, 0}), ExogenousRule{}),
               ContractViolation);
  const PolyakRule too_long{1.0, Sequence::Constant(1.0), 1.0, 1.0, 0.0};
  EXPECT_THROW(RunAlgorithm1(problem, V({0, 0}), too_long), ContractViolation);
  SolverOptions options;
  options.epsilon = 0.1;
  EXPECT_THROW(RunAlgorithm1(problem, V({0, 0}), ExogenousRule{}, options),
               ContractViolation);
}

TEST(RunAlgorithm1Test, EpsilonRespectsTheRuleCap) {
  const auto problem = UnitSquareProblem();
  const ExogenousRule rule{Sequence::Harmonic(1.0), 1.0};
  SolverOptions options;
  options.epsilon = 0.01;  // cap mu alpha_k = 1 / (k + 1) >= 0.01 for k < 100
  options.max_iterations = 100;
  EXPECT_EQ(RunAlgorithm1(problem, V({0, 0}), rule, options).status,
            SolverStatus::kBudget);
  options.max_iterations = 101;
  EXPECT_THROW(RunAlgorithm1(problem, V({0, 0}), rule, options),
               ContractViolation);
}

TEST(RunAlgorithm1Test, OracleContractAlongTrace) {
  CaseRng rng(61);
  const auto problem = UnitSquareProblem();
  SolverOptions options;
  options.max_iterations = 200;
  const auto report =
      RunAlgorithm1(problem, V({0.0, 1.0}), ExogenousRule{}, options);
  for (std::size_t k = 0; k < report.trace.steps.size(); k += 20) {
    const auto& step = report.trace.steps[k];
    const double f_x = problem.objective->Value(step.x);
    for (int i = 0; i < 100; ++i) {
      const Vector z = testing::RandomFeasiblePoint(problem.set, rng);
      EXPECT_GE(problem.objective->Value(z),
                f_x + step.s.dot(z - step.x) - step.eps - 1e-12);
    }
  }
}

TEST(RunSinexpdTest, DescentStartsNewGroup) {
  // k = 0: f = 10, f_lev = 8, t~ = 2 so x_1 = 7 and f(x_1) = 8 <= 10 - 1.
  LevelOptions level;
  level.delta0 = 2.0;
  level.radius.fixed = 4.0;
  SolverOptions options = ExactOptions();
  options.max_iterations = 2;
  const auto report =
      RunSinexpd(Ramp(), V({9.0}), UnitBetaRule(), level, options);
  ASSERT_EQ(report.trace.records.size(), 2u);
  const auto& first = report.trace.records[0];
  EXPECT_EQ(first.event, LevelEvent::kStart);
  EXPECT_DOUBLE_EQ(first.f_lev, 8.0);
  EXPECT_DOUBLE_EQ(first.t_tilde_k, 2.0);
  const auto& second = report.trace.records[1];
  EXPECT_EQ(second.event, LevelEvent::kDescent);
  EXPECT_EQ(second.ell, 1);
  EXPECT_DOUBLE_EQ(second.f_xk, 8.0);
  EXPECT_DOUBLE_EQ(second.delta_ell, 2.0);
  EXPECT_EQ(second.sigma, 0.0);
  EXPECT_DOUBLE_EQ(second.f_lev, 6.0);
}

TEST(RunSinexpdTest, OscillationHalvesDeltaAndResets) {
  // x_0 = 0.5 with delta = 2: the step overshoots to the bound x = 0, where
  // f = 1 never drops below the group record minus delta / 2 while sigma
  // grows past R = 1.
  LevelOptions level;
  level.delta0 = 2.0;
  level.radius.fixed = 1.0;
  SolverOptions options = ExactOptions();
  options.max_iterations = 6;
  const auto report =
      RunSinexpd(Ramp(), V({0.5}), UnitBetaRule(), level, options);
  const auto& records = report.trace.records;
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[0].event, LevelEvent::kStart);
  EXPECT_DOUBLE_EQ(records[0].t_tilde_k, 2.0);

  EXPECT_EQ(records[1].event, LevelEvent::kOscillation);
  EXPECT_DOUBLE_EQ(records[1].delta_ell, 1.0);
  EXPECT_EQ(records[1].sigma, 0.0);
  EXPECT_DOUBLE_EQ(records[1].f_rec, 1.0);
  EXPECT_DOUBLE_EQ(records[1].f_lev, 0.0);

  // sigma = 1 is not > R: the group continues.
  EXPECT_EQ(records[2].event, LevelEvent::kNone);
  EXPECT_DOUBLE_EQ(records[2].sigma, 1.0);
  EXPECT_EQ(records[3].event, LevelEvent::kOscillation);
  EXPECT_DOUBLE_EQ(records[3].delta_ell, 0.5);
  EXPECT_EQ(records[3].ell, 2);
  EXPECT_TRUE(CheckLevelStructure(report.trace, 1.0).passed);
}

TEST(RunSinexpdTest, RadiusDefaultsToFirstMove) {
  LevelOptions level;
  SolverOptions options;
  options.max_iterations = 3;
  const auto report =
      RunSinexpd(UnitSquareProblem(), V({0.0, 1.0}),
                 DefaultDynamicRule(options.params), level, options);
  ASSERT_TRUE(report.trace.has_iterates());
  const auto& step0 = report.trace.steps[0];
  EXPECT_DOUBLE_EQ(report.radius, (step0.x_next - step0.x).norm());
  // delta_0 = ||s_0|| / 2.
  EXPECT_DOUBLE_EQ(report.delta0, 0.5 * step0.s.norm());
}

TEST(RunSinexpdTest, RejectsBadLevelOptions) {
  LevelOptions level;
  level.delta0 = 0.0;
  EXPECT_THROW(RunSinexpd(Ramp(), V({1.0}), UnitBetaRule(), level),
               ContractViolation);
  level.delta0.reset();
  level.radius.fixed = -1.0;
  EXPECT_THROW(RunSinexpd(Ramp(), V({1.0}), UnitBetaRule(), level),
               ContractViolation);
}

TEST(RunSinexpdTest, RecoversSparsePointOnGeneratedInstance) {
  EllipsoidL1Spec spec;
  spec.n = 10;
  spec.seed = 2;
  const auto inst = GenerateInstance(spec);
  const SolverOptions options;
  const auto report = RunSinexpd(inst.problem, inst.center,
                                 DefaultDynamicRule(options.params), {},
                                 options);
  EXPECT_EQ(report.status, SolverStatus::kConverged);
  EXPECT_EQ((report.x_rec.array().abs() > 1e-6).count(), 1);
  EXPECT_LE(report.f_rec, inst.xi * (1 + 1e-3));
  EXPECT_LE(report.delta_final, 1e-3 * (1 + std::abs(report.f_rec)));
  for (const auto& rec : report.trace.records) {
    EXPECT_LE(rec.feasibility_residual, 1e-8);
    EXPECT_GT(rec.f_xk, rec.f_lev);
  }
  EXPECT_TRUE(CheckLevelStructure(report.trace, report.radius).passed);
  // The stopping test runs after the level update, so the final group may
  // have no step of its own.
  EXPECT_GE(report.groups, report.trace.records.back().ell);
  EXPECT_LE(report.groups, report.trace.records.back().ell + 1);
}

TEST(SolverStatusTest, Names) {
  EXPECT_EQ(SolverStatusName(SolverStatus::kStationary),
            "unconstrained-stationary");
  EXPECT_EQ(LevelEventName(ParseLevelEvent("oscillation")), "oscillation");
  EXPECT_THROW(ParseLevelEvent("sideways"), ContractViolation);
}

}  // namespace
}  // namespace sinexp
