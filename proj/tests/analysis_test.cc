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

#include "sinexp/analysis.h"

#include <cmath>

#include <gtest/gtest.h>

#include "sinexp/io.h"
#include "test_support.h"

namespace sinexp {
namespace {

Vector V(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

const ProblemInstance& SquareProblem() {
  static const ProblemInstance problem =
      BoxL1Problem(V({2.0, 0.5}), V({0, 0}), V({1, 1}));
  return problem;
}

SolverReport ExogenousRun(std::int64_t iterations) {
  SolverOptions options;
  options.max_iterations = iterations;
  return RunAlgorithm1(SquareProblem(), V({0.0, 1.0}), ExogenousRule{},
                       options);
}

SolverReport PolyakRun() {
  SolverOptions options;
  options.target_gap = 1e-6;
  options.max_iterations = 200;
  return RunAlgorithm1(SquareProblem(), V({0.0, 0.0}),
                       DefaultPolyakRule(1.0, options.params), options);
}

SolverReport DynamicRun() {
  SolverOptions options;
  return RunSinexpd(SquareProblem(), V({0.0, 1.0}),
                    DefaultDynamicRule(options.params), {}, options);
}

const RuleConstants kConstants = RuleConstants::From(ToleranceParams{});

TEST(SampleProbesTest, DeterministicAndFeasible) {
  const auto& set = SquareProblem().set;
  const auto a = SampleProbes(set, 30, 4);
  const auto b = SampleProbes(set, 30, 4);
  ASSERT_EQ(a.size(), 30u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(set.Contains(a[i], 1e-12));
  }
  EXPECT_NE(SampleProbes(set, 1, 5)[0], a[0]);
}

TEST(MainInequalityTest, HoldsAlongSolverTraces) {
  const auto probes = SampleProbes(SquareProblem().set, 20, 1);
  for (const auto& report : {ExogenousRun(300), PolyakRun(), DynamicRun()}) {
    const auto check = CheckMainInequality(
        report.trace, *SquareProblem().objective, probes, kConstants);
    EXPECT_TRUE(check.passed) << report.rule << " " << check.worst_margin;
    EXPECT_EQ(check.margins.size(), report.trace.records.size());
  }
}

TEST(MainInequalityTest, ExactProjectionStepsPass) {
  auto report = ExogenousRun(100);
  for (std::size_t i = 0; i < report.trace.steps.size(); ++i) {
    auto& step = report.trace.steps[i];
    step.x_next = SquareProblem().set.ExactProject(
        step.x - report.trace.records[i].t_k * step.s);
  }
  const auto check = CheckMainInequality(
      report.trace, *SquareProblem().objective,
      SampleProbes(SquareProblem().set, 20, 2), kConstants);
  EXPECT_TRUE(check.passed);
}

TEST(MainInequalityTest, DetectsOutwardPerturbation) {
  auto report = ExogenousRun(100);
  const auto& set = SquareProblem().set;
  const std::size_t bad = 60;
  auto& step = report.trace.steps[bad];
  const Vector outward = (step.x_next - V({0.5, 0.5})).normalized();
  step.x_next += 0.1 * set.diameter_bound() * outward;
  const auto check =
      CheckMainInequality(report.trace, *SquareProblem().objective,
                          SampleProbes(set, 20, 3), kConstants);
  EXPECT_FALSE(check.passed);
  EXPECT_LT(check.worst_margin, 0.0);
  ASSERT_TRUE(check.first_violation_k.has_value());
  EXPECT_EQ(*check.first_violation_k, static_cast<std::int64_t>(bad));
}

TEST(MainInequalityTest, RequiresIterates) {
  auto report = ExogenousRun(5);
  report.trace.steps.clear();
  EXPECT_THROW(CheckMainInequality(report.trace, *SquareProblem().objective,
                                   {}, kConstants),
               ContractViolation);
}

TEST(ExogenousComplexityTest, HoldsForLongRun) {
  const auto report = ExogenousRun(2000);
  const auto check = CheckExogenousComplexity(
      report.trace, SquareProblem().f_star, ExogenousRule{}, kConstants);
  EXPECT_TRUE(check.passed);
  EXPECT_FALSE(check.skipped);
  EXPECT_EQ(check.margins.size(), 2000u);
  EXPECT_GE(*check.constant, 1.0);
}

TEST(ExogenousComplexityTest, SingleTermBound) {
  const auto report = ExogenousRun(1);
  const auto& rec = report.trace.records[0];
  const double gamma = std::max(1.0, rec.norm_s_k);
  const double d0 = (V({0.0, 1.0}) - *SquareProblem().x_star).norm();
  const double bound = gamma * (d0 * d0 + kConstants.rho) / 2.0;
  const auto check = CheckExogenousComplexity(
      report.trace, SquareProblem().f_star, ExogenousRule{}, kConstants);
  EXPECT_NEAR(check.worst_margin, bound - (rec.f_xk - 1.0), 1e-12);
}

TEST(ExogenousComplexityTest, SkippedWithoutOptimalValue) {
  const auto check = CheckExogenousComplexity(ExogenousRun(5).trace,
                                              std::nullopt, ExogenousRule{},
                                              kConstants);
  EXPECT_TRUE(check.skipped);
  EXPECT_TRUE(check.passed);
}

TEST(ExogenousComplexityTest, SmallerNuTightensTheBound) {
  const auto trace = ExogenousRun(500).trace;
  RuleConstants halved = kConstants;
  halved.nu *= 0.5;
  halved.rho = halved.nu + 2.0 * halved.mu;
  const auto honest = CheckExogenousComplexity(trace, SquareProblem().f_star,
                                               ExogenousRule{}, kConstants);
  const auto squeezed = CheckExogenousComplexity(
      trace, SquareProblem().f_star, ExogenousRule{}, halved);
  EXPECT_LE(squeezed.worst_margin, honest.worst_margin);
}

TEST(QuasiFejerTest, HoldsForExogenousRun) {
  const auto check = CheckQuasiFejer(ExogenousRun(500).trace,
                                     *SquareProblem().x_star, ExogenousRule{},
                                     kConstants);
  EXPECT_TRUE(check.passed);
}

TEST(PolyakCheckTest, HoldsForPolyakRun) {
  const auto report = PolyakRun();
  const PolyakRule rule = DefaultPolyakRule(1.0, {});
  EXPECT_TRUE(
      CheckPolyak(report.trace, *SquareProblem().x_star, 1.0, rule).passed);
  EXPECT_TRUE(
      CheckDistanceMonotone(report.trace, *SquareProblem().x_star).passed);
}

TEST(PolyakCheckTest, StartingAtOptimumIsTrivial) {
  SolverOptions options;
  options.max_iterations = 5;
  const PolyakRule rule = DefaultPolyakRule(1.0, {});
  const auto report = RunAlgorithm1(SquareProblem(), *SquareProblem().x_star,
                                    rule, options);
  const auto check =
      CheckPolyak(report.trace, *SquareProblem().x_star, 1.0, rule);
  EXPECT_TRUE(check.passed);
  EXPECT_EQ(check.worst_margin, 0.0);
}

TEST(PolyakCheckTest, OverlongStepsFailDescent) {
  // beta = 1.9 is past the admissible cap; the solver would refuse it, so
  // the steps are taken one by one.
  const PolyakRule rule{1.0, Sequence::Constant(1.9), 1.9, 1.9, 0.0};
  Trace trace;
  SolverState state{0, V({0.0, 0.0}), SquareProblem().objective->Value(
                                          V({0.0, 0.0})),
                    0.0};
  for (int i = 0; i < 5; ++i) {
    auto outcome = StepAlgorithm1(state, SquareProblem(), {}, rule);
    trace.records.push_back(outcome.record);
    trace.steps.push_back(outcome.vectors);
    state = outcome.next;
  }
  const auto check = CheckPolyak(trace, *SquareProblem().x_star, 1.0, rule);
  EXPECT_FALSE(check.passed);
  EXPECT_EQ(check.first_violation_k, 0);
}

TEST(DistanceMonotoneTest, DetectsMoveAway) {
  auto report = PolyakRun();
  report.trace.steps[1].x_next = V({0.0, 0.0});
  const auto check =
      CheckDistanceMonotone(report.trace, *SquareProblem().x_star);
  EXPECT_FALSE(check.passed);
  EXPECT_EQ(check.first_violation_k, 1);
}

TEST(LevelStructureTest, HoldsForDynamicRun) {
  const auto report = DynamicRun();
  const auto check = CheckLevelStructure(report.trace, report.radius);
  EXPECT_TRUE(check.passed) << check.note;
  int halvings = 0;
  for (const auto& rec : report.trace.records) {
    halvings += rec.event == LevelEvent::kOscillation;
  }
  EXPECT_NE(check.note.find(std::to_string(halvings) + " halvings"),
            std::string::npos);
}

// Each corruption breaks exactly one bookkeeping rule.
TEST(LevelStructureTest, DetectsCorruptedBookkeeping) {
  const auto base = DynamicRun();
  const auto& records = base.trace.records;
  ASSERT_GT(records.size(), 5u);
  std::size_t inner = 0;  // a record without an event
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].event == LevelEvent::kNone) {
      inner = i;
      break;
    }
  }
  ASSERT_GT(inner, 0u);

  struct Corruption {
    const char* expected;
    std::function<void(Trace&)> apply;
  };
  const std::vector<Corruption> corruptions = {
      {"running minimum", [](Trace& t) { t.records[2].f_rec -= 0.5; }},
      {"delta changed inside a group",
       [&](Trace& t) { t.records[inner].delta_ell *= 0.5; }},
      {"sigma is not the running sum",
       [&](Trace& t) { t.records[inner].sigma += 1e-3; }},
      {"f_lev != group record - delta",
       [&](Trace& t) { t.records[inner].f_lev -= 1e-9; }},
      {"group counter mismatch",
       [&](Trace& t) { t.records[inner].ell += 1; }},
      {"first record does not start a group",
       [](Trace& t) { t.records[0].event = LevelEvent::kNone; }},
  };
  for (const auto& corruption : corruptions) {
    Trace trace = base.trace;
    corruption.apply(trace);
    const auto check = CheckLevelStructure(trace, base.radius);
    EXPECT_FALSE(check.passed) << corruption.expected;
    EXPECT_NE(check.note.find(corruption.expected), std::string::npos)
        << check.note;
  }
}

TEST(LevelStructureTest, RequiresLevelFields) {
  EXPECT_THROW(CheckLevelStructure(PolyakRun().trace), ContractViolation);
}

TEST(DynamicBoundTest, HoldsWithKnownOptimum) {
  const auto report = DynamicRun();
  const auto rule = DefaultDynamicRule({});
  const auto check = CheckDynamicBound(
      report.trace, rule, kConstants,
      {1.0, *SquareProblem().x_star, report.delta0, false});
  EXPECT_TRUE(check.passed) << check.note;
  EXPECT_FALSE(check.advisory);
}

TEST(DynamicBoundTest, SurrogateIsAdvisory) {
  EllipsoidL1Spec spec;
  spec.n = 10;
  spec.seed = 1;
  const auto inst = GenerateInstance(spec);
  const SolverOptions options;
  const auto report = RunSinexpd(inst.problem, inst.center,
                                 DefaultDynamicRule(options.params), {},
                                 options);
  const auto check = CheckDynamicBound(
      report.trace, DefaultDynamicRule(options.params), kConstants,
      {report.f_rec, report.x_rec, report.delta0, true});
  EXPECT_TRUE(check.advisory);
  EXPECT_TRUE(AllRequiredPassed({check}));
}

TEST(DynamicBoundTest, InconclusiveWhenTraceEndsEarly) {
  // Two steps far from the optimum: N lies beyond the trace.
  SolverOptions options;
  options.max_iterations = 2;
  const auto report =
      RunSinexpd(SquareProblem(), V({0.0, 1.0}),
                 DefaultDynamicRule(options.params), {}, options);
  const auto check = CheckDynamicBound(
      report.trace, DefaultDynamicRule({}), kConstants,
      {1.0, *SquareProblem().x_star, 1e-9, false});
  EXPECT_TRUE(check.skipped);
}

TEST(FwRateTest, BallAndBox) {
  const auto ball = FeasibleSet::MakeBall(Vector::Zero(2), 1.0);
  ProjectionOptions options;
  options.record_history = true;
  options.gap_floor = 0.0;
  options.max_inner = 1000;
  std::vector<GapSample> history;
  try {
    history = FwProject(ball, ToleranceParams::Exact(), V({0, 1}), V({2, 0}),
                        options)
                  .gap_history;
  } catch (const ProjectionFailure&) {
    FAIL() << "history is needed from a completed run";
  }
  EXPECT_TRUE(CheckFwRate(history, ball, V({2, 0}), 2.0).passed);

  const auto box = FeasibleSet::MakeBox(V({0, 0}), V({1, 1}));
  const auto result = FwProject(box, ToleranceParams::Exact(), V({0, 0}),
                                V({3, 3}), options);
  const auto check = CheckFwRate(result.gap_history, box, V({3, 3}));
  EXPECT_TRUE(check.passed);
  EXPECT_DOUBLE_EQ(*check.constant, std::sqrt(2.0));
}

TEST(FwRateTest, DetectsSlowHistoryAndUnsupportedSets) {
  const auto box = FeasibleSet::MakeBox(V({0, 0}), V({1, 1}));
  const std::vector<GapSample> history = {{1, -1.0, 100.0}};
  EXPECT_FALSE(CheckFwRate(history, box, V({3, 3})).passed);
  EXPECT_THROW(CheckFwRate(history, FeasibleSet::MakeSimplex(2), V({3, 3})),
               ContractViolation);
}

TEST(RunApplicableChecksTest, GatesOnRuleAndReferenceData) {
  auto problem = SquareProblem();
  problem.f_star.reset();
  problem.x_star.reset();
  SolverOptions options;
  options.max_iterations = 50;
  const auto report =
      RunAlgorithm1(problem, V({0.0, 1.0}), ExogenousRule{}, options);
  VerifyInputs inputs;
  inputs.problem = &problem;
  inputs.rule = ExogenousRule{};
  const auto checks = RunApplicableChecks(report.trace, inputs);
  ASSERT_EQ(checks.size(), 3u);
  EXPECT_EQ(checks[0].name, "main_inequality");
  EXPECT_TRUE(checks[0].passed);
  EXPECT_EQ(checks[1].name, "exogenous_complexity");
  EXPECT_TRUE(checks[1].skipped);
  EXPECT_TRUE(checks[2].skipped);
  EXPECT_TRUE(AllRequiredPassed(checks));
}

TEST(RunApplicableChecksTest, PureFunctionOfInputs) {
  const auto report = DynamicRun();
  VerifyInputs inputs;
  inputs.problem = &SquareProblem();
  inputs.rule = DefaultDynamicRule({});
  inputs.radius = report.radius;
  inputs.delta0 = report.delta0;
  const auto first = RunApplicableChecks(report.trace, inputs);
  const auto second = RunApplicableChecks(report.trace, inputs);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(ToJson(first[i]).dump(), ToJson(second[i]).dump());
  }
  EXPECT_TRUE(AllRequiredPassed(first));
}

TEST(AllRequiredPassedTest, AdvisoryAndSkippedNeverFail) {
  CheckReport failed;
  failed.passed = false;
  CheckReport advisory = failed;
  advisory.advisory = true;
  CheckReport skipped = failed;
  skipped.skipped = true;
  EXPECT_TRUE(AllRequiredPassed({advisory, skipped}));
  EXPECT_FALSE(AllRequiredPassed({advisory, failed}));
}

}  // namespace
}  // namespace sinexp
