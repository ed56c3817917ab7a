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

#ifndef SINEXP_ANALYSIS_H_
#define SINEXP_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinexp/feasible_set.h"
#include "sinexp/inexact_projection.h"
#include "sinexp/problems.h"
#include "sinexp/solver.h"
#include "sinexp/stepsize.h"
#include "sinexp/types.h"

namespace sinexp {

// Result of replaying a trace against one inequality. worst_margin is the
// signed slack (rhs - lhs) of the tightest instance; passed iff
// worst_margin >= -tolerance. Skipped checks pass vacuously.
struct CheckReport {
  std::string name;
  bool passed = true;
  bool skipped = false;
  // Computed against surrogate reference data; never fails a run.
  bool advisory = false;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::optional<std::int64_t> first_violation_k;
  // Estimated constant (c or Gamma) where the check needs one.
  std::optional<double> constant;
  std::string note;
  // Per-k worst margin, when the check is indexed by k.
  std::vector<double> margins;
};

// Feasible points for inequality probes: random convex combinations of LMO
// vertices and the canonical point. Deterministic in the seed.
std::vector<Vector> SampleProbes(const FeasibleSet& set, int count,
                                 std::uint64_t seed);

// ||x_{k+1} - x||^2 <= ||x_k - x||^2 + nu t_k^2 ||s_k||^2
//                      - 2 t_k [f(x_k) - f(x) - eps_k]
// for every step and probe. Requires kept iterates.
CheckReport CheckMainInequality(const Trace& trace, const Objective& objective,
                                const std::vector<Vector>& probes,
                                const RuleConstants& constants,
                                double tolerance = 1e-8);

// min_{k<=N} f(x_k) - f* <= Gamma (||x_0 - x*||^2 + rho sum alpha_k^2)
//                           / (2 sum alpha_k), sums over k = 0..N,
// with Gamma = max(1, max ||s_k||). Needs f* and dist_to_xstar.
CheckReport CheckExogenousComplexity(const Trace& trace,
                                     std::optional<double> f_star,
                                     const ExogenousRule& rule,
                                     const RuleConstants& constants,
                                     double tolerance = 1e-8);

// ||x_{k+1} - x*||^2 <= ||x_k - x*||^2 + rho alpha_k^2.
CheckReport CheckQuasiFejer(const Trace& trace, const Vector& x_star,
                            const ExogenousRule& rule,
                            const RuleConstants& constants,
                            double tolerance = 1e-8);

// Per step: ||x_{k+1} - x*||^2 <= ||x_k - x*||^2
//                                 - beta_low (f(x_k) - f*)^2 / ||s_k||^2,
// and for all N: min_{k<=N} f(x_k) - f* <= c ||x_0 - x*|| / sqrt(beta_low
// (N + 1)) with c = max ||s_k||.
CheckReport CheckPolyak(const Trace& trace, const Vector& x_star,
                        double f_star, const PolyakRule& rule,
                        double tolerance = 1e-8);

// ||x_{k+1} - x*|| <= ||x_k - x*|| + tolerance.
CheckReport CheckDistanceMonotone(const Trace& trace, const Vector& x_star,
                                  double tolerance = 1e-9);

// Level bookkeeping of a dynamic-rule trace: f_rec is the running minimum,
// f_lev = (group-start record) - delta, f(x_k) > f_lev, delta halves exactly
// at oscillation events and is constant otherwise, sigma resets exactly at
// group changes and accumulates t_tilde in between, and every event (or its
// absence) agrees with the descent and oscillation tests. `radius` enables
// the oscillation test.
CheckReport CheckLevelStructure(const Trace& trace,
                                std::optional<double> radius = std::nullopt);

struct DynamicBoundInputs {
  double f_star = 0.0;
  Vector x_star;
  double delta0 = 0.0;
  // Set when f_star / x_star are surrogates (best known values).
  bool surrogate = false;
};

// min_{k<=N} f(x_k) - f* <= delta_0 where N is the largest integer with
// sum_{k<N} beta_k [2 - (2 mu + nu) beta_k] delta_k^2 <= (c ||x_0 - x*||)^2,
// delta_k being the level gap in force at iteration k and c = max ||s_k||.
// When N lies beyond the trace the check passes only if the whole trace
// already attains the bound; otherwise it is reported inconclusive (skipped).
CheckReport CheckDynamicBound(const Trace& trace, const DynamicRule& rule,
                              const RuleConstants& constants,
                              const DynamicBoundInputs& inputs,
                              double tolerance = 1e-8);

// psi(w_k) - psi* <= 8 d^2 / k for k >= 1 with psi(w) = 0.5 ||w - v||^2 and
// psi* from the exact projection of v. d defaults to the set's diameter
// bound.
CheckReport CheckFwRate(const std::vector<GapSample>& history,
                        const FeasibleSet& set, const Vector& v,
                        std::optional<double> diameter = std::nullopt,
                        double tolerance = 1e-10);

struct VerifyInputs {
  const ProblemInstance* problem = nullptr;
  StepsizeRule rule;
  ToleranceParams params;
  // Level data for dynamic runs.
  std::optional<double> delta0;
  std::optional<double> radius;
  // Surrogate reference for the dynamic bound when f* is unknown.
  std::optional<double> f_surrogate;
  std::optional<Vector> x_surrogate;
  int probes = 20;
  std::uint64_t probe_seed = 1;
};

// Every checker that applies to the rule and the available reference data.
std::vector<CheckReport> RunApplicableChecks(const Trace& trace,
                                             const VerifyInputs& inputs);

// True iff every non-advisory report passed.
bool AllRequiredPassed(const std::vector<CheckReport>& reports);

}  // namespace sinexp

#endif  // SINEXP_ANALYSIS_H_
