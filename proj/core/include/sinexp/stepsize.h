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

#ifndef SINEXP_STEPSIZE_H_
#define SINEXP_STEPSIZE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "sinexp/inexact_projection.h"
#include "sinexp/types.h"

namespace sinexp {

// A pure sequence k -> value. Analytic properties (divergence of the sum,
// square summability) cannot be checked by machine, so every sequence
// declares them.
class Sequence {
 public:
  enum class Kind { kConstant, kHarmonic, kCustom };

  static Sequence Constant(double value);
  // scale / (k + 1)
  static Sequence Harmonic(double scale);
  static Sequence Custom(std::function<double(std::int64_t)> fn,
                         bool divergent_sum, bool square_summable);

  double operator()(std::int64_t k) const;

  Kind kind() const { return kind_; }
  // The constant value or the harmonic scale.
  double parameter() const { return parameter_; }
  bool divergent_sum() const { return divergent_sum_; }
  bool square_summable() const { return square_summable_; }

 private:
  Kind kind_ = Kind::kConstant;
  double parameter_ = 0.0;
  std::function<double(std::int64_t)> fn_;
  bool divergent_sum_ = true;
  bool square_summable_ = false;
};

// nu = (1 + 2 gamma) / (1 - 2 lambda), rho = nu + 2 mu.
struct RuleConstants {
  double mu = 0.0;
  double nu = 1.0;
  double rho = 1.0;

  static RuleConstants From(const ToleranceParams& params, double mu = 0.0);
};

struct ExogenousRule {
  Sequence alpha = Sequence::Harmonic(1.0);
  double mu = 0.0;
};

struct PolyakRule {
  double f_star = 0.0;
  Sequence beta = Sequence::Constant(0.5);
  double beta_low = 0.5;
  double beta_high = 0.5;
  double mu = 0.0;
};

struct DynamicRule {
  Sequence beta = Sequence::Constant(1.0);
  double beta_low = 1.0;
  double beta_high = 1.0;
  double mu = 0.0;
};

using StepsizeRule = std::variant<ExogenousRule, PolyakRule, DynamicRule>;

std::string RuleName(const StepsizeRule& rule);
double RuleMu(const StepsizeRule& rule);

// Constant beta = c (1 - 2 lambda) / (1 + 2 gamma) - 1e-6 with c = 2 for the
// dynamic rule and c = 1 for Polyak, i.e. just under the admissible cap.
DynamicRule DefaultDynamicRule(const ToleranceParams& params);
PolyakRule DefaultPolyakRule(double f_star, const ToleranceParams& params);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the admissibility conditions of each rule against nu and mu:
//   polyak:  0 < beta_low <= beta_k <= beta_high < 1 / (2 mu + nu)
//   dynamic: 0 < beta_low <= beta_k <= beta_high < 2 / (2 mu + nu)
//   exogenous: alpha_k > 0 for the first 1e6 terms, declared divergent and
//   square-summable.
ValidationReport Validate(const StepsizeRule& rule,
                          const RuleConstants& constants);

class ZeroSubgradientError : public SolverError {
 public:
  ZeroSubgradientError()
      : SolverError("step size undefined at a zero subgradient") {}
};

// t_k = alpha_k / max{1, ||s_k||}.
double ExogenousStep(const ExogenousRule& rule, std::int64_t k,
                     const Vector& s);

// t_k = beta_k (f(x_k) - f*) / ||s_k||^2.
double PolyakStep(const PolyakRule& rule, std::int64_t k, double f_xk,
                  const Vector& s);

struct DynamicStep {
  double t = 0.0;
  double t_tilde = 0.0;
};

// t~_k = beta_k (f(x_k) - f_lev) / ||s_k||, t_k = t~_k / ||s_k||.
DynamicStep ComputeDynamicStep(const DynamicRule& rule, std::int64_t k,
                               double f_xk, double f_lev, const Vector& s);

// Largest admissible eps_k for the rule; `reference` is f* (Polyak) or the
// target level (dynamic) and is ignored for the exogenous rule.
double EpsilonCap(const StepsizeRule& rule, std::int64_t k, double f_xk,
                  double reference);

}  // namespace sinexp

#endif  // SINEXP_STEPSIZE_H_
