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

#include "sinexp/stepsize.h"

#include <cmath>
#include <sstream>
#include <utility>

namespace sinexp {

namespace {

constexpr std::int64_t kExogenousCheckTerms = 1'000'000;
constexpr std::int64_t kBetaCheckTerms = 10'000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string Format(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

void CheckBeta(const Sequence& beta, double low, double high, double cap,
               const char* cap_text, ValidationReport& report) {
  if (!(low > 0.0)) {
    report.violations.push_back("beta_low > 0 violated: beta_low = " +
                                Format(low));
  }
  if (!(low <= high)) {
    report.violations.push_back("beta_low <= beta_high violated: " +
                                Format(low) + " > " + Format(high));
  }
  if (!(high < cap)) {
    report.violations.push_back(std::string("beta_high < ") + cap_text +
                                " violated: beta_high = " + Format(high) +
                                ", bound = " + Format(cap));
  }
  const std::int64_t terms =
      beta.kind() == Sequence::Kind::kConstant ? 1 : kBetaCheckTerms;
  for (std::int64_t k = 0; k < terms; ++k) {
    const double b = beta(k);
    if (!(b >= low && b <= high)) {
      report.violations.push_back("beta_low <= beta_k <= beta_high violated at k = " +
                                  std::to_string(k) + ": beta_k = " + Format(b));
      break;
    }
  }
}

double RequireNonzeroNorm(const Vector& s) {
  const double norm = s.norm();
  if (norm == 0.0) throw ZeroSubgradientError();
  return norm;
}

}  // namespace

Sequence Sequence::Constant(double value) {
  Sequence seq;
  seq.kind_ = Kind::kConstant;
  seq.parameter_ = value;
  seq.divergent_sum_ = value > 0.0;
  seq.square_summable_ = value == 0.0;
  return seq;
}

Sequence Sequence::Harmonic(double scale) {
  Sequence seq;
  seq.kind_ = Kind::kHarmonic;
  seq.parameter_ = scale;
  seq.divergent_sum_ = scale > 0.0;
  seq.square_summable_ = true;
  return seq;
}

Sequence Sequence::Custom(std::function<double(std::int64_t)> fn,
                          bool divergent_sum, bool square_summable) {
  Sequence seq;
  seq.kind_ = Kind::kCustom;
  seq.fn_ = std::move(fn);
  seq.divergent_sum_ = divergent_sum;
  seq.square_summable_ = square_summable;
  return seq;
}

double Sequence::operator()(std::int64_t k) const {
  switch (kind_) {
    case Kind::kConstant:
      return parameter_;
    case Kind::kHarmonic:
      return parameter_ / static_cast<double>(k + 1);
    case Kind::kCustom:
      return fn_(k);
  }
  return 0.0;
}

RuleConstants RuleConstants::From(const ToleranceParams& params, double mu) {
  params.Validate();
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ContractViolation("rule constants: mu must be >= 0");
  }
  RuleConstants c;
  c.mu = mu;
  c.nu = (1.0 + 2.0 * params.gamma) / (1.0 - 2.0 * params.lambda);
  c.rho = c.nu + 2.0 * mu;
  return c;
}

std::string RuleName(const StepsizeRule& rule) {
  return std::visit(Overloaded{
                        [](const ExogenousRule&) { return std::string("exogenous"); },
                        [](const PolyakRule&) { return std::string("polyak"); },
                        [](const DynamicRule&) { return std::string("dynamic"); },
                    },
                    rule);
}

double RuleMu(const StepsizeRule& rule) {
  return std::visit([](const auto& r) { return r.mu; }, rule);
}

DynamicRule DefaultDynamicRule(const ToleranceParams& params) {
  const double beta =
      2.0 * (1.0 - 2.0 * params.lambda) / (1.0 + 2.0 * params.gamma) - 1e-6;
  return DynamicRule{Sequence::Constant(beta), beta, beta, 0.0};
}

PolyakRule DefaultPolyakRule(double f_star, const ToleranceParams& params) {
  const double beta =
      (1.0 - 2.0 * params.lambda) / (1.0 + 2.0 * params.gamma) - 1e-6;
  return PolyakRule{f_star, Sequence::Constant(beta), beta, beta, 0.0};
}

ValidationReport Validate(const StepsizeRule& rule,
                          const RuleConstants& constants) {
  ValidationReport report;
  const double mu = RuleMu(rule);
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    report.violations.push_back("mu >= 0 violated: mu = " + Format(mu));
    return report;
  }
  const double denom = 2.0 * mu + constants.nu;
  std::visit(
      Overloaded{
          [&](const ExogenousRule& r) {
            if (!r.alpha.divergent_sum()) {
              report.violations.push_back(
                  "sum alpha_k = infinity not declared by the sequence");
            }
            if (!r.alpha.square_summable()) {
              report.violations.push_back(
                  "sum alpha_k^2 < infinity not declared by the sequence");
            }
            const std::int64_t terms =
                r.alpha.kind() == Sequence::Kind::kConstant ? 1
                                                            : kExogenousCheckTerms;
            for (std::int64_t k = 0; k < terms; ++k) {
              const double a = r.alpha(k);
              if (!(a > 0.0) || !std::isfinite(a)) {
                report.violations.push_back("alpha_k > 0 violated at k = " +
                                            std::to_string(k));
                break;
              }
            }
          },
          [&](const PolyakRule& r) {
            if (!std::isfinite(r.f_star)) {
              report.violations.push_back("f* must be finite and known");
            }
            CheckBeta(r.beta, r.beta_low, r.beta_high, 1.0 / denom,
                      "1/(2 mu + nu)", report);
          },
          [&](const DynamicRule& r) {
            CheckBeta(r.beta, r.beta_low, r.beta_high, 2.0 / denom,
                      "2/(2 mu + nu)", report);
          },
      },
      rule);
  return report;
}

double ExogenousStep(const ExogenousRule& rule, std::int64_t k,
                     const Vector& s) {
  const double alpha = rule.alpha(k);
  if (!(alpha > 0.0)) {
    throw ContractViolation("exogenous step: alpha_k must be positive");
  }
  return alpha / std::max(1.0, s.norm());
}

double PolyakStep(const PolyakRule& rule, std::int64_t k, double f_xk,
                  const Vector& s) {
  const double norm = RequireNonzeroNorm(s);
  double gap = f_xk - rule.f_star;
  if (gap < 0.0) {
    if (gap < -1e-12 * (1.0 + std::abs(rule.f_star))) {
      throw ContractViolation("polyak step: f(x_k) < f*; f* is not a lower bound");
    }
    gap = 0.0;
  }
  return rule.beta(k) * gap / (norm * norm);
}

DynamicStep ComputeDynamicStep(const DynamicRule& rule, std::int64_t k,
                               double f_xk, double f_lev, const Vector& s) {
  const double norm = RequireNonzeroNorm(s);
  if (f_xk < f_lev) {
    throw ContractViolation("dynamic step: f(x_k) below the target level");
  }
  DynamicStep step;
  step.t_tilde = rule.beta(k) * (f_xk - f_lev) / norm;
  step.t = step.t_tilde / norm;
  return step;
}

double EpsilonCap(const StepsizeRule& rule, std::int64_t k, double f_xk,
                  double reference) {
  return std::visit(
      Overloaded{
          [&](const ExogenousRule& r) { return r.mu * r.alpha(k); },
          [&](const PolyakRule& r) {
            return r.mu * r.beta(k) * std::max(0.0, f_xk - r.f_star);
          },
          [&](const DynamicRule& r) {
            return r.mu * r.beta(k) * std::max(0.0, f_xk - reference);
          },
      },
      rule);
}

}  // namespace sinexp
