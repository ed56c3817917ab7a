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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace sinexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates margins into a report.
class Margins {
 public:
  Margins(CheckReport& report, std::size_t steps) : report_(report) {
    report_.margins.assign(steps, kInf);
  }

  void Add(std::int64_t k, double margin) {
    if (std::isnan(margin)) margin = -kInf;
    if (k >= 0 && static_cast<std::size_t>(k) < report_.margins.size()) {
      report_.margins[k] = std::min(report_.margins[k], margin);
    }
    if (margin < report_.worst_margin) report_.worst_margin = margin;
    if (margin < -report_.tolerance && !report_.first_violation_k) {
      report_.first_violation_k = k;
    }
  }

  void Finish() { report_.passed = report_.worst_margin >= -report_.tolerance; }

 private:
  CheckReport& report_;
};

CheckReport Start(std::string name, double tolerance) {
  CheckReport report;
  report.name = std::move(name);
  report.tolerance = tolerance;
  return report;
}

CheckReport Skip(std::string name, std::string why) {
  CheckReport report;
  report.name = std::move(name);
  report.skipped = true;
  report.note = std::move(why);
  return report;
}

void RequireIterates(const Trace& trace, const char* check) {
  if (!trace.has_iterates()) {
    throw ContractViolation(std::string(check) +
                            ": trace is missing x_k, s_k or x_{k+1}");
  }
}

double MaxSubgradientNorm(const Trace& trace) {
  double c = 0.0;
  for (const TraceRecord& r : trace.records) c = std::max(c, r.norm_s_k);
  return c;
}

// (||x_k - x*||, ||x_{k+1} - x*||) per step, from kept iterates when present
// and from the dist_to_xstar column otherwise (the last step then has no
// successor distance and is dropped).
std::vector<std::pair<double, double>> DistancePairs(
    const Trace& trace, const std::optional<Vector>& x_star,
    const char* check) {
  std::vector<std::pair<double, double>> pairs;
  if (trace.has_iterates() && x_star) {
    for (const StepVectors& step : trace.steps) {
      pairs.emplace_back((step.x - *x_star).norm(),
                         (step.x_next - *x_star).norm());
    }
    return pairs;
  }
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const double a = trace.records[i].dist_to_xstar;
    const double b = trace.records[i + 1].dist_to_xstar;
    if (std::isnan(a) || std::isnan(b)) {
      throw ContractViolation(std::string(check) +
                              ": trace has no distances to x*");
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

double InitialDistance(const Trace& trace, const std::optional<Vector>& x_star,
                       const char* check) {
  if (trace.records.empty()) return 0.0;
  if (x_star && !trace.steps.empty()) return (trace.steps[0].x - *x_star).norm();
  const double d = trace.records[0].dist_to_xstar;
  if (std::isnan(d)) {
    throw ContractViolation(std::string(check) +
                            ": trace has no distance ||x_0 - x*||");
  }
  return d;
}

std::string Format(double value) {
  std::ostringstream out;
  out.precision(6);
  out << value;
  return out.str();
}

}  // namespace

std::vector<Vector> SampleProbes(const FeasibleSet& set, int count,
                                 std::uint64_t seed) {
  if (count < 0) throw ContractViolation("probe count must be >= 0");
  const Eigen::Index n = set.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  constexpr int kVertices = 3;
  std::vector<Vector> probes;
  probes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector point = set.CanonicalPoint();
    double weight_sum = 1.0;
    Vector mix = point;
    for (int j = 0; j < kVertices; ++j) {
      Vector c(n);
      for (Eigen::Index d = 0; d < n; ++d) c[d] = normal(rng);
      const double w = unit(rng);
      mix += w * set.Lmo(c);
      weight_sum += w;
    }
    probes.push_back(mix / weight_sum);
  }
  return probes;
}

CheckReport CheckMainInequality(const Trace& trace, const Objective& objective,
                                const std::vector<Vector>& probes,
                                const RuleConstants& constants,
                                double tolerance) {
  RequireIterates(trace, "main inequality");
  CheckReport report = Start("main_inequality", tolerance);
  Margins margins(report, trace.records.size());
  std::vector<double> f_probe;
  f_probe.reserve(probes.size());
  for (const Vector& x : probes) f_probe.push_back(objective.Value(x));

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepVectors& step = trace.steps[i];
    const TraceRecord& rec = trace.records[i];
    const double t = rec.t_k;
    const double f_xk = objective.Value(step.x);
    const double s2 = step.s.squaredNorm();
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Vector& x = probes[p];
      const double lhs = (step.x_next - x).squaredNorm();
      const double rhs = (step.x - x).squaredNorm() +
                         constants.nu * t * t * s2 -
                         2.0 * t * (f_xk - f_probe[p] - step.eps);
      margins.Add(rec.k, rhs - lhs);
    }
  }
  margins.Finish();
  report.note = std::to_string(probes.size()) + " probes, nu = " +
                Format(constants.nu);
  return report;
}

CheckReport CheckExogenousComplexity(const Trace& trace,
                                     std::optional<double> f_star,
                                     const ExogenousRule& rule,
                                     const RuleConstants& constants,
                                     double tolerance) {
  if (!f_star) return Skip("exogenous_complexity", "f* unknown");
  CheckReport report = Start("exogenous_complexity", tolerance);
  Margins margins(report, trace.records.size());
  const double gamma = std::max(1.0, MaxSubgradientNorm(trace));
  const double d0 = InitialDistance(trace, std::nullopt, "exogenous complexity");
  double sum_alpha = 0.0;
  double sum_alpha2 = 0.0;
  double min_gap = kInf;
  for (const TraceRecord& rec : trace.records) {
    const double alpha = rule.alpha(rec.k);
    sum_alpha += alpha;
    sum_alpha2 += alpha * alpha;
    min_gap = std::min(min_gap, rec.f_xk - *f_star);
    const double bound =
        gamma * (d0 * d0 + constants.rho * sum_alpha2) / (2.0 * sum_alpha);
    margins.Add(rec.k, bound - min_gap);
  }
  margins.Finish();
  report.constant = gamma;
  report.note = "Gamma = max(1, max ||s_k||) = " + Format(gamma);
  return report;
}

CheckReport CheckQuasiFejer(const Trace& trace, const Vector& x_star,
                            const ExogenousRule& rule,
                            const RuleConstants& constants, double tolerance) {
  RequireIterates(trace, "quasi-Fejer");
  CheckReport report = Start("quasi_fejer", tolerance);
  Margins margins(report, trace.records.size());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepVectors& step = trace.steps[i];
    const std::int64_t k = trace.records[i].k;
    const double alpha = rule.alpha(k);
    const double rhs =
        (step.x - x_star).squaredNorm() + constants.rho * alpha * alpha;
    margins.Add(k, rhs - (step.x_next - x_star).squaredNorm());
  }
  margins.Finish();
  return report;
}

CheckReport CheckPolyak(const Trace& trace, const Vector& x_star,
                        double f_star, const PolyakRule& rule,
                        double tolerance) {
  CheckReport report = Start("polyak", tolerance);
  Margins margins(report, trace.records.size());
  const auto pairs = DistancePairs(trace, x_star, "polyak");
  const double c = MaxSubgradientNorm(trace);
  const double d0 = InitialDistance(trace, x_star, "polyak");

  double worst_descent = kInf;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const TraceRecord& rec = trace.records[i];
    const double gap = rec.f_xk - f_star;
    const double decrease =
        rec.norm_s_k > 0.0
            ? rule.beta_low * gap * gap / (rec.norm_s_k * rec.norm_s_k)
            : 0.0;
    const auto [dk, dk1] = pairs[i];
    const double margin = dk * dk - decrease - dk1 * dk1;
    worst_descent = std::min(worst_descent, margin);
    margins.Add(rec.k, margin);
  }

  double worst_bound = kInf;
  double min_gap = kInf;
  for (const TraceRecord& rec : trace.records) {
    min_gap = std::min(min_gap, rec.f_xk - f_star);
    const double bound =
        c * d0 / std::sqrt(rule.beta_low * static_cast<double>(rec.k + 1));
    worst_bound = std::min(worst_bound, bound - min_gap);
    margins.Add(rec.k, bound - min_gap);
  }
  margins.Finish();
  report.constant = c;
  report.note = "per-step descent margin " + Format(worst_descent) +
                ", complexity bound margin " + Format(worst_bound) +
                ", c = " + Format(c);
  return report;
}

CheckReport CheckDistanceMonotone(const Trace& trace, const Vector& x_star,
                                  double tolerance) {
  CheckReport report = Start("distance_monotone", tolerance);
  Margins margins(report, trace.records.size());
  const auto pairs = DistancePairs(trace, x_star, "distance monotone");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    margins.Add(trace.records[i].k, pairs[i].first - pairs[i].second);
  }
  margins.Finish();
  return report;
}

CheckReport CheckLevelStructure(const Trace& trace,
                                std::optional<double> radius) {
  CheckReport report = Start("level_structure", 0.0);
  Margins margins(report, trace.records.size());
  std::vector<std::string> failures;
  auto expect = [&](std::int64_t k, double margin, const char* what) {
    margins.Add(k, margin);
    if (margin < 0.0 && failures.size() < 5) {
      failures.push_back(std::string(what) + " at k = " + std::to_string(k));
    }
  };
  auto equal = [](double a, double b) {
    return a == b ? 0.0 : -std::abs(a - b);
  };

  double running_min = kInf;
  double group_record = kNaN;
  std::int64_t ell = 0;
  int halvings = 0;
  const TraceRecord* prev = nullptr;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    const std::int64_t k = r.k;
    expect(k, k == static_cast<std::int64_t>(i) ? 0.0 : -1.0,
           "k is not consecutive");
    if (std::isnan(r.f_lev) || std::isnan(r.delta_ell) || std::isnan(r.sigma)) {
      throw ContractViolation("level structure: trace lacks level fields");
    }

    running_min = std::min(running_min, r.f_xk);
    expect(k, equal(r.f_rec, running_min), "f_rec is not the running minimum");

    if (i == 0) {
      expect(k, r.event == LevelEvent::kStart ? 0.0 : -1.0,
             "first record does not start a group");
      expect(k, r.sigma == 0.0 ? 0.0 : -std::abs(r.sigma), "sigma_0 != 0");
      group_record = r.f_rec;
    } else {
      expect(k, r.event != LevelEvent::kStart ? 0.0 : -1.0,
             "start event after k = 0");
      const double threshold = group_record - 0.5 * prev->delta_ell;
      const double accumulated = prev->sigma + prev->t_tilde_k;
      switch (r.event) {
        case LevelEvent::kDescent:
          ++ell;
          expect(k, threshold - r.f_xk, "descent event without descent");
          expect(k, equal(r.delta_ell, prev->delta_ell),
                 "delta changed at a descent event");
          expect(k, equal(r.sigma, 0.0), "sigma not reset at a group change");
          group_record = r.f_rec;
          break;
        case LevelEvent::kOscillation:
          ++ell;
          ++halvings;
          expect(k, equal(r.delta_ell, 0.5 * prev->delta_ell),
                 "delta not halved at an oscillation event");
          expect(k, equal(r.sigma, 0.0), "sigma not reset at a group change");
          expect(k, equal(r.f_xk, r.f_rec),
                 "oscillation did not restart from the record point");
          if (radius) {
            expect(k, accumulated - *radius, "oscillation with sigma <= R");
          }
          group_record = r.f_rec;
          break;
        default:
          expect(k, r.f_xk > threshold ? 0.0 : r.f_xk - threshold,
                 "missed descent event");
          expect(k, equal(r.delta_ell, prev->delta_ell),
                 "delta changed inside a group");
          expect(k, equal(r.sigma, accumulated),
                 "sigma is not the running sum of t_tilde");
          if (radius) {
            expect(k, *radius - accumulated, "missed oscillation event");
          }
          break;
      }
      expect(k, prev->delta_ell - r.delta_ell, "delta increased");
    }
    expect(k, r.ell == ell ? 0.0 : -1.0, "group counter mismatch");
    expect(k, equal(r.f_lev, group_record - r.delta_ell),
           "f_lev != group record - delta");
    expect(k, r.f_lev < r.f_rec ? 0.0 : r.f_rec - r.f_lev - 1e-300,
           "f_lev >= f_rec");
    expect(k, r.f_xk > r.f_lev ? 0.0 : r.f_xk - r.f_lev - 1e-300,
           "f(x_k) <= f_lev");
    prev = &r;
  }
  margins.Finish();
  report.note = std::to_string(ell) + " group changes, " +
                std::to_string(halvings) + " halvings";
  if (!failures.empty()) {
    for (const std::string& f : failures) report.note += "; " + f;
  }
  return report;
}

CheckReport CheckDynamicBound(const Trace& trace, const DynamicRule& rule,
                              const RuleConstants& constants,
                              const DynamicBoundInputs& inputs,
                              double tolerance) {
  CheckReport report = Start("dynamic_bound", tolerance);
  report.advisory = inputs.surrogate;
  if (trace.records.empty()) return report;
  const double c = MaxSubgradientNorm(trace);
  const double d0 = InitialDistance(trace, inputs.x_star, "dynamic bound");
  const double budget = (c * d0) * (c * d0);
  const double slope = 2.0 * constants.mu + constants.nu;
  report.constant = c;

  // N is the largest integer >= 1 with S(N) = sum_{k<N} term_k <= budget.
  const std::int64_t last = static_cast<std::int64_t>(trace.records.size()) - 1;
  std::int64_t n_bound = -1;
  double partial = 0.0;
  for (std::int64_t k = 0; k <= last; ++k) {
    const double beta = rule.beta(k);
    const double delta = trace.records[k].delta_ell;
    partial += beta * (2.0 - slope * beta) * delta * delta;
    if (partial > budget) {
      n_bound = k;  // S(k + 1) > budget, S(k) <= budget
      break;
    }
  }
  n_bound = n_bound < 0 ? -1 : std::max<std::int64_t>(n_bound, 1);
  const std::int64_t upto = n_bound < 0 ? last : std::min(n_bound, last);

  Margins margins(report, trace.records.size());
  double min_gap = kInf;
  for (std::int64_t k = 0; k <= upto; ++k) {
    min_gap = std::min(min_gap, trace.records[k].f_xk - inputs.f_star);
  }
  const double margin = inputs.delta0 - min_gap;
  std::string where;
  if (n_bound < 0 && margin < -tolerance) {
    report.skipped = true;
    where = "N lies beyond the trace and the trace has not reached delta_0";
  } else {
    margins.Add(upto, margin);
    where = n_bound < 0 ? "N beyond the trace"
                        : "N = " + std::to_string(n_bound);
  }
  margins.Finish();
  report.note = where + ", c = " + Format(c) +
                (inputs.surrogate ? ", surrogate f* and x*" : "");
  return report;
}

CheckReport CheckFwRate(const std::vector<GapSample>& history,
                        const FeasibleSet& set, const Vector& v,
                        std::optional<double> diameter, double tolerance) {
  if (!set.HasExactProjection()) {
    throw ContractViolation("fw rate: no exact projection for set kind " +
                            std::string(SetKindName(set.kind())));
  }
  CheckReport report = Start("fw_rate", tolerance);
  const double d = diameter.value_or(set.diameter_bound());
  const double psi_star = 0.5 * (set.ExactProject(v) - v).squaredNorm();
  std::size_t size = 0;
  for (const GapSample& g : history) size = std::max<std::size_t>(size, g.k + 1);
  Margins margins(report, size);
  for (const GapSample& g : history) {
    if (g.k < 1) continue;
    margins.Add(g.k, 8.0 * d * d / g.k - (g.psi - psi_star));
  }
  margins.Finish();
  report.constant = d;
  report.note = "d_C = " + Format(d);
  return report;
}

std::vector<CheckReport> RunApplicableChecks(const Trace& trace,
                                             const VerifyInputs& inputs) {
  if (inputs.problem == nullptr) {
    throw ContractViolation("verify: no problem instance");
  }
  const ProblemInstance& problem = *inputs.problem;
  const RuleConstants constants =
      RuleConstants::From(inputs.params, RuleMu(inputs.rule));
  std::vector<CheckReport> reports;

  if (trace.has_iterates()) {
    reports.push_back(CheckMainInequality(
        trace, *problem.objective,
        SampleProbes(problem.set, inputs.probes, inputs.probe_seed),
        constants));
  } else {
    reports.push_back(Skip("main_inequality", "iterates were not kept"));
  }

  if (const auto* exo = std::get_if<ExogenousRule>(&inputs.rule)) {
    reports.push_back(
        CheckExogenousComplexity(trace, problem.f_star, *exo, constants));
    if (problem.x_star && trace.has_iterates()) {
      reports.push_back(CheckQuasiFejer(trace, *problem.x_star, *exo, constants));
    } else {
      reports.push_back(Skip("quasi_fejer", "x* or iterates unavailable"));
    }
  } else if (const auto* polyak = std::get_if<PolyakRule>(&inputs.rule)) {
    if (problem.x_star) {
      reports.push_back(
          CheckPolyak(trace, *problem.x_star, polyak->f_star, *polyak));
      reports.push_back(CheckDistanceMonotone(trace, *problem.x_star));
    } else {
      reports.push_back(Skip("polyak", "x* unknown"));
      reports.push_back(Skip("distance_monotone", "x* unknown"));
    }
  } else {
    const auto& dynamic = std::get<DynamicRule>(inputs.rule);
    reports.push_back(CheckLevelStructure(trace, inputs.radius));
    const double delta0 = inputs.delta0.value_or(
        trace.records.empty() ? kNaN : trace.records.front().delta_ell);
    if (problem.f_star && problem.x_star) {
      reports.push_back(CheckDynamicBound(
          trace, dynamic, constants,
          {*problem.f_star, *problem.x_star, delta0, false}));
    } else if (inputs.f_surrogate && inputs.x_surrogate) {
      reports.push_back(CheckDynamicBound(
          trace, dynamic, constants,
          {*inputs.f_surrogate, *inputs.x_surrogate, delta0, true}));
    } else {
      reports.push_back(Skip("dynamic_bound", "f* unknown"));
    }
  }
  return reports;
}

bool AllRequiredPassed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) {
    return r.advisory || r.skipped || r.passed;
  });
}

}  // namespace sinexp
