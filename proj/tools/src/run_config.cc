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

#include "run_config.h"

#include <cmath>

namespace sinexp::cli {

namespace {

std::string SourceName(ProblemSource source) {
  switch (source) {
    case ProblemSource::kGenerated:
      return "generated";
    case ProblemSource::kFile:
      return "file";
    case ProblemSource::kBoxL1:
      return "box_l1";
  }
  return "generated";
}

ProblemSource ParseSource(const std::string& name) {
  if (name == "generated") return ProblemSource::kGenerated;
  if (name == "file") return ProblemSource::kFile;
  if (name == "box_l1") return ProblemSource::kBoxL1;
  throw ContractViolation("config: unknown problem source '" + name + "'");
}

Json Optional(const std::optional<double>& v) {
  return v ? ToJson(*v) : Json(nullptr);
}

std::optional<double> OptionalFrom(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return DoubleFromJson(j.at(key));
}

}  // namespace

void UseDefaultBox(RunConfig& config) {
  config.source = ProblemSource::kBoxL1;
  config.box_p = Vector(2);
  config.box_p << 2.0, 0.5;
  config.box_lower = Vector::Zero(2);
  config.box_upper = Vector::Ones(2);
}

Json ToJson(const RunConfig& c) {
  Json problem = {{"source", SourceName(c.source)}};
  switch (c.source) {
    case ProblemSource::kGenerated:
      problem["n"] = c.spec.n;
      problem["seed"] = c.spec.seed;
      break;
    case ProblemSource::kFile:
      problem["instance"] = c.instance_path;
      break;
    case ProblemSource::kBoxL1:
      problem["p"] = ToJson(c.box_p);
      problem["lower"] = ToJson(c.box_lower);
      problem["upper"] = ToJson(c.box_upper);
      break;
  }
  return {
      {"schema", kSchemaVersion},
      {"problem", problem},
      {"rule",
       {{"name", c.rule},
        {"beta", Optional(c.beta)},
        {"alpha_scale", c.alpha_scale},
        {"mu", c.mu},
        {"f_star", Optional(c.f_star)}}},
      {"params", ToJson(c.params)},
      {"max_iterations", c.max_iterations},
      {"max_inner", c.max_inner},
      {"epsilon", c.epsilon},
      {"stop_relative", c.stop_relative},
      {"delta0", Optional(c.delta0)},
      {"radius", Optional(c.radius)},
      {"target_gap", c.target_gap},
      {"x0", c.x0 ? ToJson(*c.x0) : Json(nullptr)},
      {"keep_iterates", c.keep_iterates},
      {"out_dir", c.out_dir},
      {"dump_trajectory", c.dump_trajectory},
  };
}

RunConfig RunConfigFromJson(const Json& j) {
  RunConfig c;
  if (j.contains("problem")) {
    const Json& p = j.at("problem");
    c.source = ParseSource(p.value("source", "generated"));
    if (c.source == ProblemSource::kBoxL1) UseDefaultBox(c);
    c.spec.n = p.value("n", c.spec.n);
    c.spec.seed = p.value("seed", c.spec.seed);
    c.instance_path = p.value("instance", "");
    if (p.contains("p")) c.box_p = VectorFromJson(p.at("p"));
    if (p.contains("lower")) c.box_lower = VectorFromJson(p.at("lower"));
    if (p.contains("upper")) c.box_upper = VectorFromJson(p.at("upper"));
  }
  if (j.contains("rule")) {
    const Json& r = j.at("rule");
    c.rule = r.value("name", c.rule);
    c.beta = OptionalFrom(r, "beta");
    c.alpha_scale = r.value("alpha_scale", c.alpha_scale);
    c.mu = r.value("mu", c.mu);
    c.f_star = OptionalFrom(r, "f_star");
  }
  if (j.contains("params")) c.params = ParamsFromJson(j.at("params"));
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.max_inner = j.value("max_inner", c.max_inner);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.stop_relative = j.value("stop_relative", c.stop_relative);
  c.delta0 = OptionalFrom(j, "delta0");
  c.radius = OptionalFrom(j, "radius");
  c.target_gap = j.value("target_gap", c.target_gap);
  if (j.contains("x0") && !j.at("x0").is_null()) {
    c.x0 = VectorFromJson(j.at("x0"));
  }
  c.keep_iterates = j.value("keep_iterates", c.keep_iterates);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.dump_trajectory = j.value("dump_trajectory", c.dump_trajectory);
  return c;
}

ResolvedRun Resolve(const RunConfig& config) {
  ResolvedRun run;
  switch (config.source) {
    case ProblemSource::kGenerated: {
      EllipsoidL1Instance inst = GenerateInstance(config.spec);
      run.problem.source = ToJson(inst);
      run.problem.problem = inst.problem;
      run.problem.generated = std::move(inst);
      break;
    }
    case ProblemSource::kFile:
      run.problem = ProblemFromJson(ReadJsonFile(config.instance_path));
      break;
    case ProblemSource::kBoxL1:
      run.problem = ProblemFromJson(
          BoxL1Json(config.box_p, config.box_lower, config.box_upper));
      break;
  }
  const ProblemInstance& problem = run.problem.problem;

  if (config.x0) {
    run.x0 = *config.x0;
  } else if (run.problem.generated) {
    run.x0 = run.problem.generated->center;
  } else {
    run.x0 = problem.set.CanonicalPoint();
  }

  if (config.rule == "dynamic") {
    DynamicRule rule = DefaultDynamicRule(config.params);
    if (config.beta) {
      rule.beta = Sequence::Constant(*config.beta);
      rule.beta_low = rule.beta_high = *config.beta;
    }
    rule.mu = config.mu;
    run.rule = rule;
  } else if (config.rule == "polyak") {
    const std::optional<double> f_star =
        config.f_star ? config.f_star : problem.f_star;
    if (!f_star) {
      throw ContractViolation("the polyak rule needs f* (--f-star)");
    }
    PolyakRule rule = DefaultPolyakRule(*f_star, config.params);
    if (config.beta) {
      rule.beta = Sequence::Constant(*config.beta);
      rule.beta_low = rule.beta_high = *config.beta;
    }
    rule.mu = config.mu;
    run.rule = rule;
  } else if (config.rule == "exogenous") {
    run.rule = ExogenousRule{Sequence::Harmonic(config.alpha_scale), config.mu};
  } else {
    throw ContractViolation("unknown rule '" + config.rule + "'");
  }
  return run;
}

SolverReport Execute(const RunConfig& config, const ResolvedRun& run) {
  SolverOptions options;
  options.params = config.params;
  options.projection.max_inner = config.max_inner;
  options.max_iterations = config.max_iterations;
  options.keep_iterates = config.keep_iterates || config.dump_trajectory;
  options.epsilon = config.epsilon;
  if (std::holds_alternative<PolyakRule>(run.rule)) {
    options.target_gap = config.target_gap;
  }
  if (const auto* dynamic = std::get_if<DynamicRule>(&run.rule)) {
    LevelOptions level;
    level.delta0 = config.delta0;
    level.radius.fixed = config.radius;
    level.stop_relative = config.stop_relative;
    return RunSinexpd(run.problem.problem, run.x0, *dynamic, level, options);
  }
  return RunAlgorithm1(run.problem.problem, run.x0, run.rule, options);
}

int SparsityCount(const Vector& x, double threshold) {
  return static_cast<int>((x.array().abs() > threshold).count());
}

}  // namespace sinexp::cli
