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

#ifndef SINEXP_TOOLS_RUN_CONFIG_H_
#define SINEXP_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "sinexp/io.h"
#include "sinexp/problems.h"
#include "sinexp/solver.h"
#include "sinexp/stepsize.h"

namespace sinexp::cli {

enum class ProblemSource { kGenerated, kFile, kBoxL1 };

// Everything a solve depends on. Defaults are the settings of the
// sparse-recovery experiment: x0 = xbar, gamma = lambda = 0.025,
// theta = 0.25, dynamic rule with beta just under 2 (1 - 2 lambda) /
// (1 + 2 gamma), delta_0 = ||s_0|| / 2, R = ||x_1 - x_0||.
struct RunConfig {
  ProblemSource source = ProblemSource::kGenerated;
  EllipsoidL1Spec spec;
  std::string instance_path;
  Vector box_p = Vector::Zero(0);
  Vector box_lower = Vector::Zero(0);
  Vector box_upper = Vector::Zero(0);

  std::string rule = "dynamic";
  std::optional<double> beta;
  double alpha_scale = 1.0;
  double mu = 0.0;
  std::optional<double> f_star;
  ToleranceParams params;

  std::int64_t max_iterations = 100'000;
  int max_inner = 0;
  double epsilon = 0.0;
  double stop_relative = 1e-3;
  std::optional<double> delta0;
  std::optional<double> radius;
  double target_gap = 1e-3;
  std::optional<Vector> x0;
  bool keep_iterates = true;

  std::string out_dir = "sinexp_out";
  bool dump_trajectory = false;
};

// The built-in box problem: p = (2, 0.5) over [0, 1]^2.
void UseDefaultBox(RunConfig& config);

using sinexp::ToJson;
Json ToJson(const RunConfig& config);
RunConfig RunConfigFromJson(const Json& j);

struct ResolvedRun {
  LoadedProblem problem;
  StepsizeRule rule;
  Vector x0;
};

// Loads or generates the problem and builds the rule and start point.
ResolvedRun Resolve(const RunConfig& config);

// Runs the configured solver.
SolverReport Execute(const RunConfig& config, const ResolvedRun& run);

// ||x||_0 with threshold 1e-6.
int SparsityCount(const Vector& x, double threshold = 1e-6);

}  // namespace sinexp::cli

#endif  // SINEXP_TOOLS_RUN_CONFIG_H_
