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

#ifndef SINEXP_TOOLS_CLI_H_
#define SINEXP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.h"

namespace sinexp::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // solver failure or failed checks
inline constexpr int kExitUsage = 2;

// Table-1 style row: n, k, ell, ||x_rec||_0, f_rec, delta_ell.
struct SummaryRow {
  Eigen::Index n = 0;
  std::int64_t k = 0;
  std::int64_t ell = 0;
  int l0 = 0;
  double f_rec = 0.0;
  double delta = 0.0;
};

SummaryRow Summarize(const SolverReport& report);
std::string SummaryHeader();
std::string FormatSummary(const SummaryRow& row);

// Solves and writes report.json, problem.json, trace.csv, iterates.csv
// (when kept) and trajectory.csv (when requested) under config.out_dir.
struct SolveOutcome {
  SolverReport report;
  SummaryRow summary;
  int exit_code = kExitOk;
};
SolveOutcome SolveToDirectory(const RunConfig& config);

// Re-runs every applicable checker on a directory written by
// SolveToDirectory; writes checks.json there.
std::vector<CheckReport> VerifyDirectory(const std::string& dir, int probes,
                                         std::uint64_t probe_seed);

// Entry point shared by the executable and the tests.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sinexp::cli

#endif  // SINEXP_TOOLS_CLI_H_
