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

#ifndef SINEXP_IO_H_
#define SINEXP_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sinexp/analysis.h"
#include "sinexp/feasible_set.h"
#include "sinexp/inexact_projection.h"
#include "sinexp/problems.h"
#include "sinexp/solver.h"
#include "sinexp/stepsize.h"

namespace sinexp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Non-finite doubles are written as null and read back as NaN.
Json ToJson(double value);
double DoubleFromJson(const Json& j);
Json ToJson(const Vector& v);
Vector VectorFromJson(const Json& j);

// {"kind", "dimension", kind-specific fields}. Ellipsoids are written with
// "eigenvalues" and row-major "eigenvectors"; on input a dense "Q" (n <= 100)
// is accepted instead.
Json ToJson(const FeasibleSet& set);
FeasibleSet SetFromJson(const Json& j);

// A number is a constant; {"kind": "harmonic", "scale": a} and
// {"kind": "constant", "value": b} are the other forms. Custom sequences
// cannot be serialized.
Json ToJson(const Sequence& seq);
Sequence SequenceFromJson(const Json& j);

// {"rule": "exogenous" | "polyak" | "dynamic", rule scalars, "mu"}.
Json ToJson(const StepsizeRule& rule);
StepsizeRule RuleFromJson(const Json& j);

Json ToJson(const ToleranceParams& params);
ToleranceParams ParamsFromJson(const Json& j);

// Generated instance: spec, attempt, spectrum, u, xi and xbar.
Json ToJson(const EllipsoidL1Instance& inst);
EllipsoidL1Instance EllipsoidInstanceFromJson(const Json& j);

// Problem file: {"type": "ellipsoid_l1", ...} or
// {"type": "box_l1", "p", "lower", "upper"}.
struct LoadedProblem {
  ProblemInstance problem;
  std::optional<EllipsoidL1Instance> generated;
  Json source;
};
Json BoxL1Json(const Vector& p, const Vector& lower, const Vector& upper);
LoadedProblem ProblemFromJson(const Json& j);

// Report with "schema": 1; the trace is written separately.
Json ToJson(const SolverReport& report);
SolverReport ReportFromJson(const Json& j);

Json ToJson(const CheckReport& report);
CheckReport CheckReportFromJson(const Json& j);

// Trace CSV: the TraceRecord columns in declared order, then "event".
// Doubles use %.17g; NaN is written as "nan".
extern const std::vector<std::string> kTraceColumns;
void WriteTraceCsv(std::ostream& out, const Trace& trace);
Trace ReadTraceCsv(std::istream& in);

// Iterates CSV: k, eps, x_*, s_*, x_next_* (one row per step).
void WriteIteratesCsv(std::ostream& out, const Trace& trace);
// Attaches the steps to `trace`; rows must match its records.
void ReadIteratesCsv(std::istream& in, Trace& trace);

// Gap history CSV: k, gap, psi.
void WriteGapHistoryCsv(std::ostream& out,
                        const std::vector<GapSample>& history);
std::vector<GapSample> ReadGapHistoryCsv(std::istream& in);

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

}  // namespace sinexp

#endif  // SINEXP_IO_H_
