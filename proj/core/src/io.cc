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

#include "sinexp/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <variant>

namespace sinexp {

namespace {

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractViolation(std::string("json: missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const Json& j, const char* key) {
  return DoubleFromJson(Field(j, key));
}

double NumberOr(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? DoubleFromJson(j.at(key)) : fallback;
}

std::string Text(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_string()) {
    throw ContractViolation(std::string("json: field '") + key +
                            "' must be a string");
  }
  return v.get<std::string>();
}

Json IntervalJson(const Interval& in) { return Json::array({in.low, in.high}); }

Interval IntervalFromJson(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ContractViolation("json: interval must be [low, high]");
  }
  return {DoubleFromJson(j[0]), DoubleFromJson(j[1])};
}

Json MatrixRowMajor(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

// Flat row-major or nested rows.
Matrix MatrixFromJson(const Json& j, Eigen::Index n, const char* what) {
  Matrix m(n, n);
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    if (static_cast<Eigen::Index>(j.size()) != n) {
      throw ContractViolation(std::string("json: ") + what + " has wrong rows");
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const Vector row = VectorFromJson(j[r]);
      if (row.size() != n) {
        throw ContractViolation(std::string("json: ") + what +
                                " has wrong columns");
      }
      m.row(r) = row.transpose();
    }
    return m;
  }
  const Vector flat = VectorFromJson(j);
  if (flat.size() != n * n) {
    throw ContractViolation(std::string("json: ") + what + " must hold n^2 values");
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat[r * n + c];
  }
  return m;
}

EllipsoidSpectrum SpectrumFromJson(const Json& j, Eigen::Index n) {
  if (j.contains("eigenvalues")) {
    Vector values = VectorFromJson(j.at("eigenvalues"));
    if (values.size() != n) {
      throw ContractViolation("json: eigenvalues have the wrong length");
    }
    return EllipsoidSpectrum(
        std::move(values),
        MatrixFromJson(Field(j, "eigenvectors"), n, "eigenvectors"));
  }
  if (j.contains("Q")) {
    if (n > 100) throw ContractViolation("json: dense Q is limited to n <= 100");
    return EllipsoidSpectrum::FromMatrix(MatrixFromJson(j.at("Q"), n, "Q"));
  }
  throw ContractViolation("json: ellipsoid needs eigenvalues/eigenvectors or Q");
}

Json SpectrumJson(const EllipsoidSpectrum& s) {
  return {{"eigenvalues", ToJson(s.eigenvalues())},
          {"eigenvectors", MatrixRowMajor(s.eigenvectors())}};
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& cell) {
  if (cell == "nan" || cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw ContractViolation("csv: bad number '" + cell + "'");
  }
  return v;
}

std::int64_t ParseInt(const std::string& cell) {
  char* end = nullptr;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0') {
    throw ContractViolation("csv: bad integer '" + cell + "'");
  }
  return v;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool NextLine(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

// Margins keep the sign of infinity: a check that never ran reports +inf and
// a non-finite violation -inf.
Json MarginJson(double margin) {
  if (std::isfinite(margin)) return margin;
  if (std::isnan(margin)) return nullptr;
  return margin > 0.0 ? "inf" : "-inf";
}

double MarginFromJson(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    throw ContractViolation("json: bad margin '" + text + "'");
  }
  return j.get<double>();
}

}  // namespace

Json ToJson(double value) {
  return std::isfinite(value) ? Json(value) : Json(nullptr);
}

double DoubleFromJson(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ContractViolation("json: expected a number");
  return j.get<double>();
}

Json ToJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(ToJson(v[i]));
  return out;
}

Vector VectorFromJson(const Json& j) {
  if (!j.is_array()) throw ContractViolation("json: expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = DoubleFromJson(j[i]);
  }
  return v;
}

Json ToJson(const FeasibleSet& set) {
  Json out = {{"kind", std::string(SetKindName(set.kind()))},
              {"dimension", set.dimension()}};
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          out["lower"] = ToJson(s.lower);
          out["upper"] = ToJson(s.upper);
        } else if constexpr (std::is_same_v<T, Ball>) {
          out["center"] = ToJson(s.center);
          out["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Simplex>) {
        } else {
          out["center"] = ToJson(s.center);
          out.update(SpectrumJson(s.spectrum));
        }
      },
      set.shape());
  return out;
}

FeasibleSet SetFromJson(const Json& j) {
  const std::string kind = Text(j, "kind");
  if (kind == "box") {
    return FeasibleSet::MakeBox(VectorFromJson(Field(j, "lower")),
                                VectorFromJson(Field(j, "upper")));
  }
  if (kind == "ball") {
    return FeasibleSet::MakeBall(VectorFromJson(Field(j, "center")),
                                 Number(j, "radius"));
  }
  if (kind == "simplex") {
    return FeasibleSet::MakeSimplex(Field(j, "dimension").get<Eigen::Index>());
  }
  if (kind == "ellipsoid" || kind == "ellipsoid_orthant") {
    Vector center = VectorFromJson(Field(j, "center"));
    const Eigen::Index n = center.size();
    EllipsoidSpectrum spectrum = SpectrumFromJson(j, n);
    return kind == "ellipsoid"
               ? FeasibleSet::MakeEllipsoid(std::move(center), std::move(spectrum))
               : FeasibleSet::MakeEllipsoidOrthant(std::move(center),
                                                   std::move(spectrum));
  }
  throw ContractViolation("json: unknown set kind '" + kind + "'");
}

Json ToJson(const Sequence& seq) {
  switch (seq.kind()) {
    case Sequence::Kind::kConstant:
      return {{"kind", "constant"}, {"value", seq.parameter()}};
    case Sequence::Kind::kHarmonic:
      return {{"kind", "harmonic"}, {"scale", seq.parameter()}};
    case Sequence::Kind::kCustom:
      break;
  }
  throw ContractViolation("json: custom sequences cannot be serialized");
}

Sequence SequenceFromJson(const Json& j) {
  if (j.is_number()) return Sequence::Constant(j.get<double>());
  const std::string kind = Text(j, "kind");
  if (kind == "constant") return Sequence::Constant(Number(j, "value"));
  if (kind == "harmonic") return Sequence::Harmonic(Number(j, "scale"));
  throw ContractViolation("json: unknown sequence kind '" + kind + "'");
}

Json ToJson(const StepsizeRule& rule) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExogenousRule>) {
          return {{"rule", "exogenous"}, {"alpha", ToJson(r.alpha)},
                  {"mu", r.mu}};
        } else if constexpr (std::is_same_v<T, PolyakRule>) {
          return {{"rule", "polyak"},          {"f_star", r.f_star},
                  {"beta", ToJson(r.beta)},    {"beta_low", r.beta_low},
                  {"beta_high", r.beta_high},  {"mu", r.mu}};
        } else {
          return {{"rule", "dynamic"},
                  {"beta", ToJson(r.beta)},
                  {"beta_low", r.beta_low},
                  {"beta_high", r.beta_high},
                  {"mu", r.mu}};
        }
      },
      rule);
}

StepsizeRule RuleFromJson(const Json& j) {
  const std::string name = Text(j, "rule");
  const double mu = NumberOr(j, "mu", 0.0);
  if (name == "exogenous") {
    ExogenousRule r;
    if (j.contains("alpha")) r.alpha = SequenceFromJson(j.at("alpha"));
    r.mu = mu;
    return r;
  }
  auto beta_fields = [&j](auto& r) {
    r.beta = SequenceFromJson(Field(j, "beta"));
    const bool constant = r.beta.kind() == Sequence::Kind::kConstant;
    const double b = constant ? r.beta.parameter() : 0.0;
    r.beta_low = constant ? NumberOr(j, "beta_low", b) : Number(j, "beta_low");
    r.beta_high = constant ? NumberOr(j, "beta_high", b) : Number(j, "beta_high");
  };
  if (name == "polyak") {
    PolyakRule r;
    r.f_star = Number(j, "f_star");
    beta_fields(r);
    r.mu = mu;
    return r;
  }
  if (name == "dynamic") {
    DynamicRule r;
    beta_fields(r);
    r.mu = mu;
    return r;
  }
  throw ContractViolation("json: unknown rule '" + name + "'");
}

Json ToJson(const ToleranceParams& params) {
  return {{"gamma", params.gamma},
          {"theta", params.theta},
          {"lambda", params.lambda}};
}

ToleranceParams ParamsFromJson(const Json& j) {
  ToleranceParams p;
  p.gamma = NumberOr(j, "gamma", p.gamma);
  p.theta = NumberOr(j, "theta", p.theta);
  p.lambda = NumberOr(j, "lambda", p.lambda);
  p.Validate();
  return p;
}

Json ToJson(const EllipsoidL1Instance& inst) {
  const auto& shape = std::get<EllipsoidOrthant>(inst.problem.set.shape());
  Json out = {
      {"schema", kSchemaVersion},
      {"type", "ellipsoid_l1"},
      {"n", inst.spec.n},
      {"seed", inst.spec.seed},
      {"attempt", inst.attempt},
      {"spec",
       {{"lambda_n_range", IntervalJson(inst.spec.lambda_n_range)},
        {"lambda_rest_range", IntervalJson(inst.spec.lambda_rest_range)},
        {"u_norm_factor", IntervalJson(inst.spec.u_norm_factor)},
        {"u_entry_range", IntervalJson(inst.spec.u_entry_range)},
        {"max_attempts", inst.spec.max_attempts}}},
      {"u", ToJson(inst.u)},
      {"xi", inst.xi},
      {"center", ToJson(inst.center)},
  };
  out.update(SpectrumJson(shape.spectrum));
  return out;
}

EllipsoidL1Instance EllipsoidInstanceFromJson(const Json& j) {
  EllipsoidL1Spec spec;
  spec.n = Field(j, "n").get<Eigen::Index>();
  spec.seed = Field(j, "seed").get<std::uint64_t>();
  if (j.contains("spec")) {
    const Json& s = j.at("spec");
    if (s.contains("lambda_n_range")) {
      spec.lambda_n_range = IntervalFromJson(s.at("lambda_n_range"));
    }
    if (s.contains("lambda_rest_range")) {
      spec.lambda_rest_range = IntervalFromJson(s.at("lambda_rest_range"));
    }
    if (s.contains("u_norm_factor")) {
      spec.u_norm_factor = IntervalFromJson(s.at("u_norm_factor"));
    }
    if (s.contains("u_entry_range")) {
      spec.u_entry_range = IntervalFromJson(s.at("u_entry_range"));
    }
    if (s.contains("max_attempts")) {
      spec.max_attempts = s.at("max_attempts").get<int>();
    }
  }
  const int attempt = j.value("attempt", 0);
  EllipsoidL1Instance inst =
      AssembleInstance(spec, attempt, SpectrumFromJson(j, spec.n),
                       VectorFromJson(Field(j, "u")), Number(j, "xi"));
  if (j.contains("center")) {
    const Vector stored = VectorFromJson(j.at("center"));
    if (stored.size() != spec.n ||
        (stored - inst.center).cwiseAbs().maxCoeff() > 1e-12) {
      throw ContractViolation("instance: stored center != u + xi e_n");
    }
  }
  return inst;
}

Json BoxL1Json(const Vector& p, const Vector& lower, const Vector& upper) {
  return {{"schema", kSchemaVersion},
          {"type", "box_l1"},
          {"p", ToJson(p)},
          {"lower", ToJson(lower)},
          {"upper", ToJson(upper)}};
}

LoadedProblem ProblemFromJson(const Json& j) {
  LoadedProblem out;
  out.source = j;
  const std::string type = Text(j, "type");
  if (type == "ellipsoid_l1") {
    out.generated = EllipsoidInstanceFromJson(j);
    out.problem = out.generated->problem;
    return out;
  }
  if (type == "box_l1") {
    out.problem = BoxL1Problem(VectorFromJson(Field(j, "p")),
                               VectorFromJson(Field(j, "lower")),
                               VectorFromJson(Field(j, "upper")));
    return out;
  }
  throw ContractViolation("json: unknown problem type '" + type + "'");
}

Json ToJson(const SolverReport& report) {
  return {{"schema", kSchemaVersion},
          {"status", std::string(SolverStatusName(report.status))},
          {"message", report.message},
          {"rule", report.rule},
          {"iterations", report.iterations},
          {"groups", report.groups},
          {"x_final", ToJson(report.x_final)},
          {"x_rec", ToJson(report.x_rec)},
          {"f_rec", ToJson(report.f_rec)},
          {"k_rec", report.k_rec},
          {"delta0", ToJson(report.delta0)},
          {"delta_final", ToJson(report.delta_final)},
          {"radius", ToJson(report.radius)},
          {"total_inner_iterations", report.total_inner_iterations},
          {"trace_records", report.trace.records.size()}};
}

SolverReport ReportFromJson(const Json& j) {
  if (Field(j, "schema").get<int>() != kSchemaVersion) {
    throw ContractViolation("report: unsupported schema version");
  }
  SolverReport r;
  const std::string status = Text(j, "status");
  bool known = false;
  for (SolverStatus s :
       {SolverStatus::kConverged, SolverStatus::kTargetReached,
        SolverStatus::kBudget, SolverStatus::kStationary,
        SolverStatus::kZeroSubgradient, SolverStatus::kProjectionFailed}) {
    if (SolverStatusName(s) == status) {
      r.status = s;
      known = true;
    }
  }
  if (!known) throw ContractViolation("report: unknown status '" + status + "'");
  r.message = j.value("message", "");
  r.rule = Text(j, "rule");
  r.iterations = Field(j, "iterations").get<std::int64_t>();
  r.groups = j.value("groups", std::int64_t{0});
  r.x_final = VectorFromJson(Field(j, "x_final"));
  r.x_rec = VectorFromJson(Field(j, "x_rec"));
  r.f_rec = Number(j, "f_rec");
  r.k_rec = j.value("k_rec", std::int64_t{0});
  r.delta0 = NumberOr(j, "delta0", kNaN);
  r.delta_final = NumberOr(j, "delta_final", kNaN);
  r.radius = NumberOr(j, "radius", kNaN);
  r.total_inner_iterations = j.value("total_inner_iterations", std::int64_t{0});
  return r;
}

Json ToJson(const CheckReport& report) {
  Json out = {{"name", report.name},
              {"passed", report.passed},
              {"skipped", report.skipped},
              {"advisory", report.advisory},
              {"worst_margin", MarginJson(report.worst_margin)},
              {"tolerance", report.tolerance},
              {"note", report.note}};
  out["first_violation_k"] = report.first_violation_k
                                 ? Json(*report.first_violation_k)
                                 : Json(nullptr);
  out["constant"] =
      report.constant ? ToJson(*report.constant) : Json(nullptr);
  return out;
}

CheckReport CheckReportFromJson(const Json& j) {
  CheckReport r;
  r.name = Text(j, "name");
  r.passed = Field(j, "passed").get<bool>();
  r.skipped = j.value("skipped", false);
  r.advisory = j.value("advisory", false);
  r.worst_margin = MarginFromJson(Field(j, "worst_margin"));
  r.tolerance = NumberOr(j, "tolerance", 0.0);
  r.note = j.value("note", "");
  if (j.contains("first_violation_k") && !j.at("first_violation_k").is_null()) {
    r.first_violation_k = j.at("first_violation_k").get<std::int64_t>();
  }
  if (j.contains("constant") && !j.at("constant").is_null()) {
    r.constant = j.at("constant").get<double>();
  }
  return r;
}

const std::vector<std::string> kTraceColumns = {
    "k",       "ell",       "f_xk",     "f_rec",
    "f_lev",   "delta_ell", "sigma",    "t_k",
    "t_tilde_k", "norm_s_k", "fw_inner_iterations", "feasibility_residual",
    "dist_to_xstar", "event"};

void WriteTraceCsv(std::ostream& out, const Trace& trace) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    out << (i ? "," : "") << kTraceColumns[i];
  }
  out << '\n';
  for (const TraceRecord& r : trace.records) {
    out << r.k << ',' << r.ell << ',' << FormatDouble(r.f_xk) << ','
        << FormatDouble(r.f_rec) << ',' << FormatDouble(r.f_lev) << ','
        << FormatDouble(r.delta_ell) << ',' << FormatDouble(r.sigma) << ','
        << FormatDouble(r.t_k) << ',' << FormatDouble(r.t_tilde_k) << ','
        << FormatDouble(r.norm_s_k) << ',' << r.fw_inner_iterations << ','
        << FormatDouble(r.feasibility_residual) << ','
        << FormatDouble(r.dist_to_xstar) << ',' << LevelEventName(r.event)
        << '\n';
  }
}

Trace ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!NextLine(in, line)) throw ContractViolation("trace csv: empty input");
  const std::vector<std::string> header = SplitCsv(line);
  if (header != kTraceColumns) {
    throw ContractViolation("trace csv: missing trace fields or unexpected "
                            "column order");
  }
  Trace trace;
  while (NextLine(in, line)) {
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != kTraceColumns.size()) {
      throw ContractViolation("trace csv: row has " + std::to_string(c.size()) +
                              " cells");
    }
    TraceRecord r;
    r.k = ParseInt(c[0]);
    r.ell = ParseInt(c[1]);
    r.f_xk = ParseDouble(c[2]);
    r.f_rec = ParseDouble(c[3]);
    r.f_lev = ParseDouble(c[4]);
    r.delta_ell = ParseDouble(c[5]);
    r.sigma = ParseDouble(c[6]);
    r.t_k = ParseDouble(c[7]);
    r.t_tilde_k = ParseDouble(c[8]);
    r.norm_s_k = ParseDouble(c[9]);
    r.fw_inner_iterations = static_cast<int>(ParseInt(c[10]));
    r.feasibility_residual = ParseDouble(c[11]);
    r.dist_to_xstar = ParseDouble(c[12]);
    r.event = ParseLevelEvent(c[13]);
    trace.records.push_back(r);
  }
  return trace;
}

void WriteIteratesCsv(std::ostream& out, const Trace& trace) {
  if (!trace.has_iterates()) {
    throw ContractViolation("iterates csv: trace has no kept iterates");
  }
  const Eigen::Index n = trace.steps.front().x.size();
  out << "k,eps";
  for (const char* name : {"x", "s", "x_next"}) {
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << name << '_' << i;
  }
  out << '\n';
  for (std::size_t row = 0; row < trace.steps.size(); ++row) {
    const StepVectors& s = trace.steps[row];
    out << trace.records[row].k << ',' << FormatDouble(s.eps);
    for (const Vector* v : {&s.x, &s.s, &s.x_next}) {
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << FormatDouble((*v)[i]);
    }
    out << '\n';
  }
}

void ReadIteratesCsv(std::istream& in, Trace& trace) {
  std::string line;
  if (!NextLine(in, line)) throw ContractViolation("iterates csv: empty input");
  const std::vector<std::string> header = SplitCsv(line);
  if (header.size() < 5 || (header.size() - 2) % 3 != 0 || header[0] != "k" ||
      header[1] != "eps") {
    throw ContractViolation("iterates csv: bad header");
  }
  const Eigen::Index n = static_cast<Eigen::Index>((header.size() - 2) / 3);
  std::vector<StepVectors> steps;
  while (NextLine(in, line)) {
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != header.size()) {
      throw ContractViolation("iterates csv: ragged row");
    }
    const std::int64_t k = ParseInt(c[0]);
    if (steps.size() >= trace.records.size() ||
        k != trace.records[steps.size()].k) {
      throw ContractViolation("iterates csv: rows do not match the trace");
    }
    StepVectors s;
    s.eps = ParseDouble(c[1]);
    s.x.resize(n);
    s.s.resize(n);
    s.x_next.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.x[i] = ParseDouble(c[2 + i]);
      s.s[i] = ParseDouble(c[2 + n + i]);
      s.x_next[i] = ParseDouble(c[2 + 2 * n + i]);
    }
    steps.push_back(std::move(s));
  }
  if (steps.size() != trace.records.size()) {
    throw ContractViolation("iterates csv: " + std::to_string(steps.size()) +
                            " rows for " +
                            std::to_string(trace.records.size()) + " records");
  }
  trace.steps = std::move(steps);
}

void WriteGapHistoryCsv(std::ostream& out,
                        const std::vector<GapSample>& history) {
  out << "k,gap,psi\n";
  for (const GapSample& g : history) {
    out << g.k << ',' << FormatDouble(g.gap) << ',' << FormatDouble(g.psi)
        << '\n';
  }
}

std::vector<GapSample> ReadGapHistoryCsv(std::istream& in) {
  std::string line;
  if (!NextLine(in, line) || line != "k,gap,psi") {
    throw ContractViolation("gap history csv: bad header");
  }
  std::vector<GapSample> out;
  while (NextLine(in, line)) {
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != 3) throw ContractViolation("gap history csv: ragged row");
    out.push_back({static_cast<int>(ParseInt(c[0])), ParseDouble(c[1]),
                   ParseDouble(c[2])});
  }
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ContractViolation("'" + path + "': " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw ContractViolation("write to '" + path + "' failed");
}

}  // namespace sinexp
