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

#include "cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace sinexp::cli {

namespace fs = std::filesystem;

namespace {

std::string Sci(double v, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*e", digits, v);
  return buf;
}

Vector ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Flags shared by `solve` and `batch`; applied on top of a config file.
struct SolveFlags {
  std::string config_path;
  bool print_config = false;
  std::string instance;
  Eigen::Index n = 10;
  std::uint64_t seed = 1;
  bool box = false;
  std::vector<double> p, lower, upper, x0;
  std::string rule;
  double beta = 0.0, alpha_scale = 1.0, mu = 0.0, f_star = 0.0;
  double gamma = 0.0, theta = 0.0, lambda = 0.0;
  std::int64_t max_iterations = 0;
  int max_inner = 0;
  double epsilon = 0.0, stop_relative = 0.0, delta0 = 0.0, radius = 0.0,
         target_gap = 0.0;
  bool no_iterates = false;
  std::string out;
  bool dump_trajectory = false;

  std::map<std::string, CLI::Option*> opts;

  void Register(CLI::App* app, bool with_problem) {
    auto add = [&](const std::string& name, auto& target,
                   const std::string& help) {
      opts[name] = app->add_option(name, target, help);
      return opts[name];
    };
    add("--config", config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    app->add_flag("--print-config", print_config,
                  "Print the resolved configuration and exit");
    if (with_problem) {
      add("--instance", instance, "Instance JSON written by `generate`")
          ->check(CLI::ExistingFile);
      add("--seed", seed, "Generator seed");
      opts["--box"] = app->add_flag("--box", box,
                                    "Built-in problem min ||x - p||_1 over a box");
      add("--p", p, "Box problem target p")->delimiter(',');
      add("--lower", lower, "Box lower bounds")->delimiter(',');
      add("--upper", upper, "Box upper bounds")->delimiter(',');
      add("--x0", x0, "Start point (default: xbar or the canonical point)")
          ->delimiter(',');
    }
    add("--n", n, "Dimension of the generated instance")
        ->check(CLI::Range(Eigen::Index{2}, Eigen::Index{1} << 20));
    add("--rule", rule, "exogenous | polyak | dynamic")
        ->check(CLI::IsMember({"exogenous", "polyak", "dynamic"}));
    add("--beta", beta, "Constant beta for the polyak or dynamic rule");
    add("--alpha-scale", alpha_scale, "Exogenous alpha_k = a / (k + 1)");
    add("--mu", mu, "Error cap factor mu");
    add("--f-star", f_star, "Optimal value for the polyak rule");
    add("--gamma", gamma, "Tolerance parameter gamma");
    add("--theta", theta, "Tolerance parameter theta");
    add("--lambda", lambda, "Tolerance parameter lambda");
    add("--max-iterations", max_iterations, "Outer iteration budget");
    add("--max-inner", max_inner, "Frank-Wolfe budget (0: 10 n + 1000)");
    add("--epsilon", epsilon, "Constant eps_k passed to the oracle");
    add("--stop-relative", stop_relative,
        "Stop once delta <= value (1 + |f_rec|)");
    add("--delta0", delta0, "Initial level gap (default ||s_0|| / 2)");
    add("--radius", radius, "Path-length bound R (default ||x_1 - x_0||)");
    add("--target-gap", target_gap, "Polyak stop: f_rec - f* <= value");
    app->add_flag("--no-iterates", no_iterates,
                  "Do not keep x_k, s_k (disables iterates.csv)");
    add("--out", out, "Output directory");
    app->add_flag("--dump-trajectory", dump_trajectory,
                  "Write trajectory.csv with iterate coordinates");
  }

  bool Given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  RunConfig Build() const {
    RunConfig c;
    if (!config_path.empty()) c = RunConfigFromJson(ReadJsonFile(config_path));
    if (Given("--box") || Given("--p")) {
      UseDefaultBox(c);
      if (Given("--p")) {
        c.box_p = ToVector(p);
        c.box_lower = Vector::Zero(c.box_p.size());
        c.box_upper = Vector::Ones(c.box_p.size());
      }
      if (Given("--lower")) c.box_lower = ToVector(lower);
      if (Given("--upper")) c.box_upper = ToVector(upper);
    } else if (Given("--instance")) {
      c.source = ProblemSource::kFile;
      c.instance_path = instance;
    } else if (Given("--n") || Given("--seed")) {
      c.source = ProblemSource::kGenerated;
    }
    if (Given("--n")) c.spec.n = n;
    if (Given("--seed")) c.spec.seed = seed;
    if (Given("--x0")) c.x0 = ToVector(x0);
    if (Given("--rule")) c.rule = rule;
    if (Given("--beta")) c.beta = beta;
    if (Given("--alpha-scale")) c.alpha_scale = alpha_scale;
    if (Given("--mu")) c.mu = mu;
    if (Given("--f-star")) c.f_star = f_star;
    if (Given("--gamma")) c.params.gamma = gamma;
    if (Given("--theta")) c.params.theta = theta;
    if (Given("--lambda")) c.params.lambda = lambda;
    c.params.Validate();
    if (Given("--max-iterations")) c.max_iterations = max_iterations;
    if (Given("--max-inner")) c.max_inner = max_inner;
    if (Given("--epsilon")) c.epsilon = epsilon;
    if (Given("--stop-relative")) c.stop_relative = stop_relative;
    if (Given("--delta0")) c.delta0 = delta0;
    if (Given("--radius")) c.radius = radius;
    if (Given("--target-gap")) c.target_gap = target_gap;
    if (no_iterates) c.keep_iterates = false;
    if (Given("--out")) c.out_dir = out;
    if (dump_trajectory) c.dump_trajectory = true;
    return c;
  }
};

void WriteTrajectoryCsv(const std::string& path, const SolverReport& report,
                        const FeasibleSet& set) {
  if (!report.trace.has_iterates()) {
    throw ContractViolation("trajectory dump needs kept iterates");
  }
  std::ofstream out(path);
  const Eigen::Index n = set.dimension();
  out << "k,ell,group_start";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i;
  out << ",min_slack,interior\n";
  auto row = [&](std::int64_t k, std::int64_t ell, bool start,
                 const Vector& x) {
    const double slack = set.MinSlack(x);
    out << k << ',' << ell << ',' << (start ? 1 : 0);
    char buf[32];
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", x[i]);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", slack);
    out << ',' << buf << ',' << (slack > 1e-6 ? 1 : 0) << '\n';
  };
  const auto& records = report.trace.records;
  for (std::size_t i = 0; i < records.size(); ++i) {
    row(records[i].k, records[i].ell, records[i].event != LevelEvent::kNone,
        report.trace.steps[i].x);
  }
  row(report.iterations, report.groups, false, report.x_final);
}

int StatusExit(SolverStatus status) {
  switch (status) {
    case SolverStatus::kProjectionFailed:
    case SolverStatus::kZeroSubgradient:
      return kExitFailure;
    default:
      return kExitOk;
  }
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const std::uint64_t lo = std::stoull(part.substr(0, dash));
        const std::uint64_t hi = std::stoull(part.substr(dash + 1));
        if (hi < lo || hi - lo > 100000) throw std::invalid_argument(part);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ContractViolation("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw ContractViolation("empty seed list");
  return seeds;
}

// The configuration plus every default that can be fixed before the run.
Json ResolvedConfigJson(const RunConfig& config) {
  Json j = ToJson(config);
  const ResolvedRun run = Resolve(config);
  j["resolved"] = {
      {"rule", ToJson(run.rule)},
      {"x0", ToJson(run.x0)},
      {"delta0", config.delta0 ? Json(*config.delta0) : Json("||s_0|| / 2")},
      {"radius", config.radius ? Json(*config.radius) : Json("||x_1 - x_0||")},
      {"max_inner",
       config.max_inner > 0
           ? config.max_inner
           : DefaultMaxInner(run.problem.problem.set.dimension())}};
  return j;
}

void PrintChecks(std::ostream& out, const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports) {
    const char* verdict = r.skipped    ? "SKIP"
                          : r.passed   ? "PASS"
                          : r.advisory ? "WARN"
                                       : "FAIL";
    out << verdict << "  " << r.name;
    if (!r.skipped) out << "  worst_margin=" << Sci(r.worst_margin);
    if (r.advisory) out << "  (advisory)";
    if (r.first_violation_k) out << "  first_violation_k=" << *r.first_violation_k;
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << '\n';
  }
}

}  // namespace

SummaryRow Summarize(const SolverReport& report) {
  SummaryRow row;
  row.n = report.x_rec.size();
  row.k = report.iterations;
  row.ell = report.groups;
  row.l0 = SparsityCount(report.x_rec);
  row.f_rec = report.f_rec;
  row.delta = report.delta_final;
  return row;
}

std::string SummaryHeader() { return "n,k,ell,l0_x_rec,f_rec,delta_ell"; }

std::string FormatSummary(const SummaryRow& row) {
  return std::to_string(row.n) + "," + std::to_string(row.k) + "," +
         std::to_string(row.ell) + "," + std::to_string(row.l0) + "," +
         Sci(row.f_rec) + "," + Sci(row.delta);
}

SolveOutcome SolveToDirectory(const RunConfig& config) {
  const ResolvedRun run = Resolve(config);
  SolveOutcome outcome;
  outcome.report = Execute(config, run);
  outcome.summary = Summarize(outcome.report);
  outcome.exit_code = StatusExit(outcome.report.status);

  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);
  const SolverReport& report = outcome.report;
  Json doc = {{"schema", kSchemaVersion},
              {"config", ToJson(config)},
              {"rule", ToJson(run.rule)},
              {"x0", ToJson(run.x0)},
              {"report", ToJson(report)},
              {"summary",
               {{"n", outcome.summary.n},
                {"k", outcome.summary.k},
                {"ell", outcome.summary.ell},
                {"l0_x_rec", outcome.summary.l0},
                {"f_rec", ToJson(outcome.summary.f_rec)},
                {"delta_ell", ToJson(outcome.summary.delta)}}}};
  const ProblemInstance& problem = run.problem.problem;
  if (problem.f_star) doc["f_star"] = *problem.f_star;
  if (problem.best_known_value) {
    doc["best_known_value"] = *problem.best_known_value;
  }
  WriteJsonFile((dir / "report.json").string(), doc);
  WriteJsonFile((dir / "problem.json").string(), run.problem.source);
  {
    std::ofstream trace((dir / "trace.csv").string());
    WriteTraceCsv(trace, report.trace);
  }
  if (report.trace.has_iterates()) {
    std::ofstream iterates((dir / "iterates.csv").string());
    WriteIteratesCsv(iterates, report.trace);
  }
  if (config.dump_trajectory) {
    WriteTrajectoryCsv((dir / "trajectory.csv").string(), report, problem.set);
  }
  return outcome;
}

std::vector<CheckReport> VerifyDirectory(const std::string& dir, int probes,
                                         std::uint64_t probe_seed) {
  const fs::path root(dir);
  const Json doc = ReadJsonFile((root / "report.json").string());
  if (!doc.contains("schema") || doc.at("schema").get<int>() != kSchemaVersion) {
    throw ContractViolation("report.json: unsupported schema");
  }
  const LoadedProblem loaded =
      ProblemFromJson(ReadJsonFile((root / "problem.json").string()));
  const SolverReport report = ReportFromJson(doc.at("report"));
  const RunConfig config = RunConfigFromJson(doc.at("config"));

  std::ifstream trace_in((root / "trace.csv").string());
  if (!trace_in) throw ContractViolation("missing trace.csv in " + dir);
  Trace trace = ReadTraceCsv(trace_in);
  const fs::path iterates = root / "iterates.csv";
  if (fs::exists(iterates)) {
    std::ifstream in(iterates.string());
    ReadIteratesCsv(in, trace);
  }

  VerifyInputs inputs;
  inputs.problem = &loaded.problem;
  inputs.rule = RuleFromJson(doc.at("rule"));
  inputs.params = config.params;
  if (std::isfinite(report.delta0)) inputs.delta0 = report.delta0;
  if (std::isfinite(report.radius)) inputs.radius = report.radius;
  if (!loaded.problem.f_star && report.x_rec.size() > 0) {
    inputs.f_surrogate = report.f_rec;
    inputs.x_surrogate = report.x_rec;
  }
  inputs.probes = probes;
  inputs.probe_seed = probe_seed;
  std::vector<CheckReport> reports = RunApplicableChecks(trace, inputs);

  Json out = {{"schema", kSchemaVersion},
              {"all_required_passed", AllRequiredPassed(reports)},
              {"checks", Json::array()}};
  for (const CheckReport& r : reports) out["checks"].push_back(ToJson(r));
  WriteJsonFile((root / "checks.json").string(), out);
  return reports;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Subgradient method with inexact projections"};
  app.name("sinexp");
  app.require_subcommand(1);

  // generate
  CLI::App* generate = app.add_subcommand("generate", "Generate an instance");
  EllipsoidL1Spec gen_spec;
  std::string gen_out;
  generate->add_option("--n", gen_spec.n, "Dimension (>= 2)")
      ->check(CLI::Range(Eigen::Index{2}, Eigen::Index{1} << 20));
  generate->add_option("--seed", gen_spec.seed, "Generator seed");
  generate->add_option("--out", gen_out,
                       "Output file (default instance_n<N>_seed<S>.json)");

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Run a solver");
  SolveFlags solve_flags;
  solve_flags.Register(solve, true);

  // verify
  CLI::App* verify =
      app.add_subcommand("verify", "Check a solve directory against the bounds");
  std::string verify_dir;
  int probes = 20;
  std::uint64_t probe_seed = 1;
  verify->add_option("--run", verify_dir, "Directory written by `solve`")
      ->required()
      ->check(CLI::ExistingDirectory);
  verify->add_option("--probes", probes, "Probe points for the main inequality")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--probe-seed", probe_seed, "Seed for probe sampling");

  // batch
  CLI::App* batch =
      app.add_subcommand("batch", "Solve generated instances for many seeds");
  SolveFlags batch_flags;
  batch_flags.Register(batch, false);
  std::string seeds_text = "1-5";
  unsigned jobs = 1;
  batch->add_option("--seeds", seeds_text, "Seed list, e.g. 1-5 or 1,4,9");
  batch->add_option("--jobs", jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      const EllipsoidL1Instance inst = GenerateInstance(gen_spec);
      const std::string path =
          gen_out.empty() ? "instance_n" + std::to_string(gen_spec.n) +
                                "_seed" + std::to_string(gen_spec.seed) + ".json"
                          : gen_out;
      WriteJsonFile(path, ToJson(inst));
      const InstanceCertificate cert = CertifyInstance(inst);
      out << "wrote " << path << " (n = " << gen_spec.n
          << ", seed = " << gen_spec.seed << ", attempt = " << inst.attempt
          << ")\n";
      out << "certificate: xi e_n in C: " << (cert.sparse_inside ? "yes" : "NO")
          << " (q = " << Sci(cert.q_sparse, 6) << ")"
          << "; 0 not in C: " << (cert.origin_outside ? "yes" : "NO")
          << " (q = " << Sci(cert.q_origin, 6) << ")"
          << "; lambda_n ||u||^2 = " << Sci(cert.lambda_n_u2, 6) << '\n';
      return cert.holds() ? kExitOk : kExitFailure;
    }

    if (solve->parsed()) {
      const RunConfig config = solve_flags.Build();
      if (solve_flags.print_config) {
        out << ResolvedConfigJson(config).dump(2) << '\n';
        return kExitOk;
      }
      const SolveOutcome outcome = SolveToDirectory(config);
      out << "status: " << SolverStatusName(outcome.report.status);
      if (!outcome.report.message.empty()) out << " (" << outcome.report.message << ")";
      out << "\n" << SummaryHeader() << '\n'
          << FormatSummary(outcome.summary) << '\n'
          << "outputs: " << config.out_dir << '\n';
      return outcome.exit_code;
    }

    if (verify->parsed()) {
      const std::vector<CheckReport> reports =
          VerifyDirectory(verify_dir, probes, probe_seed);
      PrintChecks(out, reports);
      const bool ok = AllRequiredPassed(reports);
      out << (ok ? "all required checks passed" : "required checks failed")
          << '\n';
      return ok ? kExitOk : kExitFailure;
    }

    if (batch->parsed()) {
      RunConfig base = batch_flags.Build();
      base.source = ProblemSource::kGenerated;
      if (batch_flags.print_config) {
        out << ToJson(base).dump(2) << '\n';
        return kExitOk;
      }
      const std::vector<std::uint64_t> seeds = ParseSeeds(seeds_text);
      std::vector<std::string> rows(seeds.size());
      std::vector<int> codes(seeds.size(), kExitOk);
      std::size_t next = 0;
      std::mutex mutex;
      auto worker = [&]() {
        while (true) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mutex);
            if (next >= seeds.size()) return;
            i = next++;
          }
          RunConfig config = base;
          config.spec.seed = seeds[i];
          config.out_dir = (fs::path(base.out_dir) /
                            ("n" + std::to_string(base.spec.n) + "_seed" +
                             std::to_string(seeds[i])))
                               .string();
          try {
            const SolveOutcome o = SolveToDirectory(config);
            rows[i] = std::to_string(seeds[i]) + "," +
                      std::string(SolverStatusName(o.report.status)) + "," +
                      FormatSummary(o.summary);
            codes[i] = o.exit_code;
          } catch (const std::exception& e) {
            rows[i] = std::to_string(seeds[i]) + ",error," + e.what();
            codes[i] = kExitFailure;
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned count =
          std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size()));
      for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
      out << "seed,status," << SummaryHeader() << '\n';
      for (const std::string& row : rows) out << row << '\n';
      return *std::max_element(codes.begin(), codes.end());
    }
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sinexp::cli
