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

#ifndef SINEXP_INEXACT_PROJECTION_H_
#define SINEXP_INEXACT_PROJECTION_H_

#include <optional>
#include <vector>

#include "sinexp/feasible_set.h"
#include "sinexp/types.h"

namespace sinexp {

// Forcing parameters of the relative error tolerance
//   phi(u, v, w) = gamma ||v - u||^2 + theta ||w - v||^2 + lambda ||w - u||^2.
struct ToleranceParams {
  double gamma = 0.025;
  double theta = 0.25;
  double lambda = 0.025;

  static ToleranceParams Exact() { return {0.0, 0.0, 0.0}; }
  bool IsZero() const { return gamma == 0.0 && theta == 0.0 && lambda == 0.0; }
  // gamma >= 0 and theta, lambda in [0, 1/2).
  void Validate() const;
};

double Phi(const ToleranceParams& params, const Vector& u, const Vector& v,
           const Vector& w);

struct GapSample {
  int k = 0;
  double gap = 0.0;  // g*_k = <w_k - v, z_k - w_k>
  double psi = 0.0;  // 0.5 ||w_k - v||^2
};

struct ProjectionResult {
  Vector point;
  int inner_iterations = 0;
  double final_gap = 0.0;
  double tolerance_at_exit = 0.0;  // phi(u, v, point)
  std::vector<GapSample> gap_history;
};

struct ProjectionOptions {
  // 0 selects 10 n + 1000.
  int max_inner = 0;
  // Absolute floor on the stopping tolerance; defaults to
  // 1e-12 (1 + ||v||^2). The test becomes g*_k >= -max(phi, floor).
  std::optional<double> gap_floor;
  bool record_history = false;
  // Tolerance used for the u in C precondition and the iterate checks.
  double feasibility_tol = 1e-8;
};

int DefaultMaxInner(Eigen::Index dimension);
double DefaultGapFloor(const Vector& v);

// The inner iteration budget ran out before the certificate fired.
class ProjectionFailure : public SolverError {
 public:
  ProjectionFailure(const std::string& what, Vector best, double gap,
                    int iterations)
      : SolverError(what),
        best_(std::move(best)),
        gap_(gap),
        iterations_(iterations) {}
  const Vector& best() const { return best_; }
  double gap() const { return gap_; }
  int iterations() const { return iterations_; }

 private:
  Vector best_;
  double gap_;
  int iterations_;
};

// Frank-Wolfe procedure for a feasible inexact projection of v onto C
// relative to u in C. Starts at w_1 = u, calls the LMO with w_k - v and takes
// the exact line-search step on psi(w) = 0.5 ||w - v||^2 until
// g*_k >= -phi(u, v, w_k).
ProjectionResult FwProject(const FeasibleSet& set,
                           const ToleranceParams& params, const Vector& u,
                           const Vector& v,
                           const ProjectionOptions& options = {});

struct Certificate {
  bool certified = false;
  // sup_{z in C} <v - w, z - w> - phi(u, v, w); nonpositive when certified
  // up to the slack.
  double violation = 0.0;
  double slack = 0.0;
};

// w was not in C, so no certificate can be issued.
class CertificateRefused : public ContractViolation {
 public:
  CertificateRefused(const std::string& what, double residual)
      : ContractViolation(what), residual_(residual) {}
  double feasibility_residual() const { return residual_; }

 private:
  double residual_;
};

// Checks w in P_C(phi, u, v) with one LMO call at w - v; the condition is
// linear in z so the LMO point is the worst case. The acceptance slack
// defaults to the gap floor, 1e-12 (1 + ||v||^2).
Certificate CertifyProjection(const FeasibleSet& set,
                              const ToleranceParams& params, const Vector& u,
                              const Vector& v, const Vector& w,
                              std::optional<double> slack = std::nullopt);

}  // namespace sinexp

#endif  // SINEXP_INEXACT_PROJECTION_H_
