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

#include "sinexp/inexact_projection.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace sinexp {

void ToleranceParams::Validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw ContractViolation("tolerance params: gamma must be >= 0");
  }
  if (!(theta >= 0.0 && theta < 0.5)) {
    throw ContractViolation("tolerance params: theta must lie in [0, 1/2)");
  }
  if (!(lambda >= 0.0 && lambda < 0.5)) {
    throw ContractViolation("tolerance params: lambda must lie in [0, 1/2)");
  }
}

double Phi(const ToleranceParams& params, const Vector& u, const Vector& v,
           const Vector& w) {
  RequireDimension(v, u.size(), "phi v");
  RequireDimension(w, u.size(), "phi w");
  return params.gamma * (v - u).squaredNorm() +
         params.theta * (w - v).squaredNorm() +
         params.lambda * (w - u).squaredNorm();
}

int DefaultMaxInner(Eigen::Index dimension) {
  return static_cast<int>(10 * dimension + 1000);
}

double DefaultGapFloor(const Vector& v) { return 1e-12 * (1.0 + v.squaredNorm()); }

ProjectionResult FwProject(const FeasibleSet& set,
                           const ToleranceParams& params, const Vector& u,
                           const Vector& v, const ProjectionOptions& options) {
  params.Validate();
  RequireDimension(u, set.dimension(), "fw_project u");
  RequireDimension(v, set.dimension(), "fw_project v");
  RequireFinite(v, "fw_project v");
  if (!set.Contains(u, options.feasibility_tol)) {
    throw ContractViolation("fw_project: u is not in C (residual " +
                            std::to_string(set.FeasibilityResidual(u)) + ")");
  }
  const int max_inner =
      options.max_inner > 0 ? options.max_inner : DefaultMaxInner(set.dimension());
  if (options.max_inner < 0) {
    throw ContractViolation("fw_project: max_inner must be positive");
  }
  const double floor = options.gap_floor.value_or(DefaultGapFloor(v));

  ProjectionResult result;
  const double gamma_term = params.gamma * (v - u).squaredNorm();
  Vector w = u;
  Vector grad(u.size());
  Vector dir(u.size());
  double gap = 0.0;
  for (int k = 1; k <= max_inner; ++k) {
    grad = w - v;
    dir = set.Lmo(grad) - w;
    gap = grad.dot(dir);
    const double phi = gamma_term + params.theta * grad.squaredNorm() +
                       params.lambda * (w - u).squaredNorm();
    if (options.record_history) {
      result.gap_history.push_back({k, gap, 0.5 * grad.squaredNorm()});
    }
    if (gap >= -std::max(phi, floor)) {
      result.point = std::move(w);
      result.inner_iterations = k;
      result.final_gap = gap;
      result.tolerance_at_exit = phi;
      return result;
    }
    const double dir_sq = dir.squaredNorm();
    if (dir_sq == 0.0) {
      throw SolverError("fw_project: internal error, LMO returned w_k with g* < 0");
    }
    const double tau = std::min(1.0, -gap / dir_sq);
    w += tau * dir;
  }
  throw ProjectionFailure("fw_project: no certificate after " +
                              std::to_string(max_inner) +
                              " inner iterations (gap " + std::to_string(gap) +
                              ")",
                          w, gap, max_inner);
}

Certificate CertifyProjection(const FeasibleSet& set,
                              const ToleranceParams& params, const Vector& u,
                              const Vector& v, const Vector& w,
                              std::optional<double> slack) {
  RequireDimension(u, set.dimension(), "certify u");
  RequireDimension(v, set.dimension(), "certify v");
  RequireDimension(w, set.dimension(), "certify w");
  if (!set.Contains(w, 1e-8)) {
    const double residual = set.FeasibilityResidual(w);
    throw CertificateRefused(
        "certify_projection: w is not in C (residual " +
            std::to_string(residual) + ")",
        residual);
  }
  const Vector z = set.Lmo(w - v);
  Certificate cert;
  cert.slack = slack.value_or(DefaultGapFloor(v));
  cert.violation = (v - w).dot(z - w) - Phi(params, u, v, w);
  cert.certified = cert.violation <= cert.slack;
  return cert;
}

}  // namespace sinexp
