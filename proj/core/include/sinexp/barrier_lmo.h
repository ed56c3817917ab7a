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

#ifndef SINEXP_BARRIER_LMO_H_
#define SINEXP_BARRIER_LMO_H_

#include "sinexp/feasible_set.h"
#include "sinexp/types.h"

namespace sinexp {

// Linear minimization over {z >= 0, (z - xbar)^T Q (z - xbar) <= 1} by a
// log-barrier Newton method followed by an active-set polish.
//
// The barrier subproblem for parameter t is
//   min  t <c, z> - ln(1 - q(z)) - sum_i ln z_i
// with t <- 10 t starting at t = 1 until (n + 1) / t <= 1e-11. Each stage runs
// damped Newton with Armijo backtracking. The polish step fixes the
// coordinates the barrier drove to zero and solves the remaining
// ellipsoid-slice problem in closed form, which recovers exact zeros.
struct BarrierOptions {
  double initial_t = 1.0;
  double t_factor = 10.0;
  double duality_gap_tol = 1e-11;   // outer stop: (n + 1) / t
  double newton_tol = 1e-10;        // inner stop on the Newton decrement
  double armijo_factor = 0.5;
  double armijo_slope = 1e-4;
  int max_newton_per_stage = 100;
  int max_total_newton = 3000;
  double kkt_target = 1e-10;
  // Returned points whose KKT residual exceeds this raise LmoFailure.
  double kkt_failure = 1e-6;
  bool polish = true;
};

struct BarrierLmoReport {
  Vector point;
  double objective = 0.0;     // <c, point>
  double kkt_residual = 0.0;  // for the normalized direction c / ||c||
  double multiplier_q = 0.0;  // ellipsoid constraint multiplier
  Vector multipliers_z;       // orthant multipliers
  int stages = 0;
  int newton_steps = 0;
  bool polished = false;
};

class LmoFailure : public SolverError {
 public:
  LmoFailure(const std::string& what, double residual)
      : SolverError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Requires set.kind() == SetKind::kEllipsoidOrthant.
BarrierLmoReport EllipsoidOrthantLmo(const FeasibleSet& set, const Vector& c,
                                     const BarrierOptions& options = {});

// Max of stationarity, primal, dual and complementarity violations of the
// KKT system for min <c_hat, z> over the ellipsoid-orthant set, where
// c_hat = c / ||c||:
//   c_hat + mu_q grad q(z) - mu_z = 0, mu >= 0, mu_q (1 - q) = 0, mu_z z = 0.
double EllipsoidOrthantKktResidual(const FeasibleSet& set, const Vector& c,
                                   const Vector& z, double mu_q,
                                   const Vector& mu_z);

// Strictly feasible start: xbar clipped to z_i >= max(xbar_i, eps0) with eps0
// halved until q(z0) < 1.
Vector BarrierStartPoint(const EllipsoidOrthant& shape);

}  // namespace sinexp

#endif  // SINEXP_BARRIER_LMO_H_
