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

#ifndef SINEXP_PROBLEMS_H_
#define SINEXP_PROBLEMS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sinexp/feasible_set.h"
#include "sinexp/types.h"

namespace sinexp {

// Convex objective accessed through value and eps-subgradient oracles.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::string name() const = 0;
  virtual double Value(const Vector& x) const = 0;
  // Some s with f(y) >= f(x) + <s, y - x> - eps for all y.
  virtual Vector Subgradient(const Vector& x, double eps) const = 0;
  // Whether 0 is in the subdifferential at x.
  virtual bool IsStationary(const Vector& x) const = 0;
};

double L1Value(const Vector& x);
// Componentwise sign with sign(0) = 0.
Vector L1Subgradient(const Vector& x);

// f(x) = ||x - shift||_1; shift = 0 gives the plain l1 norm.
class ShiftedL1 final : public Objective {
 public:
  explicit ShiftedL1(Vector shift);
  static std::shared_ptr<const ShiftedL1> Plain(Eigen::Index n);

  std::string name() const override;
  double Value(const Vector& x) const override;
  Vector Subgradient(const Vector& x, double eps) const override;
  bool IsStationary(const Vector& x) const override;
  const Vector& shift() const { return shift_; }

 private:
  Vector shift_;
  bool plain_;
};

struct ProblemInstance {
  std::shared_ptr<const Objective> objective;
  FeasibleSet set;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  // Feasible reference value when f* is unknown (e.g. f(xi e_n)).
  std::optional<double> best_known_value;

  // |f(x*) - f*| <= 1e-10 and x* in C (1e-8) when both are present.
  void Validate() const;
};

// min ||x - p||_1 over [lower, upper]; x* = clamp(p), f* = ||p - x*||_1.
ProblemInstance BoxL1Problem(const Vector& p, const Vector& lower,
                             const Vector& upper);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Random sparse-recovery instance of min ||x||_1 over
// {x >= 0, (x - xbar)^T Q (x - xbar) <= 1} with a 1-sparse feasible point.
struct EllipsoidL1Spec {
  Eigen::Index n = 10;
  std::uint64_t seed = 1;
  Interval lambda_n_range{1e-6, 1e-2};
  Interval lambda_rest_range{10.0, 1e3};
  // ||u|| is drawn from (low / sqrt(lambda_n), high / sqrt(lambda_n)).
  Interval u_norm_factor{0.8, 1.0};
  // Entries of u before rescaling.
  Interval u_entry_range{0.1, 1.0};
  int max_attempts = 8;
};

struct EllipsoidL1Instance {
  EllipsoidL1Spec spec;
  int attempt = 0;  // substream that produced the instance
  Vector u;
  double xi = 0.0;
  Vector center;  // xbar = u + xi e_n
  ProblemInstance problem;

  // xi e_n, feasible by construction.
  Vector SparsePoint() const;
};

// Numerical check of the construction's claims.
struct InstanceCertificate {
  double lambda_n_u2 = 0.0;  // lambda_n ||u||^2, < 1 by construction
  double q_sparse = 0.0;     // q(xi e_n)
  double q_origin = 0.0;     // q(0)
  bool sparse_inside = false;
  bool origin_outside = false;

  bool holds() const {
    return lambda_n_u2 < 1.0 && sparse_inside && origin_outside;
  }
};

InstanceCertificate CertifyInstance(const EllipsoidL1Instance& inst);

// Retries substreams until CertifyInstance holds.
EllipsoidL1Instance GenerateInstance(const EllipsoidL1Spec& spec);

// Rebuilds an instance from stored data; checks xi and v_n = u / ||u|| but
// not the feasibility claims (see CertifyInstance).
EllipsoidL1Instance AssembleInstance(const EllipsoidL1Spec& spec, int attempt,
                                     EllipsoidSpectrum spectrum, Vector u,
                                     double xi);

}  // namespace sinexp

#endif  // SINEXP_PROBLEMS_H_
