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

#include "sinexp/problems.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace sinexp {

namespace {

// Distribution transforms are written out so that instances are identical
// across standard library implementations.
class InstanceRng {
 public:
  InstanceRng(std::uint64_t seed, int attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    engine_.seed(seq);
  }

  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(const Interval& range) {
    return range.low + (range.high - range.low) * Uniform01();
  }

  double Gaussian() {
    const double u1 = 1.0 - Uniform01();  // (0, 1]
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

void CheckSpec(const EllipsoidL1Spec& spec) {
  if (spec.n < 2) throw ContractViolation("generate_instance: n must be >= 2");
  auto ordered = [](const Interval& r) { return r.low > 0.0 && r.low < r.high; };
  if (!ordered(spec.lambda_n_range) || !ordered(spec.lambda_rest_range) ||
      !ordered(spec.u_norm_factor) || !ordered(spec.u_entry_range)) {
    throw ContractViolation("generate_instance: ranges must be positive and ordered");
  }
  if (spec.u_norm_factor.high > 1.0) {
    throw ContractViolation(
        "generate_instance: ||u|| must stay below 1/sqrt(lambda_n)");
  }
  if (spec.lambda_n_range.high >= spec.lambda_rest_range.low) {
    throw ContractViolation(
        "generate_instance: lambda_n must be the strictly smallest eigenvalue");
  }
}

// Columns 0..n-2 complete u / ||u|| (stored in column n-1) to an orthonormal
// basis by orthogonalizing Gaussian draws twice against the accumulated
// columns.
Matrix CompleteBasis(const Vector& unit_u, InstanceRng& rng) {
  const Eigen::Index n = unit_u.size();
  Matrix basis(n, n);
  basis.col(0) = unit_u;
  for (Eigen::Index j = 1; j < n; ++j) {
    const auto accumulated = basis.leftCols(j);
    for (int draw = 0;; ++draw) {
      if (draw > 100) throw SolverError("generate_instance: basis completion failed");
      Vector g(n);
      for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.Gaussian();
      const double g_norm = g.norm();
      for (int pass = 0; pass < 2; ++pass) {
        g -= accumulated * (accumulated.transpose() * g);
      }
      const double residual = g.norm();
      if (residual > 1e-6 * g_norm) {
        basis.col(j) = g / residual;
        break;
      }
    }
  }
  Matrix eigenvectors(n, n);
  eigenvectors.leftCols(n - 1) = basis.rightCols(n - 1);
  eigenvectors.col(n - 1) = unit_u;
  return eigenvectors;
}


}  // namespace

double L1Value(const Vector& x) { return x.lpNorm<1>(); }

Vector L1Subgradient(const Vector& x) {
  return x.unaryExpr([](double v) {
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  });
}

ShiftedL1::ShiftedL1(Vector shift)
    : shift_(std::move(shift)), plain_(shift_.isZero(0.0)) {
  RequireFinite(shift_, "shifted l1 shift");
}

std::shared_ptr<const ShiftedL1> ShiftedL1::Plain(Eigen::Index n) {
  return std::make_shared<const ShiftedL1>(Vector::Zero(n));
}

std::string ShiftedL1::name() const { return plain_ ? "l1" : "shifted_l1"; }

double ShiftedL1::Value(const Vector& x) const {
  RequireDimension(x, shift_.size(), "l1 value");
  return plain_ ? L1Value(x) : L1Value(x - shift_);
}

Vector ShiftedL1::Subgradient(const Vector& x, double eps) const {
  RequireDimension(x, shift_.size(), "l1 subgradient");
  if (eps < 0.0) throw ContractViolation("l1 subgradient: eps must be >= 0");
  // The exact subgradient lies in every eps-subdifferential.
  return plain_ ? L1Subgradient(x) : L1Subgradient(x - shift_);
}

bool ShiftedL1::IsStationary(const Vector& x) const {
  RequireDimension(x, shift_.size(), "l1 stationarity");
  return x == shift_;
}

void ProblemInstance::Validate() const {
  if (!objective) throw ContractViolation("problem: missing objective");
  if (f_star && x_star) {
    RequireDimension(*x_star, set.dimension(), "problem x_star");
    if (std::abs(objective->Value(*x_star) - *f_star) > 1e-10) {
      throw ContractViolation("problem: f(x_star) != f_star");
    }
    if (!set.Contains(*x_star, 1e-8)) {
      throw ContractViolation("problem: x_star is not feasible");
    }
  }
}

ProblemInstance BoxL1Problem(const Vector& p, const Vector& lower,
                             const Vector& upper) {
  RequireDimension(p, lower.size(), "box_l1 p");
  ProblemInstance problem{std::make_shared<const ShiftedL1>(p),
                          FeasibleSet::MakeBox(lower, upper), std::nullopt,
                          std::nullopt, std::nullopt};
  const Vector x_star = p.cwiseMax(lower).cwiseMin(upper);
  problem.x_star = x_star;
  problem.f_star = L1Value(p - x_star);
  problem.Validate();
  return problem;
}

Vector EllipsoidL1Instance::SparsePoint() const {
  return xi * Vector::Unit(center.size(), center.size() - 1);
}

EllipsoidL1Instance AssembleInstance(const EllipsoidL1Spec& spec, int attempt,
                                     EllipsoidSpectrum spectrum, Vector u,
                                     double xi) {
  CheckSpec(spec);
  const Eigen::Index n = spec.n;
  RequireDimension(u, n, "instance u");
  if (spectrum.dimension() != n) {
    throw ContractViolation("instance: spectrum dimension mismatch");
  }
  const double lambda_n = spectrum.eigenvalues()[n - 1];
  if (!(xi >= 1.0 / std::sqrt(lambda_n) * (1.0 - 1e-15))) {
    throw ContractViolation("instance: xi must be >= 1/sqrt(lambda_n)");
  }
  const Vector unit_u = u / u.norm();
  if ((spectrum.eigenvectors().col(n - 1) - unit_u).cwiseAbs().maxCoeff() >
      1e-10) {
    throw ContractViolation("instance: v_n must equal u / ||u||");
  }
  EllipsoidL1Instance inst;
  inst.spec = spec;
  inst.attempt = attempt;
  inst.u = std::move(u);
  inst.xi = xi;
  inst.center = inst.u;
  inst.center[n - 1] += xi;
  inst.problem.objective = ShiftedL1::Plain(n);
  inst.problem.set =
      FeasibleSet::MakeEllipsoidOrthant(inst.center, std::move(spectrum));
  inst.problem.best_known_value = L1Value(inst.SparsePoint());
  return inst;
}

InstanceCertificate CertifyInstance(const EllipsoidL1Instance& inst) {
  const FeasibleSet& set = inst.problem.set;
  const auto& shape = std::get<EllipsoidOrthant>(set.shape());
  InstanceCertificate cert;
  cert.lambda_n_u2 =
      shape.spectrum.eigenvalues().minCoeff() * inst.u.squaredNorm();
  cert.q_sparse = shape.spectrum.QuadraticForm(inst.SparsePoint() - inst.center);
  cert.q_origin = shape.spectrum.QuadraticForm(-inst.center);
  cert.sparse_inside = set.Contains(inst.SparsePoint(), 1e-8);
  cert.origin_outside = !set.Contains(Vector::Zero(set.dimension()), 0.0);
  return cert;
}

EllipsoidL1Instance GenerateInstance(const EllipsoidL1Spec& spec) {
  CheckSpec(spec);
  const Eigen::Index n = spec.n;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    InstanceRng rng(spec.seed, attempt);
    const double lambda_n = rng.Uniform(spec.lambda_n_range);
    std::vector<double> rest(static_cast<size_t>(n - 1));
    for (double& value : rest) value = rng.Uniform(spec.lambda_rest_range);
    std::sort(rest.begin(), rest.end(), std::greater<>());
    Vector eigenvalues(n);
    for (Eigen::Index i = 0; i < n - 1; ++i) eigenvalues[i] = rest[i];
    eigenvalues[n - 1] = lambda_n;

    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.Uniform(spec.u_entry_range);
    const double target_norm =
        rng.Uniform(spec.u_norm_factor) / std::sqrt(lambda_n);
    u *= target_norm / u.norm();

    Matrix eigenvectors = CompleteBasis(u / u.norm(), rng);
    const double xi = 1.0 / std::sqrt(lambda_n);
    try {
      EllipsoidL1Instance inst = AssembleInstance(
          spec, attempt, EllipsoidSpectrum(eigenvalues, std::move(eigenvectors)),
          std::move(u), xi);
      if (CertifyInstance(inst).holds()) return inst;
    } catch (const ContractViolation&) {
      // Numerically degenerate draw; try the next substream.
    }
  }
  throw SolverError("generate_instance: feasibility claims failed after " +
                    std::to_string(spec.max_attempts) + " attempts");
}

}  // namespace sinexp
