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

#ifndef SINEXP_FEASIBLE_SET_H_
#define SINEXP_FEASIBLE_SET_H_

#include <memory>
#include <string_view>
#include <variant>

#include "sinexp/types.h"

namespace sinexp {

// Q = sum_i eigenvalues[i] * v_i v_i^T with v_i the i-th column of
// `eigenvectors`. Eigenvalues are stored in nonincreasing order.
class EllipsoidSpectrum {
 public:
  EllipsoidSpectrum() = default;
  // Validates positivity and orthonormality of the columns (1e-12).
  EllipsoidSpectrum(Vector eigenvalues, Matrix eigenvectors);

  // Decomposes a dense symmetric positive definite matrix.
  static EllipsoidSpectrum FromMatrix(const Matrix& q);

  Eigen::Index dimension() const { return eigenvalues_.size(); }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double min_eigenvalue() const { return eigenvalues_.minCoeff(); }

  // d^T Q d, Q d and Q^{-1} d through the spectral factors.
  double QuadraticForm(const Vector& d) const;
  Vector Apply(const Vector& d) const;
  Vector ApplyInverse(const Vector& d) const;

  Matrix Dense() const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Simplex {
  Eigen::Index dimension = 1;
};

// {z : (z - center)^T Q (z - center) <= 1}
struct Ellipsoid {
  Vector center;
  EllipsoidSpectrum spectrum;
};

// Ellipsoid intersected with the nonnegative orthant.
struct EllipsoidOrthant {
  Vector center;
  EllipsoidSpectrum spectrum;
};

enum class SetKind { kBox, kBall, kSimplex, kEllipsoid, kEllipsoidOrthant };

std::string_view SetKindName(SetKind kind);

using SetShape = std::variant<Box, Ball, Simplex, Ellipsoid, EllipsoidOrthant>;

// A compact convex set accessed through oracles. Immutable; copies share
// the underlying data and may be used concurrently.
class FeasibleSet {
 public:
  // Empty handle; every query except empty() throws until assigned.
  FeasibleSet() = default;

  static FeasibleSet MakeBox(Vector lower, Vector upper);
  static FeasibleSet MakeBall(Vector center, double radius);
  static FeasibleSet MakeSimplex(Eigen::Index dimension);
  static FeasibleSet MakeEllipsoid(Vector center, EllipsoidSpectrum spectrum);
  static FeasibleSet MakeEllipsoidOrthant(Vector center,
                                          EllipsoidSpectrum spectrum);

  bool empty() const { return impl_ == nullptr; }
  Eigen::Index dimension() const;
  SetKind kind() const;
  const SetShape& shape() const;
  // Upper bound on max_{z,w in C} ||z - w||.
  double diameter_bound() const;

  // argmin_{z in C} <c, z>. Ties are broken toward the lower bound (box) or
  // the smallest index (simplex); c = 0 yields CanonicalPoint().
  Vector Lmo(const Vector& c) const;

  bool Contains(const Vector& x, double tol) const;

  // Smallest constraint slack; positive iff x is strictly interior.
  // Constraint functions: box bounds, r - ||x - center||, 1 - q(x), x_i.
  double MinSlack(const Vector& x) const;
  // max(0, -MinSlack(x)), except for the simplex where the equality
  // constraint contributes |sum(x) - 1|.
  double FeasibilityResidual(const Vector& x) const;

  bool HasExactProjection() const;
  // Closed-form Euclidean projection; box and ball only.
  Vector ExactProject(const Vector& v) const;

  // A fixed feasible point: center, x-bar, lower corner or first vertex. For
  // the ellipsoid-orthant set this is the barrier start point.
  Vector CanonicalPoint() const;

  // Dense Q for the ellipsoid-orthant kind when n <= 1000, else nullptr.
  const Matrix* dense_q() const;

 private:
  struct Impl;
  explicit FeasibleSet(std::shared_ptr<const Impl> impl);
  const Impl& impl() const;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace sinexp

#endif  // SINEXP_FEASIBLE_SET_H_
