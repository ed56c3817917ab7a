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

#include "sinexp/feasible_set.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "sinexp/barrier_lmo.h"

namespace sinexp {

namespace {

constexpr double kOrthonormalityTol = 1e-12;
constexpr Eigen::Index kDenseQLimit = 1000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

EllipsoidSpectrum::EllipsoidSpectrum(Vector eigenvalues, Matrix eigenvectors)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)) {
  const Eigen::Index n = eigenvalues_.size();
  if (n == 0) throw ContractViolation("EllipsoidSpectrum: empty spectrum");
  if (eigenvectors_.rows() != n || eigenvectors_.cols() != n) {
    throw ContractViolation("EllipsoidSpectrum: eigenvector matrix must be " +
                            std::to_string(n) + "x" + std::to_string(n));
  }
  if (!eigenvalues_.allFinite() || !eigenvectors_.allFinite()) {
    throw ContractViolation("EllipsoidSpectrum: non-finite entry");
  }
  if ((eigenvalues_.array() <= 0.0).any()) {
    throw ContractViolation("EllipsoidSpectrum: eigenvalues must be positive");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (eigenvalues_[i] > eigenvalues_[i - 1]) {
      throw ContractViolation(
          "EllipsoidSpectrum: eigenvalues must be nonincreasing");
    }
  }
  const Matrix gram = eigenvectors_.transpose() * eigenvectors_;
  const double residual =
      (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > kOrthonormalityTol) {
    throw ContractViolation(
        "EllipsoidSpectrum: eigenvectors not orthonormal (residual " +
        std::to_string(residual) + ")");
  }
}

EllipsoidSpectrum EllipsoidSpectrum::FromMatrix(const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw ContractViolation("EllipsoidSpectrum::FromMatrix: Q must be square");
  }
  if ((q - q.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    throw ContractViolation("EllipsoidSpectrum::FromMatrix: Q not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(q);
  if (solver.info() != Eigen::Success) {
    throw SolverError("EllipsoidSpectrum::FromMatrix: eigensolver failed");
  }
  // Eigen sorts ascending.
  Vector values = solver.eigenvalues().reverse();
  Matrix vectors = solver.eigenvectors().rowwise().reverse();
  return EllipsoidSpectrum(std::move(values), std::move(vectors));
}

double EllipsoidSpectrum::QuadraticForm(const Vector& d) const {
  const Vector y = eigenvectors_.transpose() * d;
  return (eigenvalues_.array() * y.array().square()).sum();
}

Vector EllipsoidSpectrum::Apply(const Vector& d) const {
  const Vector y = eigenvectors_.transpose() * d;
  return eigenvectors_ * (eigenvalues_.array() * y.array()).matrix();
}

Vector EllipsoidSpectrum::ApplyInverse(const Vector& d) const {
  const Vector y = eigenvectors_.transpose() * d;
  return eigenvectors_ * (y.array() / eigenvalues_.array()).matrix();
}

Matrix EllipsoidSpectrum::Dense() const {
  Matrix q = eigenvectors_ * eigenvalues_.asDiagonal() *
             eigenvectors_.transpose();
  return 0.5 * (q + q.transpose());
}

std::string_view SetKindName(SetKind kind) {
  switch (kind) {
    case SetKind::kBox:
      return "box";
    case SetKind::kBall:
      return "ball";
    case SetKind::kSimplex:
      return "simplex";
    case SetKind::kEllipsoid:
      return "ellipsoid";
    case SetKind::kEllipsoidOrthant:
      return "ellipsoid_orthant";
  }
  return "unknown";
}

struct FeasibleSet::Impl {
  SetShape shape;
  Eigen::Index dimension = 0;
  double diameter = 0.0;
  Matrix dense_q;  // ellipsoid_orthant with n <= kDenseQLimit only
  Vector canonical;
};

FeasibleSet::FeasibleSet(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

const FeasibleSet::Impl& FeasibleSet::impl() const {
  if (!impl_) throw ContractViolation("feasible set is empty");
  return *impl_;
}

FeasibleSet FeasibleSet::MakeBox(Vector lower, Vector upper) {
  if (lower.size() == 0) throw ContractViolation("box: empty dimension");
  RequireDimension(upper, lower.size(), "box upper");
  RequireFinite(lower, "box lower");
  RequireFinite(upper, "box upper");
  if ((lower.array() > upper.array()).any()) {
    throw ContractViolation("box: lower > upper");
  }
  auto impl = std::make_shared<Impl>();
  impl->dimension = lower.size();
  impl->diameter = (upper - lower).norm();
  impl->canonical = lower;
  impl->shape = Box{std::move(lower), std::move(upper)};
  return FeasibleSet(std::move(impl));
}

FeasibleSet FeasibleSet::MakeBall(Vector center, double radius) {
  if (center.size() == 0) throw ContractViolation("ball: empty dimension");
  RequireFinite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ContractViolation("ball: radius must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->dimension = center.size();
  impl->diameter = 2.0 * radius;
  impl->canonical = center;
  impl->shape = Ball{std::move(center), radius};
  return FeasibleSet(std::move(impl));
}

FeasibleSet FeasibleSet::MakeSimplex(Eigen::Index dimension) {
  if (dimension < 1) throw ContractViolation("simplex: dimension < 1");
  auto impl = std::make_shared<Impl>();
  impl->dimension = dimension;
  impl->diameter = dimension > 1 ? std::sqrt(2.0) : 0.0;
  impl->canonical = Vector::Unit(dimension, 0);
  impl->shape = Simplex{dimension};
  return FeasibleSet(std::move(impl));
}

FeasibleSet FeasibleSet::MakeEllipsoid(Vector center,
                                       EllipsoidSpectrum spectrum) {
  RequireDimension(center, spectrum.dimension(), "ellipsoid center");
  RequireFinite(center, "ellipsoid center");
  auto impl = std::make_shared<Impl>();
  impl->dimension = center.size();
  impl->diameter = 2.0 / std::sqrt(spectrum.min_eigenvalue());
  impl->canonical = center;
  impl->shape = Ellipsoid{std::move(center), std::move(spectrum)};
  return FeasibleSet(std::move(impl));
}

FeasibleSet FeasibleSet::MakeEllipsoidOrthant(Vector center,
                                              EllipsoidSpectrum spectrum) {
  RequireDimension(center, spectrum.dimension(), "ellipsoid_orthant center");
  RequireFinite(center, "ellipsoid_orthant center");
  auto impl = std::make_shared<Impl>();
  impl->dimension = center.size();
  impl->diameter = 2.0 / std::sqrt(spectrum.min_eigenvalue());
  if (impl->dimension <= kDenseQLimit) impl->dense_q = spectrum.Dense();
  EllipsoidOrthant shape{std::move(center), std::move(spectrum)};
  impl->canonical = BarrierStartPoint(shape);
  impl->shape = std::move(shape);
  return FeasibleSet(std::move(impl));
}

Eigen::Index FeasibleSet::dimension() const { return impl().dimension; }

SetKind FeasibleSet::kind() const {
  return static_cast<SetKind>(impl().shape.index());
}

const SetShape& FeasibleSet::shape() const { return impl().shape; }

double FeasibleSet::diameter_bound() const { return impl().diameter; }

const Matrix* FeasibleSet::dense_q() const {
  return impl().dense_q.size() > 0 ? &impl().dense_q : nullptr;
}

Vector FeasibleSet::CanonicalPoint() const { return impl().canonical; }

Vector FeasibleSet::Lmo(const Vector& c) const {
  RequireDimension(c, dimension(), "lmo direction");
  RequireFinite(c, "lmo direction");
  if (kind() != SetKind::kEllipsoidOrthant && c.isZero(0.0)) {
    return CanonicalPoint();
  }
  return std::visit(
      Overloaded{
          [&](const Box& box) -> Vector {
            return (c.array() >= 0.0).select(box.lower, box.upper);
          },
          [&](const Ball& ball) -> Vector {
            return ball.center - (ball.radius / c.norm()) * c;
          },
          [&](const Simplex& simplex) -> Vector {
            Eigen::Index best = 0;
            c.minCoeff(&best);  // first minimal index
            return Vector::Unit(simplex.dimension, best);
          },
          [&](const Ellipsoid& ellipsoid) -> Vector {
            const Vector qinv_c = ellipsoid.spectrum.ApplyInverse(c);
            return ellipsoid.center - qinv_c / std::sqrt(c.dot(qinv_c));
          },
          [&](const EllipsoidOrthant&) -> Vector {
            return EllipsoidOrthantLmo(*this, c).point;
          },
      },
      impl().shape);
}

double FeasibleSet::MinSlack(const Vector& x) const {
  RequireDimension(x, dimension(), "slack point");
  return std::visit(
      Overloaded{
          [&](const Box& box) {
            return std::min((x - box.lower).minCoeff(),
                            (box.upper - x).minCoeff());
          },
          [&](const Ball& ball) {
            return ball.radius - (x - ball.center).norm();
          },
          [&](const Simplex&) {
            return std::min(x.minCoeff(), -std::abs(x.sum() - 1.0));
          },
          [&](const Ellipsoid& ellipsoid) {
            return 1.0 - ellipsoid.spectrum.QuadraticForm(x - ellipsoid.center);
          },
          [&](const EllipsoidOrthant& eo) {
            return std::min(1.0 - eo.spectrum.QuadraticForm(x - eo.center),
                            x.minCoeff());
          },
      },
      impl().shape);
}

double FeasibleSet::FeasibilityResidual(const Vector& x) const {
  return std::max(0.0, -MinSlack(x));
}

bool FeasibleSet::Contains(const Vector& x, double tol) const {
  if (tol < 0.0) throw ContractViolation("contains: negative tolerance");
  RequireDimension(x, dimension(), "contains point");
  if (!x.allFinite()) return false;
  return MinSlack(x) >= -tol;
}

bool FeasibleSet::HasExactProjection() const {
  return kind() == SetKind::kBox || kind() == SetKind::kBall;
}

Vector FeasibleSet::ExactProject(const Vector& v) const {
  RequireDimension(v, dimension(), "projection point");
  RequireFinite(v, "projection point");
  if (const auto* box = std::get_if<Box>(&impl().shape)) {
    return v.cwiseMax(box->lower).cwiseMin(box->upper);
  }
  if (const auto* ball = std::get_if<Ball>(&impl().shape)) {
    const Vector d = v - ball->center;
    const double dist = d.norm();
    if (dist <= ball->radius) return v;
    return ball->center + (ball->radius / dist) * d;
  }
  throw ContractViolation("no closed-form projection for set kind '" +
                          std::string(SetKindName(kind())) + "'");
}

}  // namespace sinexp
