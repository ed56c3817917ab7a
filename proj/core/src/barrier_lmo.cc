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

#include "sinexp/barrier_lmo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>

namespace sinexp {

namespace {

constexpr double kActiveTol = 1e-7;

// Q applied through the dense copy when present, else the spectral factors.
class QuadraticOperator {
 public:
  QuadraticOperator(const EllipsoidOrthant& shape, const Matrix* dense)
      : shape_(shape), dense_(dense) {}

  Vector Apply(const Vector& d) const {
    return dense_ != nullptr ? Vector((*dense_) * d) : shape_.spectrum.Apply(d);
  }

  Vector Diagonal() const {
    if (dense_ != nullptr) return dense_->diagonal();
    const Matrix& v = shape_.spectrum.eigenvectors();
    return v.array().square().matrix() * shape_.spectrum.eigenvalues();
  }

  const Matrix* dense() const { return dense_; }

 private:
  const EllipsoidOrthant& shape_;
  const Matrix* dense_;
};

// Newton direction for the Hessian
//   H = (2 / s0) Q + gq gq^T / s0^2 + diag(1 / z^2).
Vector NewtonDirection(const QuadraticOperator& q_op, const Vector& z,
                       const Vector& gq, double s0, const Vector& grad) {
  const Vector inv_z2 = z.array().square().inverse().matrix();
  if (const Matrix* q = q_op.dense()) {
    Matrix h = (2.0 / s0) * (*q);
    h.noalias() += (gq / (s0 * s0)) * gq.transpose();
    h.diagonal() += inv_z2;
    // Symmetric Jacobi scaling; the 1/z^2 terms span many decades near the
    // end of the barrier path.
    const Vector scale = h.diagonal().cwiseSqrt().cwiseInverse();
    const Matrix hs = scale.asDiagonal() * h * scale.asDiagonal();
    Eigen::LDLT<Matrix> ldlt(hs);
    const Vector y = ldlt.solve(-(scale.cwiseProduct(grad)));
    return scale.cwiseProduct(y);
  }

  // Matrix-free preconditioned conjugate gradients for large n.
  const Vector q_diag = q_op.Diagonal();
  const Vector precond =
      ((2.0 / s0) * q_diag.array() + gq.array().square() / (s0 * s0) +
       inv_z2.array())
          .inverse()
          .matrix();
  auto apply_h = [&](const Vector& v) -> Vector {
    Vector out = (2.0 / s0) * q_op.Apply(v);
    out += gq * (gq.dot(v) / (s0 * s0));
    out += inv_z2.cwiseProduct(v);
    return out;
  };
  Vector x = Vector::Zero(z.size());
  Vector r = -grad;
  Vector p = precond.cwiseProduct(r);
  Vector zr = p;
  double rz = r.dot(zr);
  const double stop = 1e-14 * grad.norm();
  for (Eigen::Index it = 0; it < 4 * z.size() && r.norm() > stop; ++it) {
    const Vector hp = apply_h(p);
    const double alpha = rz / p.dot(hp);
    x += alpha * p;
    r -= alpha * hp;
    zr = precond.cwiseProduct(r);
    const double rz_next = r.dot(zr);
    p = zr + (rz_next / rz) * p;
    rz = rz_next;
  }
  return x;
}

struct Candidate {
  Vector z;
  double mu_q = 0.0;
  Vector mu_z;
};

// Solves min <c_hat, z> over the ellipsoid with z_A = 0 fixed, using the
// active set guessed from the barrier point, and repairs the guess when the
// closed form is primal or dual infeasible.
std::optional<Candidate> PolishActiveSet(const EllipsoidOrthant& shape,
                                         const Matrix& q, const Vector& c_hat,
                                         const Vector& z_barrier) {
  const Eigen::Index n = z_barrier.size();
  const double scale = std::max(1.0, z_barrier.cwiseAbs().maxCoeff());
  std::vector<bool> active(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    active[i] = z_barrier[i] <= kActiveTol * scale;
  }
  const Vector& xbar = shape.center;

  for (Eigen::Index attempt = 0; attempt < 2 * n + 4; ++attempt) {
    std::vector<Eigen::Index> free_idx, act_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      (active[i] ? act_idx : free_idx).push_back(i);
    }
    Candidate cand;
    cand.z = Vector::Zero(n);
    const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
    const Eigen::Index na = static_cast<Eigen::Index>(act_idx.size());

    if (nf == 0) {
      // z = 0 with the ellipsoid constraint inactive.
      if (shape.spectrum.QuadraticForm(-xbar) > 1.0) return std::nullopt;
      cand.mu_q = 0.0;
      cand.mu_z = c_hat;
    } else {
      Matrix q_ff(nf, nf), q_fa(nf, na);
      Vector x_f(nf), c_f(nf), d(na);
      for (Eigen::Index i = 0; i < nf; ++i) {
        x_f[i] = xbar[free_idx[i]];
        c_f[i] = c_hat[free_idx[i]];
        for (Eigen::Index j = 0; j < nf; ++j) {
          q_ff(i, j) = q(free_idx[i], free_idx[j]);
        }
        for (Eigen::Index j = 0; j < na; ++j) {
          q_fa(i, j) = q(free_idx[i], act_idx[j]);
        }
      }
      double kappa = 0.0;
      for (Eigen::Index j = 0; j < na; ++j) d[j] = -xbar[act_idx[j]];
      for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
          kappa += d[i] * q(act_idx[i], act_idx[j]) * d[j];
        }
      }
      Eigen::LLT<Matrix> llt(q_ff);
      if (llt.info() != Eigen::Success) return std::nullopt;
      const Vector b = q_fa * d;
      const Vector w = llt.solve(b);
      const double r2 = 1.0 + b.dot(w) - kappa;
      const Vector p = llt.solve(c_f);
      const double den2 = c_f.dot(p);
      if (!(r2 > 0.0) || !(den2 > 0.0)) return std::nullopt;
      const double radius = std::sqrt(r2);
      const double den = std::sqrt(den2);
      const Vector y = (x_f - w) - (radius / den) * p;
      for (Eigen::Index i = 0; i < nf; ++i) cand.z[free_idx[i]] = y[i];
      cand.mu_q = den / (2.0 * radius);
      cand.mu_z = c_hat + cand.mu_q * (2.0 * (q * (cand.z - xbar)));
      for (Eigen::Index i : free_idx) cand.mu_z[i] = 0.0;

      Eigen::Index worst = -1;
      double worst_value = 0.0;
      for (Eigen::Index i : free_idx) {
        if (cand.z[i] < worst_value) {
          worst_value = cand.z[i];
          worst = i;
        }
      }
      if (worst >= 0) {
        active[worst] = true;
        continue;
      }
    }

    Eigen::Index worst = -1;
    double worst_value = -1e-14;
    for (Eigen::Index i : act_idx) {
      if (cand.mu_z[i] < worst_value) {
        worst_value = cand.mu_z[i];
        worst = i;
      }
    }
    if (worst >= 0) {
      active[worst] = false;
      continue;
    }
    return cand;
  }
  return std::nullopt;
}

}  // namespace

Vector BarrierStartPoint(const EllipsoidOrthant& shape) {
  const Vector& xbar = shape.center;
  double eps0 = 0.5 / std::sqrt(shape.spectrum.eigenvalues().maxCoeff());
  for (int i = 0; i < 200; ++i) {
    const Vector z = xbar.cwiseMax(eps0);
    if (z.minCoeff() > 0.0 && shape.spectrum.QuadraticForm(z - xbar) < 1.0) {
      return z;
    }
    eps0 *= 0.5;
  }
  throw ContractViolation(
      "ellipsoid_orthant: no strictly feasible start point near the center");
}

double EllipsoidOrthantKktResidual(const FeasibleSet& set, const Vector& c,
                                   const Vector& z, double mu_q,
                                   const Vector& mu_z) {
  const auto* shape = std::get_if<EllipsoidOrthant>(&set.shape());
  if (shape == nullptr) {
    throw ContractViolation("kkt residual: set is not ellipsoid_orthant");
  }
  RequireDimension(c, set.dimension(), "kkt direction");
  RequireDimension(z, set.dimension(), "kkt point");
  RequireDimension(mu_z, set.dimension(), "kkt multipliers");
  const double c_norm = c.norm();
  const Vector c_hat = c_norm > 0.0 ? Vector(c / c_norm) : Vector(c);
  const Vector r = z - shape->center;
  const Vector qr = shape->spectrum.Apply(r);
  const double q = r.dot(qr);
  const double stationarity =
      (c_hat + mu_q * 2.0 * qr - mu_z).cwiseAbs().maxCoeff();
  const double primal = std::max({q - 1.0, -z.minCoeff(), 0.0});
  const double dual = std::max({-mu_q, -mu_z.minCoeff(), 0.0});
  const double complementarity = std::max(
      std::abs(mu_q * (1.0 - q)), mu_z.cwiseProduct(z).cwiseAbs().maxCoeff());
  return std::max({stationarity, primal, dual, complementarity});
}

BarrierLmoReport EllipsoidOrthantLmo(const FeasibleSet& set, const Vector& c,
                                     const BarrierOptions& options) {
  const auto* shape = std::get_if<EllipsoidOrthant>(&set.shape());
  if (shape == nullptr) {
    throw ContractViolation("barrier lmo: set is not ellipsoid_orthant");
  }
  RequireDimension(c, set.dimension(), "barrier lmo direction");
  RequireFinite(c, "barrier lmo direction");
  const Eigen::Index n = set.dimension();

  BarrierLmoReport report;
  const double c_norm = c.norm();
  if (c_norm == 0.0) {
    report.point = set.CanonicalPoint();
    report.multipliers_z = Vector::Zero(n);
    return report;
  }
  const Vector c_hat = c / c_norm;
  const QuadraticOperator q_op(*shape, set.dense_q());
  const Vector& xbar = shape->center;
  const double constraints = static_cast<double>(n + 1);

  Vector z = set.CanonicalPoint();
  double t = options.initial_t;
  // The slack 1 - q(z) cannot be resolved below roughly eps * ||Q|| ||r||^2;
  // once Newton stalls there the barrier path stops and the polish takes over.
  bool stalled = false;
  bool budget_exhausted = false;
  while (true) {
    ++report.stages;
    for (int it = 0; it < options.max_newton_per_stage; ++it) {
      const Vector r = z - xbar;
      const Vector qr = q_op.Apply(r);
      const double s0 = 1.0 - r.dot(qr);
      const Vector gq = 2.0 * qr;
      const Vector grad = t * c_hat + gq / s0 - z.cwiseInverse();
      const Vector step = NewtonDirection(q_op, z, gq, s0, grad);
      const double slope = grad.dot(step);
      if (!std::isfinite(slope) || !(slope < 0.0)) break;
      if (-slope / 2.0 <= options.newton_tol) break;

      // F(z + a step) - F(z) evaluated as a difference to avoid cancellation
      // against the t <c, z> term.
      const double lin = t * c_hat.dot(step);
      const double a1 = qr.dot(step);
      const double a2 = step.dot(q_op.Apply(step));
      auto delta_f = [&](double a) -> double {
        const double dq = (2.0 * a * a1 + a * a * a2) / s0;
        if (!(dq < 1.0)) return std::numeric_limits<double>::infinity();
        double value = a * lin - std::log1p(-dq);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double ratio = a * step[i] / z[i];
          if (!(ratio > -1.0)) return std::numeric_limits<double>::infinity();
          value -= std::log1p(ratio);
        }
        return value;
      };
      auto strictly_feasible = [&](const Vector& y) {
        const Vector ry = y - xbar;
        return y.minCoeff() > 0.0 && ry.dot(q_op.Apply(ry)) < 1.0;
      };
      double a = 1.0;
      while (a > 1e-20 &&
             !(delta_f(a) <= options.armijo_slope * a * slope &&
               strictly_feasible(z + a * step))) {
        a *= options.armijo_factor;
      }
      const Vector z_next = z + a * step;
      if (a <= 1e-20 || z_next == z) {
        stalled = true;
        break;
      }
      z = z_next;
      if (++report.newton_steps >= options.max_total_newton) {
        budget_exhausted = true;
        break;
      }
    }
    if (stalled || budget_exhausted ||
        constraints / t <= options.duality_gap_tol) {
      break;
    }
    t *= options.t_factor;
  }

  {
    const Vector r = z - xbar;
    const double s0 = 1.0 - r.dot(q_op.Apply(r));
    report.point = z;
    report.multiplier_q = 1.0 / (t * s0);
    report.multipliers_z = (t * z.array()).inverse().matrix();
    report.kkt_residual = EllipsoidOrthantKktResidual(
        set, c, z, report.multiplier_q, report.multipliers_z);
  }

  if (options.polish && set.dense_q() != nullptr) {
    if (auto cand = PolishActiveSet(*shape, *set.dense_q(), c_hat, z)) {
      const double residual =
          EllipsoidOrthantKktResidual(set, c, cand->z, cand->mu_q, cand->mu_z);
      if (residual <= report.kkt_residual) {
        report.point = std::move(cand->z);
        report.multiplier_q = cand->mu_q;
        report.multipliers_z = std::move(cand->mu_z);
        report.kkt_residual = residual;
        report.polished = true;
      }
    }
  }
  report.objective = c.dot(report.point);

  if (!(report.kkt_residual <= options.kkt_failure)) {
    throw LmoFailure(
        "barrier lmo did not converge: KKT residual " +
            std::to_string(report.kkt_residual) + " after " +
            std::to_string(report.newton_steps) + " Newton steps",
        report.kkt_residual);
  }
  return report;
}

}  // namespace sinexp
