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

#ifndef SINEXP_TESTS_SUPPORT_TEST_SUPPORT_H_
#define SINEXP_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "sinexp/feasible_set.h"
#include "sinexp/types.h"

namespace sinexp::testing {

// Seeded case generator for property tests.
class CaseRng {
 public:
  explicit CaseRng(std::uint64_t seed) : engine_(seed) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double Normal() { return std::normal_distribution<double>()(engine_); }
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  Vector UniformVector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Uniform(lo, hi);
    return v;
  }
  Vector Gaussian(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Normal();
    return v;
  }

  // Orthonormal matrix from the QR factorization of a Gaussian matrix.
  Matrix Orthonormal(Eigen::Index n) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Normal();
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  // Eigenvalues in [lo, hi], sorted descending, with a random basis.
  EllipsoidSpectrum Spectrum(Eigen::Index n, double lo, double hi) {
    Vector values = UniformVector(n, lo, hi);
    std::sort(values.data(), values.data() + n, std::greater<double>());
    return EllipsoidSpectrum(values, Orthonormal(n));
  }

  FeasibleSet Box(Eigen::Index n) {
    const Vector lower = UniformVector(n, -2.0, 1.0);
    const Vector width = UniformVector(n, 0.1, 2.0);
    return FeasibleSet::MakeBox(lower, lower + width);
  }
  FeasibleSet Ball(Eigen::Index n) {
    return FeasibleSet::MakeBall(UniformVector(n, -1.0, 1.0),
                                 Uniform(0.2, 2.0));
  }

 private:
  std::mt19937_64 engine_;
};

// Random feasible point as a convex combination of LMO outputs.
inline Vector RandomFeasiblePoint(const FeasibleSet& set, CaseRng& rng,
                                  int vertices = 4) {
  Vector mix = Vector::Zero(set.dimension());
  double total = 0.0;
  for (int i = 0; i < vertices; ++i) {
    const double w = rng.Uniform(0.0, 1.0);
    mix += w * set.Lmo(rng.Gaussian(set.dimension()));
    total += w;
  }
  return mix / total;
}

// Minimum of <c, z> over the 2-D set {z >= 0, (z - xbar)^T Q (z - xbar) <= 1}
// by enumeration: `samples` points on the ellipse boundary that lie in the
// orthant, plus the exact intersections of the ellipse with both axes (a
// linear function on an axis segment is minimized at an endpoint), plus the
// origin when the ellipse contains it. Returns
// +inf when no boundary point is feasible.
struct GridMinimum {
  double value = std::numeric_limits<double>::infinity();
  Vector point;
};

inline GridMinimum EllipseOrthantGridMin(const Vector& xbar,
                                         const EllipsoidSpectrum& spectrum,
                                         const Vector& c, int samples) {
  GridMinimum best;
  best.point = Vector::Zero(2);
  auto consider = [&](const Vector& z) {
    if (z[0] < 0.0 || z[1] < 0.0) return;
    const double value = c.dot(z);
    if (value < best.value) {
      best.value = value;
      best.point = z;
    }
  };
  const Matrix& v = spectrum.eigenvectors();
  const Vector scale = spectrum.eigenvalues().cwiseSqrt().cwiseInverse();
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i = 0; i < samples; ++i) {
    const double angle = two_pi * i / samples;
    Vector unit(2);
    unit << std::cos(angle), std::sin(angle);
    consider(xbar + v * scale.cwiseProduct(unit));
  }
  const Matrix q = spectrum.Dense();
  if (xbar.dot(q * xbar) <= 1.0) consider(Vector::Zero(2));
  // Coordinate `zero` vanishes: z = t e_j with j the other axis.
  for (int zero = 0; zero < 2; ++zero) {
    const int j = 1 - zero;
    // q(t e_j) = a t^2 + b t + d with r = t e_j - xbar.
    const double a = q(j, j);
    const double b = -2.0 * (q.row(j).dot(xbar));
    const double d = xbar.dot(q * xbar) - 1.0;
    const double disc = b * b - 4.0 * a * d;
    if (disc < 0.0) continue;
    for (double sign : {-1.0, 1.0}) {
      const double t = (-b + sign * std::sqrt(disc)) / (2.0 * a);
      Vector z = Vector::Zero(2);
      z[j] = t;
      consider(z);
    }
  }
  return best;
}

}  // namespace sinexp::testing

#endif  // SINEXP_TESTS_SUPPORT_TEST_SUPPORT_H_
