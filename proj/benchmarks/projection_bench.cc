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

#include <benchmark/benchmark.h>

#include <random>

#include "sinexp/barrier_lmo.h"
#include "sinexp/inexact_projection.h"
#include "sinexp/problems.h"

namespace sinexp {
namespace {

Vector RandomVector(Eigen::Index n, std::uint64_t seed, double scale) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (auto& x : v) x = scale * normal(gen);
  return v;
}

void RunFw(benchmark::State& state, const FeasibleSet& set) {
  const Eigen::Index n = set.dimension();
  const Vector u = set.CanonicalPoint();
  const Vector v = u + RandomVector(n, 11, 1.0);
  const ToleranceParams params{};
  std::int64_t inner = 0;
  for (auto _ : state) {
    auto result = FwProject(set, params, u, v);
    inner += result.inner_iterations;
    benchmark::DoNotOptimize(result.point.data());
  }
  state.counters["inner"] = benchmark::Counter(
      static_cast<double>(inner), benchmark::Counter::kAvgIterations);
}

void BM_FwBall(benchmark::State& state) {
  RunFw(state, FeasibleSet::MakeBall(Vector::Zero(state.range(0)), 1.0));
}
BENCHMARK(BM_FwBall)->Arg(10)->Arg(100)->Arg(1000);

void BM_FwBox(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  RunFw(state, FeasibleSet::MakeBox(Vector::Zero(n), Vector::Ones(n)));
}
BENCHMARK(BM_FwBox)->Arg(10)->Arg(100)->Arg(1000);

void BM_FwSimplex(benchmark::State& state) {
  RunFw(state, FeasibleSet::MakeSimplex(state.range(0)));
}
BENCHMARK(BM_FwSimplex)->Arg(10)->Arg(100)->Arg(1000);

void BM_BarrierLmo(benchmark::State& state) {
  EllipsoidL1Spec spec;
  spec.n = state.range(0);
  spec.seed = 3;
  const auto instance = GenerateInstance(spec);
  const Vector c = RandomVector(spec.n, 5, 1.0);
  for (auto _ : state) {
    auto report = EllipsoidOrthantLmo(instance.problem.set, c);
    benchmark::DoNotOptimize(report.point.data());
  }
}
BENCHMARK(BM_BarrierLmo)->Arg(2)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace sinexp
