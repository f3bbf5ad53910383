// Copyright 2026 The Endograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "endograph/design.h"
#include "endograph/estimators.h"
#include "endograph/hypothesis_tests.h"
#include "endograph/montecarlo.h"

namespace endograph {
namespace {

ScenarioInstance scenario(int n_a, int n_r = -1) {
  ScenarioSpec spec;
  spec.n_a = n_a;
  spec.n_r = n_r < 0 ? n_a : n_r;
  spec.alpha = {0.0, 1.0};
  spec.beta = {0.0, 1.0};
  spec.seed = 1;
  return generate_scenario(spec);
}

void BM_ExactExpectation(benchmark::State& state) {
  const int n_r = static_cast<int>(state.range(0));
  const auto inst = scenario(n_r / 2, n_r);
  const AnchorEstimator est(inst.graph, *inst.config);
  for (auto _ : state) {
    const double e = exact_expectation(
        [&](const TreatmentVector& t) {
          const RealizedGraph realized = realize_graph(inst.graph, t);
          const auto y = outcome(inst.model, realized, t, false);
          return est.mu_hat(realized, y, t);
        },
        n_r, inst.p);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n_r));
}
BENCHMARK(BM_ExactExpectation)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_MuHat(benchmark::State& state) {
  const auto inst = scenario(static_cast<int>(state.range(0)));
  const AnchorEstimator est(inst.graph, *inst.config);
  const BernoulliDesign design(inst.p, inst.graph.n_r(), 3);
  const TreatmentVector t = design.draw(0);
  const RealizedGraph realized = realize_graph(inst.graph, t);
  const auto y = outcome(inst.model, realized, t, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.mu_hat(realized, y, t));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MuHat)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Replication(benchmark::State& state) {
  const auto inst = scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(replicate(inst, 10, EstimatorChoice::kMuHat, 5).mean);
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_Replication)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SharpNullTest(benchmark::State& state) {
  const auto inst = scenario(static_cast<int>(state.range(0)));
  const AnchorEstimator est(inst.graph, *inst.config);
  const TreatmentVector t = BernoulliDesign(inst.p, inst.graph.n_r(), 2).draw(0);
  const auto y = outcome(inst.model, realize_graph(inst.graph, t), t, false);
  ResamplingOptions options;
  options.n_resamples = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sharp_null_test(y, t, est, options).p_value);
  }
}
BENCHMARK(BM_SharpNullTest)->Args({1000, 500})->Args({10000, 500})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace endograph

BENCHMARK_MAIN();
