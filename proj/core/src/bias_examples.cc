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

#include "endograph/examples.h"

#include <string>

#include "endograph/design.h"
#include "endograph/errors.h"
#include "endograph/stats.h"

namespace endograph {
namespace {

void check_example(int example) {
  if (example < 1 || example > 3) {
    throw ValidationError("unknown example " + std::to_string(example) +
                          "; expected 1, 2 or 3");
  }
}

}  // namespace

EndogenousGraph example_graph(int example) {
  check_example(example);
  switch (example) {
    case 1:
      return GraphBuilder(UnitSets::bipartite(1, 1), EdgeRuleKind::kRDriven)
          .driven(0, 0, false, true)
          .build();
    case 2:
      return GraphBuilder(UnitSets::bipartite(2, 1), EdgeRuleKind::kRDriven)
          .driven(0, 0, false, true)
          .driven(1, 0, true, false)
          .build();
    default:
      // Unit 2's edge to unit 1 is driven by unit 1 itself.
      return GraphBuilder(UnitSets::same_units(2), EdgeRuleKind::kRDriven)
          .driven(1, 0, false, true)
          .build();
  }
}

EndogenousGraph anchored_example_graph(int example) {
  check_example(example);
  switch (example) {
    case 1:
      return GraphBuilder(UnitSets::bipartite(1, 1), EdgeRuleKind::kExogenous)
          .constant(0, 0)
          .build();
    case 2:
      return GraphBuilder(UnitSets::bipartite(2, 1), EdgeRuleKind::kExogenous)
          .constant(0, 0)
          .constant(1, 0)
          .build();
    default:
      return GraphBuilder(UnitSets::same_units(2), EdgeRuleKind::kExogenous)
          .constant(0, 1)
          .constant(1, 0)
          .build();
  }
}

AnchorSubgraph example_anchor(int example) {
  check_example(example);
  switch (example) {
    case 1:
      return AnchorSubgraph(1, {{0, 0}});
    case 2:
      return AnchorSubgraph(2, {{0, 0}, {1, 0}});
    default:
      return AnchorSubgraph(2, {{0, 1}, {1, 0}});
  }
}

EndogenousGraph partner_driven_graph() {
  return GraphBuilder(UnitSets::bipartite(1, 2), EdgeRuleKind::kSetDriven)
      .set(0, 0, EdgeFunction({1}, {0, 1}))
      .build();
}

UnitValues example_outcomes(int example, const ExampleOutcomes& ys) {
  check_example(example);
  if (example == 1) return {ys.y};
  return {ys.y1, ys.y2};
}

BiasReport bias_table(const std::vector<int>& examples, double p,
                      const ExampleOutcomes& ys) {
  BiasReport report;
  for (int example : examples) {
    const EndogenousGraph graph = example_graph(example);
    ExampleBias row;
    row.example = example;
    row.p = p;
    row.y = example_outcomes(example, ys);

    OutcomeModel model;
    model.alpha = row.y;
    model.beta.assign(row.y.size(), 0.0);
    model.weights = ExposureWeights::uniform(graph.units());
    row.tte = true_tte(graph, model);

    CompensatedSum total;
    CompensatedSum mean_scale;
    for (const auto& item : enumerate_assignments(graph.n_r(), p)) {
      const RealizedGraph realized = realize_graph(graph, item.t);
      BiasCase c;
      c.t = item.t;
      c.probability = item.probability;
      c.ht_total = horvitz_thompson(realized, item.t, row.y, p, HtScale::kTotal);
      c.ht_mean = horvitz_thompson(realized, item.t, row.y, p, HtScale::kMean);
      total.add(c.probability * c.ht_total);
      mean_scale.add(c.probability * c.ht_mean);
      row.cases.push_back(std::move(c));
    }
    row.ht_expectation_total = total.value();
    row.ht_expectation_mean = mean_scale.value();

    const EndogenousGraph anchored = anchored_example_graph(example);
    const AnchorEstimator estimator(
        anchored, EstimatorConfig::with_uniform_instruments(
                      example_anchor(example),
                      ExposureWeights::uniform(anchored.units()), p));
    row.mu_hat_expectation = exact_expectation(
        [&](const TreatmentVector& t) {
          return estimator.mu_hat(realize_graph(anchored, t), row.y, t);
        },
        anchored.n_r(), p);
    report.examples.push_back(std::move(row));
  }
  return report;
}

}  // namespace endograph
