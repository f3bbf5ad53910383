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

// Small canonical graphs on which Horvitz-Thompson is biased, and the exact
// bias table built from them.
//
//   1: one analysis unit, one randomization unit; the edge exists iff T = 1.
//   2: two analysis units share one randomization unit; a1 is linked iff
//      T = 1, a2 iff T = 0.
//   3: unipartite pair; besides the self edges, a2 is linked to unit 1 iff
//      T_1 = 1.
//
// All outcomes are constant in T, so every TTE is zero.

#ifndef ENDOGRAPH_EXAMPLES_H_
#define ENDOGRAPH_EXAMPLES_H_

#include <optional>
#include <string>
#include <vector>

#include "endograph/estimators.h"
#include "endograph/graph.h"
#include "endograph/outcomes.h"

namespace endograph {

EndogenousGraph example_graph(int example);
// Same unit sets with every potential edge made permanent, so the anchor
// instrument applies.
EndogenousGraph anchored_example_graph(int example);
// Anchor covering every off-diagonal edge of the anchored variant.
AnchorSubgraph example_anchor(int example);

// One analysis unit, two randomization units, e_11 = 1(T_2 = 1): the edge
// to unit 1 is driven by unit 2.
EndogenousGraph partner_driven_graph();

// Constant outcomes for an example: {y} for 1, {y1, y2} for 2 and 3.
struct ExampleOutcomes {
  double y = 1.0;
  double y1 = 3.0;
  double y2 = 1.0;
};
UnitValues example_outcomes(int example, const ExampleOutcomes& ys);

struct BiasCase {
  TreatmentVector t;
  double probability = 0.0;
  double ht_total = 0.0;
  double ht_mean = 0.0;
};

struct ExampleBias {
  int example = 0;
  double p = 0.5;
  UnitValues y;
  double tte = 0.0;
  double ht_expectation_total = 0.0;
  double ht_expectation_mean = 0.0;
  // Exact expectation of the anchor-instrument estimator on the anchored
  // variant.
  double mu_hat_expectation = 0.0;
  std::vector<BiasCase> cases;
};

struct BiasReport {
  std::vector<ExampleBias> examples;
};

// Exact enumeration for each requested example (1, 2 or 3).
BiasReport bias_table(const std::vector<int>& examples, double p,
                      const ExampleOutcomes& ys);

}  // namespace endograph

#endif  // ENDOGRAPH_EXAMPLES_H_
