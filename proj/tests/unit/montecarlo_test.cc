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

#include "endograph/montecarlo.h"

#include <gtest/gtest.h>

#include "endograph/design.h"
#include "endograph/errors.h"

namespace endograph {
namespace {

ScenarioSpec small_spec() {
  ScenarioSpec s;
  s.n_a = 40;
  s.n_r = 60;
  s.anchor_degree = 2;
  s.created_degree = 2;
  s.dropped_degree = 1;
  s.max_r_degree = 8;
  s.beta = {0.2, 1.0};
  s.seed = 3;
  return s;
}

TEST(Scenario, RespectsDegreesAndCaps) {
  const auto inst = generate_scenario(small_spec());
  const auto& g = inst.graph;
  std::vector<int> r_degree(g.n_r(), 0);
  for (int a = 0; a < g.n_a(); ++a) {
    EXPECT_EQ(g.entries(a).size(), 5u);
    for (const auto& e : g.entries(a)) ++r_degree[e.r];
  }
  for (int d : r_degree) EXPECT_LE(d, 8);
  EXPECT_TRUE(is_r_driven(g));
  EXPECT_TRUE(validate_unbiasedness(g, *inst.config).ok());
  EXPECT_DOUBLE_EQ(inst.tte, true_tte(g, inst.model));
  ASSERT_TRUE(inst.config->bounds.has_value());
  EXPECT_EQ(inst.config->bounds->w_low, 4.0);
}

TEST(Scenario, SameSeedSameInstance) {
  const auto a = generate_scenario(small_spec());
  const auto b = generate_scenario(small_spec());
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.model, b.model);
  auto other = small_spec();
  other.seed = 4;
  EXPECT_NE(generate_scenario(other).graph, a.graph);
}

TEST(Scenario, DeclaredOutcomeBoundHolds) {
  auto spec = small_spec();
  spec.n_a = 5;
  spec.n_r = 10;
  spec.max_r_degree = 6;
  const auto inst = generate_scenario(spec);
  EXPECT_TRUE(verify_outcome_bound(inst.graph, inst.model, spec.p).within_bound);
}

TEST(Scenario, AtSizeKeepsRatio) {
  const auto s = at_size(small_spec(), 400);
  EXPECT_EQ(s.n_a, 400);
  EXPECT_EQ(s.n_r, 600);
  auto u = small_spec();
  u.unipartite = true;
  EXPECT_EQ(at_size(u, 50).n_r, 50);
}

TEST(Scenario, UnipartiteWithDirectEffects) {
  ScenarioSpec s;
  s.n_a = s.n_r = 30;
  s.unipartite = true;
  s.gamma = {0.5, 1.0};
  s.seed = 1;
  const auto inst = generate_scenario(s);
  EXPECT_TRUE(inst.graph.unipartite());
  EXPECT_EQ(inst.model.gamma.size(), 30u);
}

TEST(Scenario, RejectsBadSpecs) {
  auto s = small_spec();
  s.gamma = {1, 1};
  EXPECT_THROW(generate_scenario(s), ValidationError);
  s = small_spec();
  s.p = 1.0;
  EXPECT_THROW(generate_scenario(s), ValidationError);
  s = small_spec();
  s.max_r_degree = 1;
  EXPECT_THROW(generate_scenario(s), ValidationError);
}

TEST(Replicate, BitIdenticalForFixedSeed) {
  const auto inst = generate_scenario(small_spec());
  const auto a = replicate(inst, 200, EstimatorChoice::kMuHat, 9);
  const auto b = replicate(inst, 200, EstimatorChoice::kMuHat, 9);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_NE(replicate(inst, 200, EstimatorChoice::kMuHat, 10).estimates,
            a.estimates);
}

TEST(Replicate, ReplicationUsesDesignSubstream) {
  const auto inst = generate_scenario(small_spec());
  const auto summary = replicate(inst, 5, EstimatorChoice::kMuHat, 9);
  const AnchorEstimator est(inst.graph, *inst.config);
  const BernoulliDesign design(inst.p, inst.graph.n_r(), 9);
  const auto t = design.draw(3);
  const auto r = realize_graph(inst.graph, t);
  EXPECT_EQ(summary.estimates[3],
            est.mu_hat(r, outcome(inst.model, r, t, false), t));
}

TEST(Replicate, SummaryFields) {
  const auto inst = generate_scenario(small_spec());
  const auto s = replicate(inst, 500, EstimatorChoice::kMuTilde, 2);
  EXPECT_EQ(s.truth, AnchorEstimator(inst.graph, *inst.config)
                         .mu_star(inst.model.beta));
  EXPECT_EQ(s.standardized.size(), 500u);
  EXPECT_TRUE(s.ks_distance.has_value());
  EXPECT_EQ(s.dependency_degree, static_cast<long long>(s.d_a) * s.d_r);
  // Loose sanity: mean within 5 standard errors.
  EXPECT_NEAR(s.mean, s.truth, 5 * std::sqrt(s.variance / 500));
}

TEST(Replicate, HorvitzThompsonRuns) {
  const auto inst = generate_scenario(small_spec());
  const auto s = replicate(inst, 50, EstimatorChoice::kHorvitzThompson, 1);
  EXPECT_EQ(s.estimates.size(), 50u);
  EXPECT_GT(s.d_a, 0);
}

TEST(Scaling, NeedsIncreasingSizes) {
  EXPECT_THROW(variance_scaling_study(small_spec(), {10, 20}, 10, 0),
               ValidationError);
  EXPECT_THROW(variance_scaling_study(small_spec(), {10, 30, 20}, 10, 0),
               ValidationError);
}

TEST(Scaling, ReportsEnvelopeAndFit) {
  const auto r = variance_scaling_study(small_spec(), {40, 80, 160}, 300, 5);
  ASSERT_EQ(r.points.size(), 3u);
  for (const auto& p : r.points) {
    EXPECT_GT(p.envelope, 0.0);
    EXPECT_LT(p.variance, p.envelope);
  }
  EXPECT_LT(r.slope, 0.0);
}

TEST(Normality, NeedsEnoughReplications) {
  const auto inst = generate_scenario(small_spec());
  EXPECT_THROW(normality_diagnostic(inst, 999, 0), ValidationError);
}

TEST(EdgeDgp, Structure) {
  EdgeDgpSpec s;
  s.n_a = 30;
  s.n_r = 40;
  s.base_degree = 1;
  s.created_degree = 2;
  for (EdgeDgp kind :
       {EdgeDgp::kExogenous, EdgeDgp::kRDriven, EdgeDgp::kPartnerDriven}) {
    s.kind = kind;
    const auto g = generate_edge_dgp(s);
    EXPECT_EQ(g.pre_edges().size(), 30u);
    const auto kind_found = classify_dependency(g).kind;
    switch (kind) {
      case EdgeDgp::kExogenous:
        EXPECT_EQ(kind_found, EdgeRuleKind::kExogenous);
        break;
      case EdgeDgp::kRDriven:
        EXPECT_EQ(kind_found, EdgeRuleKind::kRDriven);
        break;
      case EdgeDgp::kPartnerDriven:
        EXPECT_EQ(kind_found, EdgeRuleKind::kSetDriven);
        break;
    }
    EXPECT_EQ(parse_edge_dgp(to_string(kind)), kind);
  }
}

TEST(EdgeDgp, RejectionRatesAreDeterministic) {
  EdgeDgpSpec s;
  s.kind = EdgeDgp::kRDriven;
  s.n_a = 50;
  s.n_r = 50;
  ResamplingOptions o;
  o.n_resamples = 100;
  const auto a = exogeneity_rejection_rate(s, 20, o, 3);
  const auto b = exogeneity_rejection_rate(s, 20, o, 3);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_NEAR(a.null_se, std::sqrt(0.05 * 0.95 / 20), 1e-15);
  const auto t = ttest_rejection_rate(s, 20, {}, 3);
  EXPECT_EQ(t.n_reps, 20);
}

}  // namespace
}  // namespace endograph
