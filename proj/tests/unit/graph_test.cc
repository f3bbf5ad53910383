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

#include "endograph/graph.h"

#include <random>

#include <gtest/gtest.h>

#include "endograph/design.h"
#include "endograph/errors.h"
#include "oracles.h"

namespace endograph {
namespace {

EndogenousGraph small_graph() {
  return GraphBuilder(UnitSets::bipartite(2, 3), EdgeRuleKind::kRDriven)
      .constant(0, 0)
      .driven(0, 1, false, true)
      .driven(1, 1, true, false)
      .constant(1, 2)
      .pre_edge(0, 0)
      .pre_edge(1, 1)
      .build();
}

TEST(EdgeFunction, TableIndexUsesDependencyOrder) {
  // Edge present iff T_2 = 1 and T_0 = 0.
  const EdgeFunction fn({0, 2}, {0, 0, 1, 0});
  EXPECT_TRUE(fn(TreatmentVector::parse("001")));
  EXPECT_TRUE(fn(TreatmentVector::parse("011")));
  EXPECT_FALSE(fn(TreatmentVector::parse("101")));
  EXPECT_FALSE(fn(TreatmentVector::parse("000")));
}

TEST(EdgeFunction, AgreesOnAssignmentsThatMatchOnDependencies) {
  const EdgeFunction fn({1, 3}, {1, 0, 0, 1});
  for (std::uint64_t m = 0; m < 32; ++m) {
    for (std::uint64_t k = 0; k < 32; ++k) {
      const auto s = TreatmentVector::from_mask(m, 5);
      const auto t = TreatmentVector::from_mask(k, 5);
      if (s[1] == t[1] && s[3] == t[3]) EXPECT_EQ(fn(s), fn(t));
    }
  }
}

TEST(EdgeFunction, RejectsMalformedTables) {
  EXPECT_THROW(EdgeFunction({0}, {0, 1, 1}), ValidationError);
  EXPECT_THROW(EdgeFunction({1, 0}, {0, 1, 1, 0}), ValidationError);
  EXPECT_THROW(EdgeFunction({0}, {0, 2}), ValidationError);
}

TEST(EdgeFunction, DependencyCap) {
  std::vector<int> deps(17);
  for (int i = 0; i < 17; ++i) deps[i] = i;
  EXPECT_THROW(EdgeFunction(deps, std::vector<std::uint8_t>(1u << 17, 0)),
               CapExceededError);
}

TEST(Graph, RealizeFollowsTables) {
  const auto g = small_graph();
  const auto r = realize_graph(g, TreatmentVector::parse("010"));
  EXPECT_TRUE(r.edge(0, 0));
  EXPECT_TRUE(r.edge(0, 1));
  EXPECT_FALSE(r.edge(1, 1));
  EXPECT_TRUE(r.edge(1, 2));
  EXPECT_EQ(r.edge_count(), 3u);
  const auto n = r.neighbors(0);
  EXPECT_EQ(std::vector<int>(n.begin(), n.end()), (std::vector<int>{0, 1}));
}

TEST(Graph, RealizeRejectsWrongLength) {
  EXPECT_THROW(realize_graph(small_graph(), TreatmentVector::parse("01")),
               ValidationError);
}

TEST(Graph, RealizeMatchesDenseOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = oracle::random_bipartite_instance(seed);
    const auto& g = inst.graph;
    for (std::uint64_t m = 0; m < (1u << g.n_r()); m += 7) {
      const auto bits = oracle::mask_bits(m, g.n_r());
      const auto dense = oracle::edges(g, bits);
      const auto r = realize_graph(g, oracle::to_treatment(bits));
      for (int a = 0; a < g.n_a(); ++a) {
        for (int s = 0; s < g.n_r(); ++s) {
          EXPECT_EQ(r.edge(a, s), dense[a][s] == 1.0);
        }
      }
    }
  }
}

TEST(Graph, UnipartiteDiagonalAlwaysPresent) {
  const auto g = GraphBuilder(UnitSets::same_units(3), EdgeRuleKind::kRDriven)
                     .driven(1, 0, false, true)
                     .build();
  for (const auto& item : enumerate_assignments(3, 0.5)) {
    const auto r = realize_graph(g, item.t);
    for (int a = 0; a < 3; ++a) EXPECT_TRUE(r.edge(a, a));
  }
}

TEST(Graph, UnipartiteEdgesAreDirected) {
  const auto g = GraphBuilder(UnitSets::same_units(2), EdgeRuleKind::kRDriven)
                     .driven(1, 0, false, true)
                     .build();
  const auto r = realize_graph(g, TreatmentVector::parse("10"));
  EXPECT_TRUE(r.edge(1, 0));
  EXPECT_FALSE(r.edge(0, 1));
}

TEST(Graph, UnipartiteRequiresDiagonal) {
  GraphBuilder b(UnitSets::same_units(2), EdgeRuleKind::kRDriven);
  b.constant(0, 0, false);
  EXPECT_THROW(b.build(), ValidationError);
}

TEST(Graph, DeclaredKindIsEnforced) {
  GraphBuilder b(UnitSets::bipartite(1, 2), EdgeRuleKind::kRDriven);
  b.set(0, 0, EdgeFunction({1}, {0, 1}));
  EXPECT_THROW(b.build(), ValidationError);
  GraphBuilder e(UnitSets::bipartite(1, 2), EdgeRuleKind::kExogenous);
  e.driven(0, 0, false, true);
  EXPECT_THROW(e.build(), ValidationError);
}

TEST(Graph, UnitSetValidation) {
  EXPECT_THROW(UnitSets({0, 1, false}).validate(), ValidationError);
  EXPECT_THROW(UnitSets({2, 3, true}).validate(), ValidationError);
}

TEST(Graph, FullTreatmentNeighbors) {
  const auto n = small_graph().full_treatment_neighbors();
  EXPECT_EQ(n[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(n[1], (std::vector<int>{2}));
}

TEST(Dependency, ClassifiesEachPair) {
  const auto g =
      GraphBuilder(UnitSets::bipartite(1, 3), EdgeRuleKind::kUnrestricted)
          .constant(0, 0)
          .driven(0, 1, false, true)
          .set(0, 2, EdgeFunction({0, 1, 2}, {0, 1, 1, 0, 0, 1, 1, 0}))
          .build();
  const auto report = classify_dependency(g);
  ASSERT_EQ(report.pairs.size(), 3u);
  EXPECT_EQ(report.pairs[0].kind, EdgeRuleKind::kExogenous);
  EXPECT_EQ(report.pairs[1].kind, EdgeRuleKind::kRDriven);
  // The third table ignores T_2, so it depends on {0, 1} only.
  EXPECT_EQ(report.pairs[2].minimal_set, (std::vector<int>{0, 1}));
  EXPECT_EQ(report.pairs[2].kind, EdgeRuleKind::kSetDriven);
  EXPECT_EQ(report.kind, EdgeRuleKind::kSetDriven);
  EXPECT_FALSE(is_r_driven(g));
}

TEST(Dependency, TableOverOwnUnitThatIgnoresItIsExogenous) {
  const auto g = GraphBuilder(UnitSets::bipartite(1, 2), EdgeRuleKind::kRDriven)
                     .driven(0, 1, true, true)
                     .build();
  EXPECT_EQ(classify_dependency(g).kind, EdgeRuleKind::kExogenous);
  EXPECT_TRUE(is_r_driven(g));
}

TEST(Dependency, MinimalSetMatchesSubsetSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_r = 6;
    std::vector<int> deps;
    for (int r = 0; r < n_r; ++r) {
      if (rng() % 2) deps.push_back(r);
    }
    std::vector<std::uint8_t> table(std::size_t{1} << deps.size());
    // Sparse tables often ignore some coordinates.
    const bool sparse = trial % 2 == 0;
    for (auto& v : table) v = sparse ? (rng() % 5 == 0) : (rng() % 2);
    const EdgeFunction fn(deps, table);
    const auto g =
        GraphBuilder(UnitSets::bipartite(1, n_r), EdgeRuleKind::kUnrestricted)
            .set(0, 0, fn)
            .build();
    EXPECT_EQ(classify_dependency(g).pairs[0].minimal_set,
              oracle::minimal_dependency_set(fn))
        << "trial " << trial;
  }
}

TEST(Dependency, FullSetIsUnrestricted) {
  const auto g =
      GraphBuilder(UnitSets::bipartite(1, 2), EdgeRuleKind::kUnrestricted)
          .set(0, 0, EdgeFunction({0, 1}, {0, 1, 1, 0}))
          .build();
  EXPECT_EQ(classify_dependency(g).kind, EdgeRuleKind::kUnrestricted);
}

TEST(Anchor, ContainsAndPerUnitSets) {
  const AnchorSubgraph g(2, {{1, 2}, {0, 1}, {0, 0}});
  EXPECT_TRUE(g.contains(0, 1));
  EXPECT_FALSE(g.contains(1, 1));
  const auto v = g.anchors_of(0);
  EXPECT_EQ(std::vector<int>(v.begin(), v.end()), (std::vector<int>{0, 1}));
}

TEST(Anchor, VerifyExhaustivePassesAndFails) {
  const auto g = small_graph();
  EXPECT_TRUE(verify_anchor(g, AnchorSubgraph(2, {{0, 0}, {1, 2}})).pass);
  const auto bad = verify_anchor(g, AnchorSubgraph(2, {{0, 0}, {0, 1}}));
  EXPECT_FALSE(bad.pass);
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0].pair, (EdgePair{0, 1}));
  EXPECT_FALSE(g.edge(0, 1, bad.violations[0].witness));
}

TEST(Anchor, MissingPairFails) {
  const auto report =
      verify_anchor(small_graph(), AnchorSubgraph(2, {{1, 0}}));
  EXPECT_FALSE(report.pass);
}

TEST(Anchor, FullTreatmentOnlyMode) {
  AnchorCheckOptions options;
  options.full_treatment_only = true;
  // (0, 1) exists under T = 1 though not under every T.
  EXPECT_TRUE(
      verify_anchor(small_graph(), AnchorSubgraph(2, {{0, 1}}), options).pass);
  EXPECT_FALSE(
      verify_anchor(small_graph(), AnchorSubgraph(2, {{1, 1}}), options).pass);
}

TEST(Anchor, SampledModeFindsViolation) {
  AnchorCheckOptions options;
  options.mode = AnchorCheckOptions::Mode::kSampled;
  options.n_samples = 200;
  options.seed = 4;
  const auto report =
      verify_anchor(small_graph(), AnchorSubgraph(2, {{1, 1}}), options);
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.evaluations > 0, true);
}

TEST(Anchor, ExhaustiveCapOnSetDrivenGraphs) {
  GraphBuilder b(UnitSets::bipartite(1, 22), EdgeRuleKind::kSetDriven);
  b.set(0, 0, EdgeFunction({1}, {0, 1}));
  AnchorCheckOptions options;
  EXPECT_THROW(verify_anchor(b.build(), AnchorSubgraph(1, {{0, 0}}), options),
               CapExceededError);
}

}  // namespace
}  // namespace endograph
