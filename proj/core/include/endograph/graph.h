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

// Endogenous interference graphs.
//
// Every potential edge (a, r) carries an edge potential-outcome function
// E_ar : {0,1}^{n_r} -> {0,1}, stored as an explicit truth table over the
// treatments of its dependency set S_ar. Pairs without an entry never form an
// edge. Graphs are immutable once built and safe to share across threads.

#ifndef ENDOGRAPH_GRAPH_H_
#define ENDOGRAPH_GRAPH_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "endograph/treatment.h"

namespace endograph {

struct UnitSets {
  int n_a = 0;
  int n_r = 0;
  // Analysis and randomization units are the same set.
  bool unipartite = false;

  static UnitSets bipartite(int n_a, int n_r) { return {n_a, n_r, false}; }
  static UnitSets same_units(int n) { return {n, n, true}; }

  // Throws ValidationError unless n_a, n_r >= 1 and n_a == n_r when
  // unipartite.
  void validate() const;

  friend bool operator==(const UnitSets&, const UnitSets&) = default;
};

struct EdgePair {
  int a = 0;
  int r = 0;
  friend auto operator<=>(const EdgePair&, const EdgePair&) = default;
};

// Sorted, duplicate-free list of (a, r) pairs.
using PairList = std::vector<EdgePair>;
PairList normalize_pairs(PairList pairs);

enum class EdgeRuleKind { kExogenous, kRDriven, kSetDriven, kUnrestricted };

std::string_view to_string(EdgeRuleKind kind);
std::optional<EdgeRuleKind> parse_edge_rule_kind(std::string_view name);

// Truth table for one edge potential-outcome function. Entry k of the table
// is the edge value when T_{depends_on[i]} equals bit i of k.
class EdgeFunction {
 public:
  // |S_ar| limit for stored tables; larger sets throw CapExceededError.
  static constexpr std::size_t kMaxDependencies = 16;

  EdgeFunction(std::vector<int> depends_on, std::vector<std::uint8_t> table);

  static EdgeFunction constant(bool value);
  // e_ar(T_r): `if_control` when T_r = 0, `if_treated` when T_r = 1.
  static EdgeFunction driven_by(int r, bool if_control, bool if_treated);

  bool operator()(const TreatmentVector& t) const;
  bool at(std::size_t table_index) const { return table_[table_index] != 0; }

  std::span<const int> depends_on() const { return depends_on_; }
  std::span<const std::uint8_t> table() const { return table_; }
  bool is_constant() const;

  friend bool operator==(const EdgeFunction&, const EdgeFunction&) = default;

 private:
  std::vector<int> depends_on_;
  std::vector<std::uint8_t> table_;
};

struct EdgeEntry {
  int r = 0;
  EdgeFunction fn = EdgeFunction::constant(false);
  friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
};

class EndogenousGraph {
 public:
  // `entries[a]` lists the potential edges of analysis unit a, sorted by r.
  // Validates dimensions, the declared kind against every stored dependency
  // set, and the unipartite diagonal E_aa = 1.
  EndogenousGraph(UnitSets units, EdgeRuleKind declared_kind,
                  std::vector<std::vector<EdgeEntry>> entries,
                  PairList pre_edges);

  const UnitSets& units() const { return units_; }
  int n_a() const { return units_.n_a; }
  int n_r() const { return units_.n_r; }
  bool unipartite() const { return units_.unipartite; }
  EdgeRuleKind declared_kind() const { return declared_kind_; }
  const PairList& pre_edges() const { return pre_edges_; }

  std::span<const EdgeEntry> entries(int a) const { return entries_[a]; }
  const EdgeFunction* find(int a, int r) const;
  bool edge(int a, int r, const TreatmentVector& t) const;

  // R_a(1) for every a: the neighbors under full treatment.
  std::vector<std::vector<int>> full_treatment_neighbors() const;

  friend bool operator==(const EndogenousGraph&,
                         const EndogenousGraph&) = default;

 private:
  UnitSets units_;
  EdgeRuleKind declared_kind_;
  std::vector<std::vector<EdgeEntry>> entries_;
  PairList pre_edges_;
};

// Incremental construction. For unipartite unit sets the builder starts with
// constant-one diagonal entries.
class GraphBuilder {
 public:
  GraphBuilder(UnitSets units, EdgeRuleKind declared_kind);

  // Sets (replacing any previous function for) the pair (a, r).
  GraphBuilder& set(int a, int r, EdgeFunction fn);
  GraphBuilder& constant(int a, int r, bool value = true) {
    return set(a, r, EdgeFunction::constant(value));
  }
  GraphBuilder& driven(int a, int r, bool if_control, bool if_treated) {
    return set(a, r, EdgeFunction::driven_by(r, if_control, if_treated));
  }
  GraphBuilder& pre_edge(int a, int r);

  EndogenousGraph build() const;

 private:
  UnitSets units_;
  EdgeRuleKind kind_;
  std::vector<std::vector<EdgeEntry>> entries_;
  PairList pre_edges_;
};

// Edges observed under one assignment, in compressed sparse row form.
class RealizedGraph {
 public:
  RealizedGraph() = default;
  // Builds from observed pairs; pairs are sorted and deduplicated.
  RealizedGraph(int n_a, int n_r, PairList edges);

  int n_a() const { return n_a_; }
  int n_r() const { return n_r_; }
  // R_a(T), sorted.
  std::span<const int> neighbors(int a) const {
    return {indices_.data() + offsets_[a], indices_.data() + offsets_[a + 1]};
  }
  bool edge(int a, int r) const;
  std::size_t edge_count() const { return indices_.size(); }
  PairList pairs() const;

  friend bool operator==(const RealizedGraph&,
                         const RealizedGraph&) = default;

 private:
  friend RealizedGraph realize_graph(const EndogenousGraph&,
                                     const TreatmentVector&);
  int n_a_ = 0;
  int n_r_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> indices_;
};

// e_ar = E_ar(t) for every pair. Throws ValidationError when t has the wrong
// length.
RealizedGraph realize_graph(const EndogenousGraph& graph,
                            const TreatmentVector& t);

// A set G of pairs claimed to exist under every assignment.
class AnchorSubgraph {
 public:
  AnchorSubgraph() = default;
  AnchorSubgraph(int n_a, PairList pairs);

  const PairList& pairs() const { return pairs_; }
  int n_a() const { return static_cast<int>(per_unit_.size()); }
  // V_a = {r : (a, r) in G}, sorted.
  std::span<const int> anchors_of(int a) const { return per_unit_[a]; }
  bool contains(int a, int r) const;

  friend bool operator==(const AnchorSubgraph&,
                         const AnchorSubgraph&) = default;

 private:
  PairList pairs_;
  std::vector<std::vector<int>> per_unit_;
};

struct AnchorCheckOptions {
  enum class Mode { kExhaustive, kSampled };
  Mode mode = Mode::kExhaustive;
  // Sampled mode: assignments drawn with P(T_r = 1) = 1/2.
  int n_samples = 1000;
  std::uint64_t seed = 0;
  // Exhaustive mode on graphs that are not r-driven enumerates all 2^{n_r}
  // assignments and refuses above this many randomization units.
  int enumeration_cap = 20;
  // Weaker check: E_ar(1) = 1 only.
  bool full_treatment_only = false;
};

struct AnchorViolation {
  EdgePair pair;
  TreatmentVector witness;
};

struct VerificationReport {
  bool pass = true;
  std::vector<AnchorViolation> violations;  // one witness per failing pair
  std::uint64_t evaluations = 0;
};

VerificationReport verify_anchor(const EndogenousGraph& graph,
                                 const AnchorSubgraph& anchor,
                                 const AnchorCheckOptions& options = {});

struct PairDependency {
  EdgePair pair;
  std::vector<int> minimal_set;
  EdgeRuleKind kind = EdgeRuleKind::kExogenous;
};

struct DependencyReport {
  std::vector<PairDependency> pairs;
  // Coarsest label covering every pair.
  EdgeRuleKind kind = EdgeRuleKind::kExogenous;
};

// Reduces each stored table to the set of coordinates it actually depends on.
// Tables hold at most EdgeFunction::kMaxDependencies coordinates, so the
// search is bounded by 16 * 2^16 table lookups per pair.
DependencyReport classify_dependency(const EndogenousGraph& graph);

// True when every potential edge depends on nothing but its own T_r.
bool is_r_driven(const EndogenousGraph& graph);

}  // namespace endograph

#endif  // ENDOGRAPH_GRAPH_H_
