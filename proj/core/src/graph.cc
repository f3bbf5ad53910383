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

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "endograph/errors.h"

namespace endograph {
namespace {

void check_index(int value, int bound, const char* what) {
  if (value < 0 || value >= bound) {
    throw ValidationError(std::string(what) + " index " +
                          std::to_string(value) + " out of range [0, " +
                          std::to_string(bound) + ")");
  }
}

bool is_sorted_unique(std::span<const int> xs) {
  return std::adjacent_find(xs.begin(), xs.end(),
                            [](int x, int y) { return x >= y; }) == xs.end();
}

EdgeRuleKind pair_kind(int r, std::span<const int> set, int n_r) {
  if (set.empty()) return EdgeRuleKind::kExogenous;
  if (set.size() == 1 && set[0] == r) return EdgeRuleKind::kRDriven;
  if (static_cast<int>(set.size()) == n_r) return EdgeRuleKind::kUnrestricted;
  return EdgeRuleKind::kSetDriven;
}

// Essential coordinates of a table: i matters iff flipping bit i changes the
// value somewhere.
std::vector<int> essential_coordinates(const EdgeFunction& fn) {
  const auto deps = fn.depends_on();
  const auto table = fn.table();
  std::vector<int> out;
  for (std::size_t i = 0; i < deps.size(); ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t k = 0; k < table.size(); ++k) {
      if ((k & bit) == 0 && table[k] != table[k | bit]) {
        out.push_back(deps[i]);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void UnitSets::validate() const {
  if (n_a < 1 || n_r < 1) {
    throw ValidationError("need n_a >= 1 and n_r >= 1");
  }
  if (unipartite && n_a != n_r) {
    throw ValidationError("unipartite unit sets need n_a == n_r");
  }
}

PairList normalize_pairs(PairList pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::string_view to_string(EdgeRuleKind kind) {
  switch (kind) {
    case EdgeRuleKind::kExogenous:
      return "exogenous";
    case EdgeRuleKind::kRDriven:
      return "r_driven";
    case EdgeRuleKind::kSetDriven:
      return "set_driven";
    case EdgeRuleKind::kUnrestricted:
      return "unrestricted";
  }
  return "unknown";
}

std::optional<EdgeRuleKind> parse_edge_rule_kind(std::string_view name) {
  for (auto kind : {EdgeRuleKind::kExogenous, EdgeRuleKind::kRDriven,
                    EdgeRuleKind::kSetDriven, EdgeRuleKind::kUnrestricted}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// EdgeFunction

EdgeFunction::EdgeFunction(std::vector<int> depends_on,
                           std::vector<std::uint8_t> table)
    : depends_on_(std::move(depends_on)), table_(std::move(table)) {
  if (depends_on_.size() > kMaxDependencies) {
    throw CapExceededError("edge dependency set of size " +
                           std::to_string(depends_on_.size()) +
                           " exceeds the cap of " +
                           std::to_string(kMaxDependencies));
  }
  if (!is_sorted_unique(depends_on_)) {
    throw ValidationError("edge dependency set must be sorted and unique");
  }
  if (table_.size() != (std::size_t{1} << depends_on_.size())) {
    throw ValidationError("edge table needs 2^|depends_on| entries");
  }
  for (auto v : table_) {
    if (v > 1) throw ValidationError("edge table values must be 0 or 1");
  }
}

EdgeFunction EdgeFunction::constant(bool value) {
  return EdgeFunction({}, {static_cast<std::uint8_t>(value)});
}

EdgeFunction EdgeFunction::driven_by(int r, bool if_control, bool if_treated) {
  return EdgeFunction({r}, {static_cast<std::uint8_t>(if_control),
                            static_cast<std::uint8_t>(if_treated)});
}

bool EdgeFunction::operator()(const TreatmentVector& t) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < depends_on_.size(); ++i) {
    if (t[static_cast<std::size_t>(depends_on_[i])]) k |= std::size_t{1} << i;
  }
  return table_[k] != 0;
}

bool EdgeFunction::is_constant() const {
  return std::all_of(table_.begin(), table_.end(),
                     [&](std::uint8_t v) { return v == table_[0]; });
}

// ---------------------------------------------------------------------------
// EndogenousGraph

EndogenousGraph::EndogenousGraph(UnitSets units, EdgeRuleKind declared_kind,
                                 std::vector<std::vector<EdgeEntry>> entries,
                                 PairList pre_edges)
    : units_(units),
      declared_kind_(declared_kind),
      entries_(std::move(entries)),
      pre_edges_(normalize_pairs(std::move(pre_edges))) {
  units_.validate();
  if (static_cast<int>(entries_.size()) != units_.n_a) {
    throw ValidationError("edge entries must be given for every analysis unit");
  }
  for (int a = 0; a < units_.n_a; ++a) {
    const auto& row = entries_[a];
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& e = row[i];
      check_index(e.r, units_.n_r, "randomization unit");
      if (i > 0 && row[i - 1].r >= e.r) {
        throw ValidationError("edge entries of analysis unit " +
                              std::to_string(a) +
                              " must be sorted by r without duplicates");
      }
      for (int s : e.fn.depends_on()) {
        check_index(s, units_.n_r, "dependency");
      }
      const auto deps = e.fn.depends_on();
      const bool ok = [&] {
        switch (declared_kind_) {
          case EdgeRuleKind::kExogenous:
            return deps.empty();
          case EdgeRuleKind::kRDriven:
            return deps.empty() || (deps.size() == 1 && deps[0] == e.r);
          case EdgeRuleKind::kSetDriven:
          case EdgeRuleKind::kUnrestricted:
            return true;
        }
        return false;
      }();
      if (!ok) {
        throw ValidationError(
            "edge (" + std::to_string(a) + ", " + std::to_string(e.r) +
            ") has a dependency set inconsistent with declared kind " +
            std::string(to_string(declared_kind_)));
      }
    }
  }
  for (const auto& p : pre_edges_) {
    check_index(p.a, units_.n_a, "pre-edge analysis unit");
    check_index(p.r, units_.n_r, "pre-edge randomization unit");
  }
  if (units_.unipartite) {
    for (int a = 0; a < units_.n_a; ++a) {
      const EdgeFunction* fn = find(a, a);
      const bool always_on =
          fn != nullptr && std::all_of(fn->table().begin(), fn->table().end(),
                                       [](std::uint8_t v) { return v == 1; });
      if (!always_on) {
        throw ValidationError("unipartite graph needs E_aa = 1 for unit " +
                              std::to_string(a));
      }
    }
  }
}

const EdgeFunction* EndogenousGraph::find(int a, int r) const {
  const auto& row = entries_[a];
  auto it = std::lower_bound(
      row.begin(), row.end(), r,
      [](const EdgeEntry& e, int value) { return e.r < value; });
  if (it == row.end() || it->r != r) return nullptr;
  return &it->fn;
}

bool EndogenousGraph::edge(int a, int r, const TreatmentVector& t) const {
  const EdgeFunction* fn = find(a, r);
  return fn != nullptr && (*fn)(t);
}

std::vector<std::vector<int>> EndogenousGraph::full_treatment_neighbors()
    const {
  const auto ones = TreatmentVector::all_treated(units_.n_r);
  std::vector<std::vector<int>> out(units_.n_a);
  for (int a = 0; a < units_.n_a; ++a) {
    for (const auto& e : entries_[a]) {
      if (e.fn(ones)) out[a].push_back(e.r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GraphBuilder

GraphBuilder::GraphBuilder(UnitSets units, EdgeRuleKind declared_kind)
    : units_(units), kind_(declared_kind) {
  units_.validate();
  entries_.resize(units_.n_a);
  if (units_.unipartite) {
    for (int a = 0; a < units_.n_a; ++a) {
      entries_[a].push_back({a, EdgeFunction::constant(true)});
    }
  }
}

GraphBuilder& GraphBuilder::set(int a, int r, EdgeFunction fn) {
  check_index(a, units_.n_a, "analysis unit");
  check_index(r, units_.n_r, "randomization unit");
  auto& row = entries_[a];
  auto it = std::lower_bound(
      row.begin(), row.end(), r,
      [](const EdgeEntry& e, int value) { return e.r < value; });
  if (it != row.end() && it->r == r) {
    it->fn = std::move(fn);
  } else {
    row.insert(it, EdgeEntry{r, std::move(fn)});
  }
  return *this;
}

GraphBuilder& GraphBuilder::pre_edge(int a, int r) {
  pre_edges_.push_back({a, r});
  return *this;
}

EndogenousGraph GraphBuilder::build() const {
  return EndogenousGraph(units_, kind_, entries_, pre_edges_);
}

// ---------------------------------------------------------------------------
// RealizedGraph

RealizedGraph::RealizedGraph(int n_a, int n_r, PairList edges)
    : n_a_(n_a), n_r_(n_r) {
  UnitSets{n_a, n_r, false}.validate();
  edges = normalize_pairs(std::move(edges));
  offsets_.assign(static_cast<std::size_t>(n_a) + 1, 0);
  indices_.reserve(edges.size());
  for (const auto& p : edges) {
    check_index(p.a, n_a, "analysis unit");
    check_index(p.r, n_r, "randomization unit");
    ++offsets_[static_cast<std::size_t>(p.a) + 1];
    indices_.push_back(p.r);
  }
  for (std::size_t a = 0; a < static_cast<std::size_t>(n_a); ++a) {
    offsets_[a + 1] += offsets_[a];
  }
}

bool RealizedGraph::edge(int a, int r) const {
  const auto row = neighbors(a);
  return std::binary_search(row.begin(), row.end(), r);
}

PairList RealizedGraph::pairs() const {
  PairList out;
  out.reserve(indices_.size());
  for (int a = 0; a < n_a_; ++a) {
    for (int r : neighbors(a)) out.push_back({a, r});
  }
  return out;
}

RealizedGraph realize_graph(const EndogenousGraph& graph,
                            const TreatmentVector& t) {
  if (static_cast<int>(t.size()) != graph.n_r()) {
    throw ValidationError("treatment vector has length " +
                          std::to_string(t.size()) + " but the graph has " +
                          std::to_string(graph.n_r()) +
                          " randomization units");
  }
  RealizedGraph out;
  out.n_a_ = graph.n_a();
  out.n_r_ = graph.n_r();
  out.offsets_.assign(static_cast<std::size_t>(graph.n_a()) + 1, 0);
  for (int a = 0; a < graph.n_a(); ++a) {
    for (const auto& e : graph.entries(a)) {
      if (e.fn(t)) out.indices_.push_back(e.r);
    }
    out.offsets_[static_cast<std::size_t>(a) + 1] = out.indices_.size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// AnchorSubgraph

AnchorSubgraph::AnchorSubgraph(int n_a, PairList pairs)
    : pairs_(normalize_pairs(std::move(pairs))),
      per_unit_(static_cast<std::size_t>(std::max(n_a, 0))) {
  if (n_a < 1) throw ValidationError("anchor subgraph needs n_a >= 1");
  for (const auto& p : pairs_) {
    check_index(p.a, n_a, "anchor analysis unit");
    if (p.r < 0) throw ValidationError("negative anchor randomization unit");
    per_unit_[p.a].push_back(p.r);
  }
}

bool AnchorSubgraph::contains(int a, int r) const {
  const auto& row = per_unit_[a];
  return std::binary_search(row.begin(), row.end(), r);
}

// ---------------------------------------------------------------------------
// Anchor verification and dependency classification

VerificationReport verify_anchor(const EndogenousGraph& graph,
                                 const AnchorSubgraph& anchor,
                                 const AnchorCheckOptions& options) {
  if (anchor.n_a() != graph.n_a()) {
    throw ValidationError("anchor subgraph and graph disagree on n_a");
  }
  VerificationReport report;
  const auto n_r = static_cast<std::size_t>(graph.n_r());

  // Pairs with no stored function never form an edge.
  std::vector<EdgePair> missing;
  for (const auto& p : anchor.pairs()) {
    check_index(p.r, graph.n_r(), "anchor randomization unit");
    if (graph.find(p.a, p.r) == nullptr) missing.push_back(p);
  }
  auto record = [&](EdgePair pair, TreatmentVector witness) {
    report.pass = false;
    report.violations.push_back({pair, std::move(witness)});
  };
  auto check_pairs = [&](const TreatmentVector& t,
                         std::vector<std::uint8_t>& failed) {
    for (std::size_t i = 0; i < anchor.pairs().size(); ++i) {
      if (failed[i]) continue;
      const auto& p = anchor.pairs()[i];
      ++report.evaluations;
      if (!graph.edge(p.a, p.r, t)) {
        failed[i] = 1;
        record(p, t);
      }
    }
  };

  if (options.full_treatment_only) {
    std::vector<std::uint8_t> failed(anchor.pairs().size(), 0);
    check_pairs(TreatmentVector::all_treated(n_r), failed);
    return report;
  }

  if (options.mode == AnchorCheckOptions::Mode::kSampled) {
    if (options.n_samples < 1) {
      throw ValidationError("sampled anchor check needs n_samples >= 1");
    }
    Rng rng(options.seed);
    std::vector<std::uint8_t> failed(anchor.pairs().size(), 0);
    for (int s = 0; s < options.n_samples; ++s) {
      TreatmentVector t(n_r);
      for (std::size_t r = 0; r < n_r; ++r) t.set(r, rng.bernoulli(0.5));
      check_pairs(t, failed);
    }
    return report;
  }

  const EdgeRuleKind kind = classify_dependency(graph).kind;
  if (kind == EdgeRuleKind::kExogenous || kind == EdgeRuleKind::kRDriven) {
    // Each table is a function of at most T_r: two evaluations settle it.
    for (const auto& p : anchor.pairs()) {
      const EdgeFunction* fn = graph.find(p.a, p.r);
      if (fn == nullptr) {
        record(p, TreatmentVector(n_r));
        continue;
      }
      for (bool value : {false, true}) {
        TreatmentVector t(n_r);
        t.set(static_cast<std::size_t>(p.r), value);
        ++report.evaluations;
        if (!(*fn)(t)) {
          record(p, t);
          break;
        }
      }
    }
    return report;
  }

  if (graph.n_r() > options.enumeration_cap) {
    throw CapExceededError("exhaustive anchor check over " +
                           std::to_string(graph.n_r()) +
                           " randomization units exceeds the cap of " +
                           std::to_string(options.enumeration_cap));
  }
  std::vector<std::uint8_t> failed(anchor.pairs().size(), 0);
  const std::uint64_t total = std::uint64_t{1} << n_r;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    check_pairs(TreatmentVector::from_mask(mask, n_r), failed);
  }
  return report;
}

DependencyReport classify_dependency(const EndogenousGraph& graph) {
  DependencyReport report;
  for (int a = 0; a < graph.n_a(); ++a) {
    for (const auto& e : graph.entries(a)) {
      PairDependency dep;
      dep.pair = {a, e.r};
      dep.minimal_set = essential_coordinates(e.fn);
      dep.kind = pair_kind(e.r, dep.minimal_set, graph.n_r());
      report.kind = std::max(report.kind, dep.kind);
      report.pairs.push_back(std::move(dep));
    }
  }
  return report;
}

bool is_r_driven(const EndogenousGraph& graph) {
  for (int a = 0; a < graph.n_a(); ++a) {
    for (const auto& e : graph.entries(a)) {
      const auto set = essential_coordinates(e.fn);
      if (!(set.empty() || (set.size() == 1 && set[0] == e.r))) return false;
    }
  }
  return true;
}

}  // namespace endograph
