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

#include "endograph/outcomes.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "endograph/design.h"
#include "endograph/errors.h"
#include "endograph/stats.h"

namespace endograph {

// ---------------------------------------------------------------------------
// ExposureWeights

ExposureWeights ExposureWeights::uniform(const UnitSets& units) {
  units.validate();
  ExposureWeights w;
  w.kind_ = Kind::kUniform;
  w.units_ = units;
  w.default_weight_ = 1.0;
  w.unit_default_.assign(static_cast<std::size_t>(units.n_a), 1.0);
  w.overrides_.resize(static_cast<std::size_t>(units.n_a));
  return w;
}

ExposureWeights ExposureWeights::degree_normalized(
    const EndogenousGraph& graph) {
  ExposureWeights w = uniform(graph.units());
  w.kind_ = Kind::kDegreeNormalized;
  const auto neighbors = graph.full_treatment_neighbors();
  for (int a = 0; a < graph.n_a(); ++a) {
    auto degree = static_cast<double>(neighbors[a].size());
    if (graph.unipartite()) degree -= 1.0;  // E_aa = 1 always
    w.unit_default_[a] = degree > 0.0 ? 1.0 / degree : 1.0;
  }
  return w;
}

ExposureWeights ExposureWeights::explicit_weights(
    const UnitSets& units, double default_weight,
    std::vector<WeightEntry> entries) {
  ExposureWeights w = uniform(units);
  w.kind_ = Kind::kExplicit;
  w.default_weight_ = default_weight;
  std::fill(w.unit_default_.begin(), w.unit_default_.end(), default_weight);
  std::sort(entries.begin(), entries.end(),
            [](const WeightEntry& x, const WeightEntry& y) {
              return std::tie(x.a, x.r) < std::tie(y.a, y.r);
            });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.a < 0 || e.a >= units.n_a || e.r < 0 || e.r >= units.n_r) {
      throw ValidationError("weight entry (" + std::to_string(e.a) + ", " +
                            std::to_string(e.r) + ") out of range");
    }
    if (i > 0 && entries[i - 1].a == e.a && entries[i - 1].r == e.r) {
      throw ValidationError("duplicate weight entry (" + std::to_string(e.a) +
                            ", " + std::to_string(e.r) + ")");
    }
    if (!std::isfinite(e.w)) throw ValidationError("weights must be finite");
    if (units.unipartite && e.a == e.r && e.w != 0.0) {
      throw ValidationError("unipartite weights need w_aa = 0 (unit " +
                            std::to_string(e.a) + ")");
    }
    w.overrides_[e.a].emplace_back(e.r, e.w);
  }
  return w;
}

double ExposureWeights::operator()(int a, int r) const {
  if (units_.unipartite && a == r) return 0.0;
  const auto& row = overrides_[a];
  auto it = std::lower_bound(
      row.begin(), row.end(), r,
      [](const std::pair<int, double>& e, int value) { return e.first < value; });
  if (it != row.end() && it->first == r) return it->second;
  return unit_default_[a];
}

std::vector<WeightEntry> ExposureWeights::entries() const {
  std::vector<WeightEntry> out;
  for (std::size_t a = 0; a < overrides_.size(); ++a) {
    for (const auto& [r, w] : overrides_[a]) {
      out.push_back({static_cast<int>(a), r, w});
    }
  }
  return out;
}

std::string_view to_string(ExposureWeights::Kind kind) {
  switch (kind) {
    case ExposureWeights::Kind::kUniform:
      return "uniform";
    case ExposureWeights::Kind::kDegreeNormalized:
      return "degree_normalized";
    case ExposureWeights::Kind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// OutcomeModel

void OutcomeModel::validate(const UnitSets& units) const {
  units.validate();
  const auto n = static_cast<std::size_t>(units.n_a);
  if (alpha.size() != n || beta.size() != n) {
    throw ValidationError("alpha and beta need one entry per analysis unit");
  }
  if (!gamma.empty() && gamma.size() != n) {
    throw ValidationError("gamma needs one entry per analysis unit");
  }
  if (!units.unipartite &&
      std::any_of(gamma.begin(), gamma.end(), [](double g) { return g != 0; })) {
    throw ValidationError("direct effects gamma require a unipartite graph");
  }
  if (!(weights.units() == units)) {
    throw ValidationError("exposure weights were built for other unit sets");
  }
  if (bound_m && !(*bound_m > 0.0)) {
    throw ValidationError("outcome bound M must be positive");
  }
  if (band && !(band->low > 0.0 && band->low <= band->high)) {
    throw ValidationError("weight band needs 0 < W_l <= W_h");
  }
}

// ---------------------------------------------------------------------------
// Exposure, outcomes, truth

UnitValues exposure(const RealizedGraph& realized, const TreatmentVector& t,
                    const ExposureWeights& w) {
  if (static_cast<int>(t.size()) != realized.n_r()) {
    throw ValidationError("treatment vector length does not match graph");
  }
  if (w.units().n_a != realized.n_a() || w.units().n_r != realized.n_r()) {
    throw ValidationError("exposure weights do not match graph dimensions");
  }
  UnitValues x(static_cast<std::size_t>(realized.n_a()), 0.0);
  for (int a = 0; a < realized.n_a(); ++a) {
    double sum = 0.0;
    for (int r : realized.neighbors(a)) {
      if (t[static_cast<std::size_t>(r)]) sum += w(a, r);
    }
    x[a] = sum;
  }
  return x;
}

UnitValues outcome(const OutcomeModel& model, const RealizedGraph& realized,
                   const TreatmentVector& t, bool unipartite) {
  const UnitValues x = exposure(realized, t, model.weights);
  UnitValues y(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    y[a] = model.alpha[a] + model.beta[a] * x[a];
    if (unipartite && t[a]) y[a] += model.gamma_at(static_cast<int>(a));
  }
  return y;
}

UnitValues potential_outcome(const OutcomeModel& model,
                             const EndogenousGraph& graph,
                             const TreatmentVector& t) {
  return outcome(model, realize_graph(graph, t), t, graph.unipartite());
}

UnitValues full_treatment_weight(const EndogenousGraph& graph,
                                 const ExposureWeights& w) {
  const auto neighbors = graph.full_treatment_neighbors();
  UnitValues out(neighbors.size(), 0.0);
  for (std::size_t a = 0; a < neighbors.size(); ++a) {
    CompensatedSum s;
    for (int r : neighbors[a]) s.add(w(static_cast<int>(a), r));
    out[a] = s.value();
  }
  return out;
}

double true_tte(const EndogenousGraph& graph, const OutcomeModel& model) {
  model.validate(graph.units());
  const UnitValues w1 = full_treatment_weight(graph, model.weights);
  CompensatedSum s;
  for (int a = 0; a < graph.n_a(); ++a) {
    s.add(w1[a] * model.beta[a]);
    if (graph.unipartite()) s.add(model.gamma_at(a));
  }
  return s.value() / graph.n_a();
}

double true_tte_by_contrast(const EndogenousGraph& graph,
                            const OutcomeModel& model) {
  model.validate(graph.units());
  const auto n_r = static_cast<std::size_t>(graph.n_r());
  const UnitValues y1 =
      potential_outcome(model, graph, TreatmentVector::all_treated(n_r));
  const UnitValues y0 =
      potential_outcome(model, graph, TreatmentVector::all_control(n_r));
  CompensatedSum s;
  for (std::size_t a = 0; a < y1.size(); ++a) s.add(y1[a] - y0[a]);
  return s.value() / graph.n_a();
}

std::vector<BandViolation> check_weight_band(const EndogenousGraph& graph,
                                             const ExposureWeights& w,
                                             const WeightBand& band) {
  std::vector<BandViolation> out;
  const auto neighbors = graph.full_treatment_neighbors();
  for (int a = 0; a < graph.n_a(); ++a) {
    std::vector<int> ra;
    for (int r : neighbors[a]) {
      if (!(graph.unipartite() && r == a)) ra.push_back(r);
    }
    if (ra.empty()) continue;
    const double size = static_cast<double>(ra.size());
    const double low = band.low / size;
    const double high = band.high / size;
    constexpr double kSlack = 1e-12;
    for (int r : ra) {
      const double v = std::abs(w(a, r));
      if (v < low * (1 - kSlack) || v > high * (1 + kSlack)) {
        out.push_back({{a, r}, w(a, r), low, high});
      }
    }
  }
  return out;
}

OutcomeBoundCheck verify_outcome_bound(const EndogenousGraph& graph,
                                       const OutcomeModel& model, double p,
                                       int n_samples, std::uint64_t seed,
                                       int enumeration_cap) {
  model.validate(graph.units());
  OutcomeBoundCheck check;
  auto visit = [&](const TreatmentVector& t) {
    for (double y : potential_outcome(model, graph, t)) {
      check.max_abs_outcome = std::max(check.max_abs_outcome, std::abs(y));
    }
    ++check.assignments_checked;
  };
  if (graph.n_r() <= enumeration_cap) {
    check.exhaustive = true;
    for (const auto& item : enumerate_assignments(graph.n_r(), p)) {
      visit(item.t);
    }
  } else {
    const BernoulliDesign design(p, graph.n_r(), seed);
    for (int s = 0; s < n_samples; ++s) visit(design.draw(s));
  }
  if (model.bound_m) {
    check.within_bound = check.max_abs_outcome <= *model.bound_m;
  }
  return check;
}

}  // namespace endograph
