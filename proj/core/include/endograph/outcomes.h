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

// Linear exposure-response outcomes
//
//   y_a = alpha_a + beta_a x_a (+ gamma_a T_a on unipartite graphs),
//   x_a = sum_r T_r e_ar w_ar,
//
// and the ground-truth total treatment effect.

#ifndef ENDOGRAPH_OUTCOMES_H_
#define ENDOGRAPH_OUTCOMES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "endograph/graph.h"
#include "endograph/treatment.h"

namespace endograph {

// One real value per analysis unit.
using UnitValues = std::vector<double>;

struct WeightEntry {
  int a = 0;
  int r = 0;
  double w = 0.0;
  friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

// Exposure weights w_ar, defined on all of A x R. Each analysis unit has a
// default weight plus sparse overrides; on unipartite unit sets the diagonal
// is pinned to zero.
class ExposureWeights {
 public:
  enum class Kind { kUniform, kDegreeNormalized, kExplicit };

  ExposureWeights() = default;

  // w_ar = 1.
  static ExposureWeights uniform(const UnitSets& units);
  // w_ar = 1 / |R_a(1)|, with the diagonal excluded from the count on
  // unipartite graphs; units with no neighbors get weight 1.
  static ExposureWeights degree_normalized(const EndogenousGraph& graph);
  static ExposureWeights explicit_weights(const UnitSets& units,
                                          double default_weight,
                                          std::vector<WeightEntry> entries);

  double operator()(int a, int r) const;

  Kind kind() const { return kind_; }
  const UnitSets& units() const { return units_; }
  double default_weight() const { return default_weight_; }
  // Overrides for explicit weights, sorted by (a, r).
  std::vector<WeightEntry> entries() const;

  friend bool operator==(const ExposureWeights&,
                         const ExposureWeights&) = default;

 private:
  Kind kind_ = Kind::kUniform;
  UnitSets units_;
  double default_weight_ = 1.0;
  std::vector<double> unit_default_;
  std::vector<std::vector<std::pair<int, double>>> overrides_;
};

std::string_view to_string(ExposureWeights::Kind kind);

// Declared weight band: W_l / |R_a| <= |w_ar| <= W_h / |R_a| for r in R_a(1).
struct WeightBand {
  double low = 1.0;
  double high = 1.0;
  friend bool operator==(const WeightBand&, const WeightBand&) = default;
};

struct OutcomeModel {
  UnitValues alpha;
  UnitValues beta;
  // Direct effects; must be all zero or empty on bipartite graphs.
  UnitValues gamma;
  ExposureWeights weights;
  // Declared bound M on |y_a|.
  std::optional<double> bound_m;
  std::optional<WeightBand> band;

  // Checks vector lengths against `units`, the zero diagonal on unipartite
  // graphs and that gamma vanishes on bipartite ones.
  void validate(const UnitSets& units) const;
  double gamma_at(int a) const { return gamma.empty() ? 0.0 : gamma[a]; }

  friend bool operator==(const OutcomeModel&, const OutcomeModel&) = default;
};

// x_a = sum_r T_r e_ar w_ar.
UnitValues exposure(const RealizedGraph& realized, const TreatmentVector& t,
                    const ExposureWeights& w);

// y_a for the observed assignment.
UnitValues outcome(const OutcomeModel& model, const RealizedGraph& realized,
                   const TreatmentVector& t, bool unipartite);
// Y(t) computed from the potential edges.
UnitValues potential_outcome(const OutcomeModel& model,
                             const EndogenousGraph& graph,
                             const TreatmentVector& t);

// mu = (1/n_a) sum_a [W_a(1) beta_a (+ gamma_a)], W_a(1) = sum_r w_ar E_ar(1).
double true_tte(const EndogenousGraph& graph, const OutcomeModel& model);
// (1/n_a) sum_a [Y_a(1) - Y_a(0)], evaluated from the potential outcomes.
double true_tte_by_contrast(const EndogenousGraph& graph,
                            const OutcomeModel& model);

// W_a(1) per unit.
UnitValues full_treatment_weight(const EndogenousGraph& graph,
                                 const ExposureWeights& w);

struct BandViolation {
  EdgePair pair;
  double weight = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Pairs in R_a(1) whose weight falls outside the band. On unipartite graphs
// the zero-weight diagonal is excluded from both the check and |R_a|.
std::vector<BandViolation> check_weight_band(const EndogenousGraph& graph,
                                             const ExposureWeights& w,
                                             const WeightBand& band);

struct OutcomeBoundCheck {
  double max_abs_outcome = 0.0;
  std::uint64_t assignments_checked = 0;
  bool exhaustive = false;
  bool within_bound = true;
};

// Verifies |y_a| <= bound_m by enumeration when n_r is at most
// `enumeration_cap`, otherwise on `n_samples` Bernoulli(p) draws.
OutcomeBoundCheck verify_outcome_bound(const EndogenousGraph& graph,
                                       const OutcomeModel& model, double p,
                                       int n_samples = 2000,
                                       std::uint64_t seed = 0,
                                       int enumeration_cap = 12);

}  // namespace endograph

#endif  // ENDOGRAPH_OUTCOMES_H_
