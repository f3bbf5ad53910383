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

// Total-treatment-effect estimators on endogenous graphs.
//
// The anchor-instrument estimator multiplies, per analysis unit a,
//
//   beta_hat_a = y_a (z_a - E z_a) / Cov(x_a, z_a),   z_a = sum_r T_r u_ar,
//   W_hat_a    = sum_r [T_r w_ar (e_ar - c_ar) / p + w_ar c_ar],
//
// where u is supported on an anchor subgraph G (edges present under every
// assignment) and c_ar = 1((a, r) in G). On G the covariance is known in
// closed form, Cov(x_a, z_a) = p (1 - p) sum_r w_ar u_ar, and the two factors
// are uncorrelated, so their product is unbiased for W_a(1) beta_a whenever
// edges are r-driven and T is i.i.d. Bernoulli(p).
//
// The Horvitz-Thompson estimator is included to exhibit the bias that comes
// from treating a realized endogenous graph as fixed.

#ifndef ENDOGRAPH_ESTIMATORS_H_
#define ENDOGRAPH_ESTIMATORS_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "endograph/graph.h"
#include "endograph/outcomes.h"
#include "endograph/treatment.h"

namespace endograph {

// ---------------------------------------------------------------------------
// Horvitz-Thompson

enum class HtScale {
  kMean,   // (1/n_a) sum_a ...
  kTotal,  // sum_a ..., the scale of the single-randomization-unit examples
};

// sum_a y_a [prod_{R_a(T)} T_r / p^{|R_a|} - prod_{R_a(T)} (1 - T_r) /
// (1 - p)^{|R_a|}], with an empty R_a(T) contributing zero.
double horvitz_thompson(const RealizedGraph& realized,
                        const TreatmentVector& t, std::span<const double> y,
                        double p, HtScale scale = HtScale::kMean);

// ---------------------------------------------------------------------------
// Configuration

// Constants of the declared boundedness regime: |y_a| <= m and the weight
// band [w_low, w_high].
struct BoundConstants {
  double m = 1.0;
  double w_low = 1.0;
  double w_high = 1.0;
  friend bool operator==(const BoundConstants&,
                         const BoundConstants&) = default;
};

// Instrument weights u_ar. Only nonzero weights are stored.
class InstrumentWeights {
 public:
  enum class Kind { kUniform, kExplicit };

  InstrumentWeights() = default;

  // u_ar = 1 on every anchor pair, except the diagonal when `zero_diagonal`.
  static InstrumentWeights uniform(const AnchorSubgraph& anchor,
                                   bool zero_diagonal);
  static InstrumentWeights explicit_weights(int n_a,
                                            std::vector<WeightEntry> entries);

  Kind kind() const { return kind_; }
  int n_a() const { return static_cast<int>(rows_.size()); }
  std::span<const std::pair<int, double>> row(int a) const { return rows_[a]; }
  double operator()(int a, int r) const;
  std::vector<WeightEntry> entries() const;

  friend bool operator==(const InstrumentWeights&,
                         const InstrumentWeights&) = default;

 private:
  Kind kind_ = Kind::kUniform;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

struct EstimatorConfig {
  AnchorSubgraph anchor;
  InstrumentWeights u;
  // Shared with the outcome model.
  ExposureWeights w;
  double p = 0.5;
  // When set, EstimateResult carries the per-unit bound
  // M W_h |R_a| / (p^2 (1 - p) W_l).
  std::optional<BoundConstants> bounds;

  // Uniform instruments over the anchor (zero diagonal on unipartite units).
  static EstimatorConfig with_uniform_instruments(AnchorSubgraph anchor,
                                                  ExposureWeights w, double p);

  // c_ar = 1((a, r) in G).
  double c(int a, int r) const { return anchor.contains(a, r) ? 1.0 : 0.0; }

  friend bool operator==(const EstimatorConfig&,
                         const EstimatorConfig&) = default;
};

// ---------------------------------------------------------------------------
// Assumption validation

struct AssumptionViolation {
  // "a".."f" for the lettered unbiasedness conditions, "anchor" for anchor
  // pairs that can vanish, "diagonal" for w_aa / u_aa != 0 on unipartite
  // graphs, "relevance" for a zero instrument covariance.
  std::string assumption;
  std::string detail;
  std::vector<int> units;
};

struct AssumptionReport {
  std::vector<AssumptionViolation> violations;
  bool ok() const { return violations.empty(); }
  // Throws AssumptionError for the first violation.
  void throw_if_failed() const;
};

struct ValidationOptions {
  // Accept anchor pairs with E_ar(1) = 1 instead of E_ar(T) = 1 for all T,
  // which is all unbiasedness needs under r-driven edges.
  bool full_treatment_anchor_only = false;
};

// Conditions that involve only the configuration: (b), (c), (e), (f), the
// unipartite diagonal, and nonzero instrument covariance.
AssumptionReport validate_config(const EstimatorConfig& config,
                                 const UnitSets& units);
// Adds (a) r-driven edges and the anchor property of G on `graph`.
AssumptionReport validate_unbiasedness(const EndogenousGraph& graph,
                                       const EstimatorConfig& config,
                                       const ValidationOptions& options = {});

// ---------------------------------------------------------------------------
// Instruments

struct InstrumentExposure {
  UnitValues z;
  UnitValues expected_z;  // p sum_r u_ar
};

// z_a = sum_r T_r u_ar with the weights as given (not normalized).
InstrumentExposure instrument_exposure(const TreatmentVector& t,
                                       const InstrumentWeights& u, double p);

// Per-unit instrument quantities derived from a configuration alone. The
// weights are rescaled so sum_r u_ar = 1 whenever that sum is nonzero; the
// estimators are invariant to this rescaling.
class InstrumentModel {
 public:
  // Throws AssumptionError when validate_config() finds a violation.
  InstrumentModel(const EstimatorConfig& config, const UnitSets& units);

  int n_a() const { return static_cast<int>(covariance_.size()); }
  double p() const { return p_; }
  // Normalized u.
  std::span<const std::pair<int, double>> row(int a) const { return rows_[a]; }
  // Cov(x_a, z_a) = p (1 - p) sum_r w_ar u_ar (normalized u).
  const UnitValues& covariance() const { return covariance_; }
  const UnitValues& expected_z() const { return expected_z_; }
  // sum_r w_ar c_ar.
  const UnitValues& anchor_weight() const { return anchor_weight_; }

  double z(int a, const TreatmentVector& t) const;

 private:
  double p_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  UnitValues covariance_;
  UnitValues expected_z_;
  UnitValues anchor_weight_;
};

// Cov(x_a, z_a^u) for the configured (unnormalized) u. Throws AssumptionError
// naming the unit when a covariance vanishes.
UnitValues instrument_covariance(const EstimatorConfig& config,
                                 const UnitSets& units);

// ---------------------------------------------------------------------------
// Estimators

struct UnitEstimate {
  double beta_hat = 0.0;
  double w_hat = 0.0;
  std::optional<double> gamma_hat;
};

struct EstimateDiagnostics {
  // max_a |R_a(1)| and max_r |A_r(1)|.
  int d_a = 0;
  int d_r = 0;
  // Per-unit bound on |beta_hat_a W_hat_a|; empty unless bounds are declared.
  std::vector<double> unit_bounds;
};

struct EstimateResult {
  double mu_hat = 0.0;
  std::vector<UnitEstimate> per_unit;
  UnitValues instrument_cov;
  EstimateDiagnostics diagnostics;
};

// The anchor-instrument estimator bound to one graph and configuration. The
// constructor runs the full assumption validation and throws AssumptionError
// on the first failure; every method afterwards is a pure function of its
// arguments.
class AnchorEstimator {
 public:
  AnchorEstimator(const EndogenousGraph& graph, EstimatorConfig config,
                  const ValidationOptions& options = {});

  const EstimatorConfig& config() const { return config_; }
  const InstrumentModel& instruments() const { return instruments_; }
  const EstimateDiagnostics& diagnostics() const { return diagnostics_; }
  bool unipartite() const { return units_.unipartite; }

  UnitValues beta_hat(std::span<const double> y,
                      const TreatmentVector& t) const;
  // Direct formula over r in R_a(T) and G_a.
  UnitValues w_hat(const RealizedGraph& realized,
                   const TreatmentVector& t) const;
  // sum_{r in G_a} w_ar + sum_{r in R_a(T) \ G_a} T_r w_ar / p.
  UnitValues w_hat_decomposed(const RealizedGraph& realized,
                              const TreatmentVector& t) const;
  // T_a y_a / p - (1 - T_a) y_a / (1 - p); unipartite only.
  UnitValues gamma_hat(std::span<const double> y,
                       const TreatmentVector& t) const;

  // Bipartite graphs: (1/n_a) sum_a beta_hat_a W_hat_a. Unipartite graphs add
  // gamma_hat_a to each summand.
  EstimateResult estimate(const RealizedGraph& realized,
                          std::span<const double> y,
                          const TreatmentVector& t) const;
  // Summands only, without building an EstimateResult.
  double mu_hat(const RealizedGraph& realized, std::span<const double> y,
                const TreatmentVector& t) const;

  // (1/n_a) sum_a beta_hat_a sum_r w_ar c_ar.
  double mu_tilde(std::span<const double> y, const TreatmentVector& t) const;
  // Expectation of mu_tilde: (1/n_a) sum_a beta_a sum_r w_ar c_ar.
  double mu_star(std::span<const double> beta) const;

 private:
  void check_inputs(std::span<const double> y, const TreatmentVector& t) const;

  UnitSets units_;
  EstimatorConfig config_;
  InstrumentModel instruments_;
  EstimateDiagnostics diagnostics_;
};

// Convenience wrappers that validate on every call.
UnitValues beta_hat(const EndogenousGraph& graph, std::span<const double> y,
                    const TreatmentVector& t, const EstimatorConfig& config);
UnitValues w_hat(const EndogenousGraph& graph, const RealizedGraph& realized,
                 const TreatmentVector& t, const EstimatorConfig& config);
// Realizes `graph` at t and estimates. Bipartite graphs only.
EstimateResult mu_hat(const EndogenousGraph& graph, std::span<const double> y,
                      const TreatmentVector& t, const EstimatorConfig& config);
// Unipartite graphs only.
EstimateResult mu_hat_uni(const EndogenousGraph& graph,
                          std::span<const double> y, const TreatmentVector& t,
                          const EstimatorConfig& config);
double mu_tilde(const EndogenousGraph& graph, std::span<const double> y,
                const TreatmentVector& t, const EstimatorConfig& config);
// Throws ValidationError on bipartite unit sets.
UnitValues gamma_hat(const UnitSets& units, std::span<const double> y,
                     const TreatmentVector& t, double p);

}  // namespace endograph

#endif  // ENDOGRAPH_ESTIMATORS_H_
