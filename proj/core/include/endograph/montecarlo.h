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

// Scenario generators and the replication engine.
//
// A scenario instance fixes the potential-edge graph and the outcome model;
// replications redraw only T, so every summary is a design-based one.
// Replication i always uses the assignment of substream i, which makes
// summaries bit-identical for a fixed seed.

#ifndef ENDOGRAPH_MONTECARLO_H_
#define ENDOGRAPH_MONTECARLO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "endograph/estimators.h"
#include "endograph/graph.h"
#include "endograph/hypothesis_tests.h"
#include "endograph/outcomes.h"

namespace endograph {

struct Range {
  double low = 0.0;
  double high = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

// Degree-capped random r-driven family. Every analysis unit gets
// `anchor_degree` always-present edges, `created_degree` edges that exist
// iff T_r = 1 and `dropped_degree` edges that exist iff T_r = 0, all to
// distinct randomization units; draws that would push some r above
// `max_r_degree` potential edges are rejected.
struct ScenarioSpec {
  int n_a = 200;
  int n_r = 200;
  int anchor_degree = 2;
  int created_degree = 2;
  int dropped_degree = 0;
  int max_r_degree = 12;
  Range alpha{0.0, 1.0};
  Range beta{0.5, 0.5};
  Range gamma{0.0, 0.0};
  ExposureWeights::Kind weights = ExposureWeights::Kind::kUniform;
  // n_a = n_r, no self edges drawn; the diagonal edge is always present.
  bool unipartite = false;
  double p = 0.5;
  std::uint64_t seed = 0;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Rescales n_r with n_a (keeping n_r / n_a) or sets n = n_a = n_r.
ScenarioSpec at_size(const ScenarioSpec& spec, int n_a);

struct ScenarioInstance {
  EndogenousGraph graph;
  OutcomeModel model;
  // Absent for instances where only the HT estimator applies.
  std::optional<EstimatorConfig> config;
  double tte = 0.0;
  double p = 0.5;
};

// Draws a graph, outcome model, uniform-instrument config and the declared
// bound constants (M, W_l, W_h). The instance is validated before return.
ScenarioInstance generate_scenario(const ScenarioSpec& spec);

enum class EstimatorChoice { kMuHat, kHorvitzThompson, kMuTilde };

std::string_view to_string(EstimatorChoice choice);
std::optional<EstimatorChoice> parse_estimator_choice(std::string_view name);

struct ReplicationSummary {
  int n_reps = 0;
  double mean = 0.0;
  double variance = 0.0;  // (n - 1) denominator
  double truth = 0.0;
  double bias_vs_truth = 0.0;
  std::vector<double> estimates;
  // (estimate - truth) / sd; empty when the variance is zero.
  std::vector<double> standardized;
  std::optional<double> ks_distance;
  int d_a = 0;
  int d_r = 0;
  // Bound on the number of correlated summands, d_a * d_r.
  long long dependency_degree = 0;
};

// Truth is the TTE for kMuHat and kHorvitzThompson and mu* for kMuTilde.
ReplicationSummary replicate(const ScenarioInstance& instance, int n_reps,
                             EstimatorChoice choice, std::uint64_t seed);

struct ScalingPoint {
  int n_a = 0;
  int n_r = 0;
  double variance = 0.0;
  double mean = 0.0;
  double truth = 0.0;
  int d_a = 0;
  int d_r = 0;
  // M^2 W_h^2 d_a^3 d_r / (p^4 (1 - p)^2 W_l^2 n_a).
  double envelope = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  // Least-squares fit of log Var against log n_a.
  double slope = 0.0;
  double intercept = 0.0;
  // Largest Var / envelope ratio.
  double max_envelope_ratio = 0.0;
};

// Needs at least three distinct increasing sizes.
ScalingReport variance_scaling_study(const ScenarioSpec& family,
                                     const std::vector<int>& sizes, int n_reps,
                                     std::uint64_t seed);

struct NormalityReport {
  int n_reps = 0;
  double ks_distance = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double truth = 0.0;
};

// Standardizes mu_hat with the empirical SD. Needs n_reps >= 1000; throws
// ValidationError when the replications have zero variance.
NormalityReport normality_diagnostic(const ScenarioInstance& instance,
                                     int n_reps, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rejection-rate harnesses

struct RejectionRate {
  int n_reps = 0;
  int rejections = 0;
  double rate = 0.0;
  // sqrt(alpha (1 - alpha) / n_reps), the standard error under exact size.
  double null_se = 0.0;
};

// Redraws T n_reps times on the fixed instance; y follows the instance's
// outcome model.
RejectionRate sharp_null_rejection_rate(const ScenarioInstance& instance,
                                        int n_reps,
                                        const ResamplingOptions& options,
                                        std::uint64_t seed);

enum class EdgeDgp {
  // Every potential edge is constant.
  kExogenous,
  // Created edges exist iff the randomization unit is treated.
  kRDriven,
  // Created edges exist iff some other randomization unit is treated, so
  // they are independent of the endpoint's own treatment.
  kPartnerDriven,
};

std::string_view to_string(EdgeDgp dgp);
std::optional<EdgeDgp> parse_edge_dgp(std::string_view name);

struct EdgeDgpSpec {
  EdgeDgp kind = EdgeDgp::kExogenous;
  int n_a = 500;
  int n_r = 500;
  // Pre-treatment edges per analysis unit, kept unless churned away.
  int base_degree = 1;
  // Extra potential edges per analysis unit.
  int created_degree = 3;
  // Exogenous noise: each pre-treatment edge is absent with this probability
  // and each analysis unit gains one constant edge with it.
  double churn = 0.0;
  double p = 0.5;
  std::uint64_t seed = 0;

  friend bool operator==(const EdgeDgpSpec&, const EdgeDgpSpec&) = default;
};

EndogenousGraph generate_edge_dgp(const EdgeDgpSpec& spec);

RejectionRate exogeneity_rejection_rate(const EdgeDgpSpec& spec, int n_reps,
                                        const ResamplingOptions& options,
                                        std::uint64_t seed);
RejectionRate ttest_rejection_rate(const EdgeDgpSpec& spec, int n_reps,
                                   const TTestOptions& options,
                                   std::uint64_t seed);

}  // namespace endograph

#endif  // ENDOGRAPH_MONTECARLO_H_
