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

#include <algorithm>
#include <cmath>
#include <string>

#include "endograph/design.h"
#include "endograph/errors.h"
#include "endograph/stats.h"

namespace endograph {
namespace {

constexpr std::uint64_t kGraphStream = 0x67726170;    // "grap"
constexpr std::uint64_t kModelStream = 0x6d6f6465;    // "mode"
constexpr std::uint64_t kOuterStream = 0x6f757465;    // "oute"
constexpr std::uint64_t kResampleStream = 0x72657361;  // "resa"
constexpr std::uint64_t kSizeStream = 0x73697a65;     // "size"
constexpr int kMaxAttempts = 10000;

double draw_in(Rng& rng, const Range& range) {
  return range.low == range.high ? range.low : rng.uniform(range.low, range.high);
}

double magnitude(const Range& range) {
  return std::max(std::abs(range.low), std::abs(range.high));
}

void check_range(const Range& range, const char* name) {
  if (!(std::isfinite(range.low) && std::isfinite(range.high) &&
        range.low <= range.high)) {
    throw ValidationError(std::string(name) + " range needs low <= high");
  }
}

// Picks `count` distinct randomization units for analysis unit a, honoring
// the per-r cap on potential edges.
std::vector<int> pick_neighbors(Rng& rng, int a, int count, int n_r,
                                bool unipartite, int cap,
                                std::vector<int>& r_degree) {
  std::vector<int> picked;
  int attempts = 0;
  while (static_cast<int>(picked.size()) < count) {
    if (++attempts > kMaxAttempts) {
      throw ValidationError("cannot draw " + std::to_string(count) +
                            " neighbors for analysis unit " +
                            std::to_string(a) +
                            " under the randomization-unit degree cap " +
                            std::to_string(cap));
    }
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_r)));
    if (unipartite && r == a) continue;
    if (r_degree[r] >= cap) continue;
    if (std::find(picked.begin(), picked.end(), r) != picked.end()) continue;
    picked.push_back(r);
    ++r_degree[r];
  }
  return picked;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  return {mean(xs), sample_variance(xs)};
}

RejectionRate make_rate(int n_reps, int rejections, double alpha) {
  RejectionRate rate;
  rate.n_reps = n_reps;
  rate.rejections = rejections;
  rate.rate = n_reps > 0 ? double(rejections) / n_reps : 0.0;
  rate.null_se = std::sqrt(alpha * (1.0 - alpha) / std::max(n_reps, 1));
  return rate;
}

}  // namespace

ScenarioSpec at_size(const ScenarioSpec& spec, int n_a) {
  ScenarioSpec out = spec;
  out.n_a = n_a;
  if (spec.unipartite) {
    out.n_r = n_a;
  } else {
    const double ratio = double(spec.n_r) / double(spec.n_a);
    out.n_r = std::max(1, static_cast<int>(std::lround(ratio * n_a)));
  }
  return out;
}

ScenarioInstance generate_scenario(const ScenarioSpec& spec) {
  const UnitSets units = spec.unipartite
                             ? UnitSets::same_units(spec.n_a)
                             : UnitSets::bipartite(spec.n_a, spec.n_r);
  units.validate();
  if (spec.unipartite && spec.n_r != spec.n_a) {
    throw ValidationError("unipartite scenarios need n_a = n_r");
  }
  if (spec.anchor_degree < 1 || spec.created_degree < 0 ||
      spec.dropped_degree < 0 || spec.max_r_degree < 1) {
    throw ValidationError(
        "scenario needs anchor_degree >= 1, nonnegative created and dropped "
        "degrees and max_r_degree >= 1");
  }
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw ValidationError("design probability must satisfy 0 < p < 1");
  }
  check_range(spec.alpha, "alpha");
  check_range(spec.beta, "beta");
  check_range(spec.gamma, "gamma");
  if (!spec.unipartite && (spec.gamma.low != 0.0 || spec.gamma.high != 0.0)) {
    throw ValidationError("direct effects gamma require a unipartite scenario");
  }
  if (spec.weights == ExposureWeights::Kind::kExplicit) {
    throw ValidationError(
        "scenario weights must be uniform or degree_normalized");
  }

  Rng graph_rng(derive_seed(spec.seed, kGraphStream, 0));
  GraphBuilder builder(units, EdgeRuleKind::kRDriven);
  std::vector<int> r_degree(static_cast<std::size_t>(spec.n_r),
                            spec.unipartite ? 1 : 0);
  PairList anchor_pairs;
  const int per_unit =
      spec.anchor_degree + spec.created_degree + spec.dropped_degree;
  for (int a = 0; a < spec.n_a; ++a) {
    const std::vector<int> picked =
        pick_neighbors(graph_rng, a, per_unit, spec.n_r, spec.unipartite,
                       spec.max_r_degree, r_degree);
    int i = 0;
    for (; i < spec.anchor_degree; ++i) {
      builder.constant(a, picked[i]);
      builder.pre_edge(a, picked[i]);
      anchor_pairs.push_back({a, picked[i]});
    }
    for (int k = 0; k < spec.created_degree; ++k, ++i) {
      builder.driven(a, picked[i], false, true);
    }
    for (int k = 0; k < spec.dropped_degree; ++k, ++i) {
      builder.driven(a, picked[i], true, false);
      builder.pre_edge(a, picked[i]);
    }
  }
  EndogenousGraph graph = builder.build();

  ExposureWeights w = spec.weights == ExposureWeights::Kind::kDegreeNormalized
                          ? ExposureWeights::degree_normalized(graph)
                          : ExposureWeights::uniform(units);
  // Every unit has |R_a(1)| = anchor + created off the diagonal.
  const double degree = spec.anchor_degree + spec.created_degree;
  const double band = spec.weights == ExposureWeights::Kind::kDegreeNormalized
                          ? 1.0
                          : degree;
  const double m = magnitude(spec.alpha) + magnitude(spec.beta) * band +
                   magnitude(spec.gamma);

  Rng model_rng(derive_seed(spec.seed, kModelStream, 0));
  OutcomeModel model;
  model.alpha.resize(static_cast<std::size_t>(spec.n_a));
  model.beta.resize(static_cast<std::size_t>(spec.n_a));
  for (int a = 0; a < spec.n_a; ++a) {
    model.alpha[a] = draw_in(model_rng, spec.alpha);
    model.beta[a] = draw_in(model_rng, spec.beta);
  }
  if (spec.unipartite) {
    model.gamma.resize(static_cast<std::size_t>(spec.n_a));
    for (auto& g : model.gamma) g = draw_in(model_rng, spec.gamma);
  }
  model.weights = w;
  model.bound_m = m > 0.0 ? std::optional<double>(m) : std::nullopt;
  model.band = WeightBand{band, band};
  model.validate(units);

  EstimatorConfig config = EstimatorConfig::with_uniform_instruments(
      AnchorSubgraph(spec.n_a, std::move(anchor_pairs)), std::move(w), spec.p);
  if (m > 0.0) config.bounds = BoundConstants{m, band, band};
  validate_unbiasedness(graph, config).throw_if_failed();

  const double tte = true_tte(graph, model);
  return ScenarioInstance{std::move(graph), std::move(model),
                          std::move(config), tte, spec.p};
}

std::string_view to_string(EstimatorChoice choice) {
  switch (choice) {
    case EstimatorChoice::kMuHat:
      return "mu_hat";
    case EstimatorChoice::kHorvitzThompson:
      return "horvitz_thompson";
    case EstimatorChoice::kMuTilde:
      return "mu_tilde";
  }
  return "unknown";
}

std::optional<EstimatorChoice> parse_estimator_choice(std::string_view name) {
  if (name == "mu_hat") return EstimatorChoice::kMuHat;
  if (name == "horvitz_thompson" || name == "ht") {
    return EstimatorChoice::kHorvitzThompson;
  }
  if (name == "mu_tilde") return EstimatorChoice::kMuTilde;
  return std::nullopt;
}

ReplicationSummary replicate(const ScenarioInstance& instance, int n_reps,
                             EstimatorChoice choice, std::uint64_t seed) {
  if (n_reps < 2) throw ValidationError("replicate needs n_reps >= 2");
  const EndogenousGraph& graph = instance.graph;
  std::optional<AnchorEstimator> estimator;
  if (choice != EstimatorChoice::kHorvitzThompson) {
    if (!instance.config) {
      throw ValidationError("scenario has no estimator configuration");
    }
    estimator.emplace(graph, *instance.config);
  }

  ReplicationSummary summary;
  summary.n_reps = n_reps;
  summary.truth = instance.tte;
  if (choice == EstimatorChoice::kMuTilde) {
    summary.truth = estimator->mu_star(instance.model.beta);
  }
  if (estimator) {
    summary.d_a = estimator->diagnostics().d_a;
    summary.d_r = estimator->diagnostics().d_r;
  } else {
    const auto neighbors = graph.full_treatment_neighbors();
    std::vector<int> r_degree(static_cast<std::size_t>(graph.n_r()), 0);
    for (const auto& ra : neighbors) {
      summary.d_a = std::max(summary.d_a, static_cast<int>(ra.size()));
      for (int r : ra) ++r_degree[r];
    }
    for (int d : r_degree) summary.d_r = std::max(summary.d_r, d);
  }
  summary.dependency_degree =
      static_cast<long long>(summary.d_a) * summary.d_r;

  const BernoulliDesign design(instance.p, graph.n_r(), seed);
  summary.estimates.resize(static_cast<std::size_t>(n_reps));
  for (int i = 0; i < n_reps; ++i) {
    const TreatmentVector t = design.draw(static_cast<std::uint64_t>(i));
    const RealizedGraph realized = realize_graph(graph, t);
    const UnitValues y =
        outcome(instance.model, realized, t, graph.unipartite());
    double value = 0.0;
    switch (choice) {
      case EstimatorChoice::kMuHat:
        value = estimator->mu_hat(realized, y, t);
        break;
      case EstimatorChoice::kHorvitzThompson:
        value = horvitz_thompson(realized, t, y, instance.p);
        break;
      case EstimatorChoice::kMuTilde:
        value = estimator->mu_tilde(y, t);
        break;
    }
    summary.estimates[i] = value;
  }

  const Moments mo = moments(summary.estimates);
  summary.mean = mo.mean;
  summary.variance = mo.variance;
  summary.bias_vs_truth = mo.mean - summary.truth;
  if (mo.variance > 0.0) {
    const double sd = std::sqrt(mo.variance);
    summary.standardized.reserve(summary.estimates.size());
    for (double v : summary.estimates) {
      summary.standardized.push_back((v - summary.truth) / sd);
    }
    summary.ks_distance = ks_distance_to_standard_normal(summary.standardized);
  }
  return summary;
}

ScalingReport variance_scaling_study(const ScenarioSpec& family,
                                     const std::vector<int>& sizes, int n_reps,
                                     std::uint64_t seed) {
  if (sizes.size() < 3) {
    throw ValidationError("variance scaling needs at least three sizes");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw ValidationError("variance scaling sizes must increase");
    }
  }
  ScalingReport report;
  std::vector<double> log_n;
  std::vector<double> log_var;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ScenarioSpec spec = at_size(family, sizes[i]);
    spec.seed = derive_seed(family.seed, kSizeStream, i);
    const ScenarioInstance instance = generate_scenario(spec);
    const ReplicationSummary summary =
        replicate(instance, n_reps, EstimatorChoice::kMuHat,
                  derive_seed(seed, kSizeStream, i));
    if (!(summary.variance > 0.0)) {
      throw ValidationError("replications at n_a = " +
                            std::to_string(sizes[i]) + " have zero variance");
    }
    ScalingPoint point;
    point.n_a = spec.n_a;
    point.n_r = spec.n_r;
    point.variance = summary.variance;
    point.mean = summary.mean;
    point.truth = summary.truth;
    point.d_a = summary.d_a;
    point.d_r = summary.d_r;
    const double p = spec.p;
    if (const auto& b = instance.config->bounds) {
      const double d_a = point.d_a;
      point.envelope = b->m * b->m * b->w_high * b->w_high * d_a * d_a * d_a *
                       point.d_r /
                       (std::pow(p, 4) * (1 - p) * (1 - p) * b->w_low *
                        b->w_low * point.n_a);
      report.max_envelope_ratio =
          std::max(report.max_envelope_ratio, point.variance / point.envelope);
    }
    log_n.push_back(std::log(double(point.n_a)));
    log_var.push_back(std::log(point.variance));
    report.points.push_back(point);
  }
  const LineFit fit = least_squares_line(log_n, log_var);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  return report;
}

NormalityReport normality_diagnostic(const ScenarioInstance& instance,
                                     int n_reps, std::uint64_t seed) {
  if (n_reps < 1000) {
    throw ValidationError("normality diagnostic needs n_reps >= 1000");
  }
  const ReplicationSummary summary =
      replicate(instance, n_reps, EstimatorChoice::kMuHat, seed);
  if (!summary.ks_distance) {
    throw ValidationError(
        "replications have zero variance; nothing to standardize");
  }
  NormalityReport report;
  report.n_reps = n_reps;
  report.ks_distance = *summary.ks_distance;
  report.mean = summary.mean;
  report.sd = std::sqrt(summary.variance);
  report.truth = summary.truth;
  return report;
}

// ---------------------------------------------------------------------------
// Rejection rates

RejectionRate sharp_null_rejection_rate(const ScenarioInstance& instance,
                                        int n_reps,
                                        const ResamplingOptions& options,
                                        std::uint64_t seed) {
  if (!instance.config) {
    throw ValidationError("scenario has no estimator configuration");
  }
  const AnchorEstimator estimator(instance.graph, *instance.config);
  const BernoulliDesign design(instance.p, instance.graph.n_r(),
                               derive_seed(seed, kOuterStream, 0));
  int rejections = 0;
  for (int i = 0; i < n_reps; ++i) {
    const TreatmentVector t = design.draw(static_cast<std::uint64_t>(i));
    const RealizedGraph realized = realize_graph(instance.graph, t);
    const UnitValues y =
        outcome(instance.model, realized, t, instance.graph.unipartite());
    ResamplingOptions inner = options;
    inner.seed = derive_seed(seed, kResampleStream, i);
    if (sharp_null_test(y, t, estimator, inner).reject) ++rejections;
  }
  return make_rate(n_reps, rejections, options.alpha);
}

std::string_view to_string(EdgeDgp dgp) {
  switch (dgp) {
    case EdgeDgp::kExogenous:
      return "exogenous";
    case EdgeDgp::kRDriven:
      return "r_driven";
    case EdgeDgp::kPartnerDriven:
      return "partner_driven";
  }
  return "unknown";
}

std::optional<EdgeDgp> parse_edge_dgp(std::string_view name) {
  if (name == "exogenous") return EdgeDgp::kExogenous;
  if (name == "r_driven") return EdgeDgp::kRDriven;
  if (name == "partner_driven") return EdgeDgp::kPartnerDriven;
  return std::nullopt;
}

EndogenousGraph generate_edge_dgp(const EdgeDgpSpec& spec) {
  const UnitSets units = UnitSets::bipartite(spec.n_a, spec.n_r);
  units.validate();
  if (spec.base_degree < 0 || spec.created_degree < 0) {
    throw ValidationError("edge DGP degrees must be nonnegative");
  }
  if (!(spec.churn >= 0.0 && spec.churn <= 1.0)) {
    throw ValidationError("churn must lie in [0, 1]");
  }
  const int per_unit = spec.base_degree + spec.created_degree + 1;
  if (per_unit > spec.n_r) {
    throw ValidationError("edge DGP needs more randomization units");
  }
  if (spec.kind == EdgeDgp::kPartnerDriven && spec.n_r < 2) {
    throw ValidationError("partner-driven edges need n_r >= 2");
  }
  const EdgeRuleKind kind = spec.kind == EdgeDgp::kExogenous
                                ? EdgeRuleKind::kExogenous
                            : spec.kind == EdgeDgp::kRDriven
                                ? EdgeRuleKind::kRDriven
                                : EdgeRuleKind::kSetDriven;
  Rng rng(derive_seed(spec.seed, kGraphStream, 0));
  GraphBuilder builder(units, kind);
  std::vector<int> unused(static_cast<std::size_t>(spec.n_r), 0);
  for (int a = 0; a < spec.n_a; ++a) {
    const std::vector<int> picked = pick_neighbors(
        rng, a, per_unit, spec.n_r, false, spec.n_a + 1, unused);
    int i = 0;
    for (; i < spec.base_degree; ++i) {
      builder.pre_edge(a, picked[i]);
      const bool kept = !(spec.churn > 0.0 && rng.bernoulli(spec.churn));
      if (kept) builder.constant(a, picked[i]);
    }
    for (int k = 0; k < spec.created_degree; ++k, ++i) {
      const int r = picked[i];
      switch (spec.kind) {
        case EdgeDgp::kExogenous:
          builder.constant(a, r);
          break;
        case EdgeDgp::kRDriven:
          builder.driven(a, r, false, true);
          break;
        case EdgeDgp::kPartnerDriven: {
          int partner = r;
          while (partner == r) {
            partner = static_cast<int>(
                rng.below(static_cast<std::uint64_t>(spec.n_r)));
          }
          builder.set(a, r, EdgeFunction({partner}, {0, 1}));
          break;
        }
      }
    }
    if (spec.churn > 0.0 && rng.bernoulli(spec.churn)) {
      builder.constant(a, picked[i]);
    }
  }
  return builder.build();
}

RejectionRate exogeneity_rejection_rate(const EdgeDgpSpec& spec, int n_reps,
                                        const ResamplingOptions& options,
                                        std::uint64_t seed) {
  const EndogenousGraph graph = generate_edge_dgp(spec);
  const BernoulliDesign design(spec.p, spec.n_r,
                               derive_seed(seed, kOuterStream, 0));
  int rejections = 0;
  for (int i = 0; i < n_reps; ++i) {
    const TreatmentVector t = design.draw(static_cast<std::uint64_t>(i));
    ResamplingOptions inner = options;
    inner.seed = derive_seed(seed, kResampleStream, i);
    if (exogeneity_test(realize_graph(graph, t), t, spec.p, inner).reject) {
      ++rejections;
    }
  }
  return make_rate(n_reps, rejections, options.alpha);
}

RejectionRate ttest_rejection_rate(const EdgeDgpSpec& spec, int n_reps,
                                   const TTestOptions& options,
                                   std::uint64_t seed) {
  const EndogenousGraph graph = generate_edge_dgp(spec);
  const BernoulliDesign design(spec.p, spec.n_r,
                               derive_seed(seed, kOuterStream, 0));
  int rejections = 0;
  for (int i = 0; i < n_reps; ++i) {
    const TreatmentVector t = design.draw(static_cast<std::uint64_t>(i));
    if (r_driven_ttest(realize_graph(graph, t), graph.pre_edges(), t, options)
            .reject) {
      ++rejections;
    }
  }
  return make_rate(n_reps, rejections, options.alpha);
}

}  // namespace endograph
