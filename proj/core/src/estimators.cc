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

#include "endograph/estimators.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "endograph/errors.h"
#include "endograph/stats.h"

namespace endograph {
namespace {

std::string pair_name(int a, int r) {
  return "(" + std::to_string(a) + ", " + std::to_string(r) + ")";
}

std::string unit_list(const std::vector<int>& units) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(units.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(units[i]);
  }
  if (units.size() > shown) out += ", ...";
  return out;
}

void check_lengths(const UnitSets& units, std::span<const double> y,
                   const TreatmentVector& t) {
  if (static_cast<int>(y.size()) != units.n_a) {
    throw ValidationError("outcome vector has " + std::to_string(y.size()) +
                          " entries, expected n_a = " +
                          std::to_string(units.n_a));
  }
  if (static_cast<int>(t.size()) != units.n_r) {
    throw ValidationError("treatment vector has " + std::to_string(t.size()) +
                          " entries, expected n_r = " +
                          std::to_string(units.n_r));
  }
}

void check_dimensions(const EstimatorConfig& config, const UnitSets& units) {
  units.validate();
  if (config.anchor.n_a() != units.n_a) {
    throw ValidationError("anchor subgraph covers " +
                          std::to_string(config.anchor.n_a()) +
                          " analysis units, graph has " +
                          std::to_string(units.n_a));
  }
  for (const auto& [a, r] : config.anchor.pairs()) {
    if (r < 0 || r >= units.n_r) {
      throw ValidationError("anchor pair " + pair_name(a, r) +
                            " is out of range");
    }
  }
  if (config.u.n_a() != units.n_a) {
    throw ValidationError("instrument weights cover " +
                          std::to_string(config.u.n_a()) +
                          " analysis units, graph has " +
                          std::to_string(units.n_a));
  }
  if (!(config.w.units() == units)) {
    throw ValidationError("exposure weights were built for other unit sets");
  }
}

double raw_covariance(const EstimatorConfig& config, int a) {
  CompensatedSum s;
  for (const auto& [r, u] : config.u.row(a)) s.add(config.w(a, r) * u);
  return config.p * (1.0 - config.p) * s.value();
}

}  // namespace

// ---------------------------------------------------------------------------
// Horvitz-Thompson

double horvitz_thompson(const RealizedGraph& realized,
                        const TreatmentVector& t, std::span<const double> y,
                        double p, HtScale scale) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("design probability must satisfy 0 < p < 1");
  }
  check_lengths(UnitSets::bipartite(realized.n_a(), realized.n_r()), y, t);
  CompensatedSum total;
  for (int a = 0; a < realized.n_a(); ++a) {
    const auto ra = realized.neighbors(a);
    if (ra.empty()) continue;
    bool all_treated = true;
    bool all_control = true;
    for (int r : ra) {
      if (t[static_cast<std::size_t>(r)]) {
        all_control = false;
      } else {
        all_treated = false;
      }
    }
    const auto k = static_cast<double>(ra.size());
    double bracket = 0.0;
    if (all_treated) bracket += 1.0 / std::pow(p, k);
    if (all_control) bracket -= 1.0 / std::pow(1.0 - p, k);
    total.add(y[a] * bracket);
  }
  return scale == HtScale::kMean ? total.value() / realized.n_a()
                                 : total.value();
}

// ---------------------------------------------------------------------------
// InstrumentWeights

InstrumentWeights InstrumentWeights::uniform(const AnchorSubgraph& anchor,
                                             bool zero_diagonal) {
  InstrumentWeights u;
  u.kind_ = Kind::kUniform;
  u.rows_.resize(static_cast<std::size_t>(anchor.n_a()));
  for (int a = 0; a < anchor.n_a(); ++a) {
    for (int r : anchor.anchors_of(a)) {
      if (zero_diagonal && r == a) continue;
      u.rows_[a].emplace_back(r, 1.0);
    }
  }
  return u;
}

InstrumentWeights InstrumentWeights::explicit_weights(
    int n_a, std::vector<WeightEntry> entries) {
  if (n_a < 1) throw ValidationError("instrument weights need n_a >= 1");
  std::sort(entries.begin(), entries.end(),
            [](const WeightEntry& x, const WeightEntry& y) {
              return std::tie(x.a, x.r) < std::tie(y.a, y.r);
            });
  InstrumentWeights u;
  u.kind_ = Kind::kExplicit;
  u.rows_.resize(static_cast<std::size_t>(n_a));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.a < 0 || e.a >= n_a || e.r < 0) {
      throw ValidationError("instrument weight " + pair_name(e.a, e.r) +
                            " out of range");
    }
    if (i > 0 && entries[i - 1].a == e.a && entries[i - 1].r == e.r) {
      throw ValidationError("duplicate instrument weight " +
                            pair_name(e.a, e.r));
    }
    if (!std::isfinite(e.w)) {
      throw ValidationError("instrument weights must be finite");
    }
    if (e.w != 0.0) u.rows_[e.a].emplace_back(e.r, e.w);
  }
  return u;
}

double InstrumentWeights::operator()(int a, int r) const {
  const auto& row = rows_[a];
  auto it = std::lower_bound(
      row.begin(), row.end(), r,
      [](const std::pair<int, double>& e, int value) { return e.first < value; });
  return it != row.end() && it->first == r ? it->second : 0.0;
}

std::vector<WeightEntry> InstrumentWeights::entries() const {
  std::vector<WeightEntry> out;
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    for (const auto& [r, u] : rows_[a]) {
      out.push_back({static_cast<int>(a), r, u});
    }
  }
  return out;
}

EstimatorConfig EstimatorConfig::with_uniform_instruments(
    AnchorSubgraph anchor, ExposureWeights w, double p) {
  EstimatorConfig config;
  config.u = InstrumentWeights::uniform(anchor, w.units().unipartite);
  config.anchor = std::move(anchor);
  config.w = std::move(w);
  config.p = p;
  return config;
}

// ---------------------------------------------------------------------------
// Validation

void AssumptionReport::throw_if_failed() const {
  if (violations.empty()) return;
  const auto& v = violations.front();
  throw AssumptionError(v.assumption, v.detail, v.units);
}

AssumptionReport validate_config(const EstimatorConfig& config,
                                 const UnitSets& units) {
  check_dimensions(config, units);
  AssumptionReport report;
  if (!(config.p > 0.0 && config.p < 1.0)) {
    report.violations.push_back(
        {"b", "design probability must satisfy 0 < p < 1, got " +
                  std::to_string(config.p),
         {}});
  }

  std::vector<int> diagonal;
  std::vector<int> support;
  std::string support_example;
  std::vector<int> zero_weight;
  std::string zero_weight_example;
  std::vector<int> empty;
  std::vector<int> irrelevant;
  for (int a = 0; a < units.n_a; ++a) {
    const auto row = config.u.row(a);
    for (const auto& [r, u] : row) {
      if (r >= units.n_r) {
        throw ValidationError("instrument weight " + pair_name(a, r) +
                              " out of range");
      }
      if (units.unipartite && r == a) {
        diagonal.push_back(a);
      } else if (!config.anchor.contains(a, r)) {
        if (support.empty()) support_example = pair_name(a, r);
        support.push_back(a);
      }
    }
    for (int r : config.anchor.anchors_of(a)) {
      if (units.unipartite && r == a) continue;
      if (config.w(a, r) == 0.0) {
        if (zero_weight.empty()) zero_weight_example = pair_name(a, r);
        zero_weight.push_back(a);
        break;
      }
    }
    if (row.empty()) {
      empty.push_back(a);
    } else if (config.p > 0.0 && config.p < 1.0 &&
               raw_covariance(config, a) == 0.0) {
      irrelevant.push_back(a);
    }
  }
  auto dedupe = [](std::vector<int>& v) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe(diagonal);
  dedupe(support);
  if (!diagonal.empty()) {
    report.violations.push_back(
        {"diagonal",
         "unipartite graphs need u_aa = 0; violated for units " +
             unit_list(diagonal),
         diagonal});
  }
  if (!support.empty()) {
    report.violations.push_back(
        {"c",
         "instrument weights must be supported on the anchor subgraph; " +
             support_example + " is not an anchor pair",
         support});
  }
  if (!zero_weight.empty()) {
    report.violations.push_back(
        {"e",
         "exposure weights must be nonzero on the anchor subgraph; w is zero "
         "at " + zero_weight_example,
         zero_weight});
  }
  if (!empty.empty()) {
    report.violations.push_back(
        {"f",
         "every analysis unit needs a nonzero instrument weight; none for "
         "units " + unit_list(empty),
         empty});
  }
  if (!irrelevant.empty()) {
    report.violations.push_back(
        {"relevance",
         "instrument covariance is zero for units " + unit_list(irrelevant),
         irrelevant});
  }
  return report;
}

AssumptionReport validate_unbiasedness(const EndogenousGraph& graph,
                                       const EstimatorConfig& config,
                                       const ValidationOptions& options) {
  check_dimensions(config, graph.units());
  AssumptionReport report;

  const DependencyReport deps = classify_dependency(graph);
  std::vector<int> not_driven;
  std::string example;
  for (const auto& pd : deps.pairs) {
    if (pd.kind == EdgeRuleKind::kExogenous ||
        pd.kind == EdgeRuleKind::kRDriven) {
      continue;
    }
    if (not_driven.empty()) {
      example = pair_name(pd.pair.a, pd.pair.r);
    }
    if (not_driven.empty() || not_driven.back() != pd.pair.a) {
      not_driven.push_back(pd.pair.a);
    }
  }
  if (!not_driven.empty()) {
    report.violations.push_back(
        {"a",
         "edges must be r-driven; edge " + example +
             " depends on other randomization units",
         not_driven});
  } else {
    AnchorCheckOptions check;
    check.full_treatment_only = options.full_treatment_anchor_only;
    const VerificationReport anchored =
        verify_anchor(graph, config.anchor, check);
    if (!anchored.pass) {
      std::vector<int> units;
      for (const auto& v : anchored.violations) {
        if (units.empty() || units.back() != v.pair.a) units.push_back(v.pair.a);
      }
      const auto& first = anchored.violations.front();
      report.violations.push_back(
          {"anchor",
           "anchor pair " + pair_name(first.pair.a, first.pair.r) +
               " is absent under assignment " + first.witness.to_string(),
           units});
    }
  }

  AssumptionReport rest = validate_config(config, graph.units());
  for (auto& v : rest.violations) report.violations.push_back(std::move(v));
  return report;
}

// ---------------------------------------------------------------------------
// Instruments

InstrumentExposure instrument_exposure(const TreatmentVector& t,
                                       const InstrumentWeights& u, double p) {
  InstrumentExposure out;
  out.z.assign(static_cast<std::size_t>(u.n_a()), 0.0);
  out.expected_z.assign(static_cast<std::size_t>(u.n_a()), 0.0);
  for (int a = 0; a < u.n_a(); ++a) {
    CompensatedSum z;
    CompensatedSum total;
    for (const auto& [r, weight] : u.row(a)) {
      if (r >= static_cast<int>(t.size())) {
        throw ValidationError("instrument weight " + pair_name(a, r) +
                              " exceeds the treatment vector");
      }
      if (t[static_cast<std::size_t>(r)]) z.add(weight);
      total.add(weight);
    }
    out.z[a] = z.value();
    out.expected_z[a] = p * total.value();
  }
  return out;
}

InstrumentModel::InstrumentModel(const EstimatorConfig& config,
                                 const UnitSets& units)
    : p_(config.p) {
  validate_config(config, units).throw_if_failed();
  const auto n = static_cast<std::size_t>(units.n_a);
  rows_.resize(n);
  covariance_.resize(n);
  expected_z_.resize(n);
  anchor_weight_.resize(n);
  for (int a = 0; a < units.n_a; ++a) {
    CompensatedSum total;
    for (const auto& [r, u] : config.u.row(a)) total.add(u);
    // Rescaling u leaves beta_hat unchanged; a vanishing sum (mixed signs)
    // keeps the raw weights.
    const double scale = total.value() != 0.0 ? 1.0 / total.value() : 1.0;
    CompensatedSum cov;
    CompensatedSum ez;
    for (const auto& [r, u] : config.u.row(a)) {
      const double v = u * scale;
      rows_[a].emplace_back(r, v);
      cov.add(config.w(a, r) * v);
      ez.add(v);
    }
    covariance_[a] = p_ * (1.0 - p_) * cov.value();
    expected_z_[a] = p_ * ez.value();
    CompensatedSum anchored;
    for (int r : config.anchor.anchors_of(a)) anchored.add(config.w(a, r));
    anchor_weight_[a] = anchored.value();
  }
}

double InstrumentModel::z(int a, const TreatmentVector& t) const {
  double z = 0.0;
  for (const auto& [r, u] : rows_[a]) {
    if (t[static_cast<std::size_t>(r)]) z += u;
  }
  return z;
}

UnitValues instrument_covariance(const EstimatorConfig& config,
                                 const UnitSets& units) {
  validate_config(config, units).throw_if_failed();
  UnitValues out(static_cast<std::size_t>(units.n_a));
  for (int a = 0; a < units.n_a; ++a) out[a] = raw_covariance(config, a);
  return out;
}

// ---------------------------------------------------------------------------
// AnchorEstimator

namespace {

EstimatorConfig validated(const EndogenousGraph& graph, EstimatorConfig config,
                          const ValidationOptions& options) {
  validate_unbiasedness(graph, config, options).throw_if_failed();
  return config;
}

}  // namespace

AnchorEstimator::AnchorEstimator(const EndogenousGraph& graph,
                                 EstimatorConfig config,
                                 const ValidationOptions& options)
    : units_(graph.units()),
      config_(validated(graph, std::move(config), options)),
      instruments_(config_, units_) {
  const auto neighbors = graph.full_treatment_neighbors();
  std::vector<int> r_degree(static_cast<std::size_t>(units_.n_r), 0);
  for (int a = 0; a < units_.n_a; ++a) {
    diagnostics_.d_a =
        std::max(diagnostics_.d_a, static_cast<int>(neighbors[a].size()));
    for (int r : neighbors[a]) ++r_degree[r];
  }
  for (int d : r_degree) diagnostics_.d_r = std::max(diagnostics_.d_r, d);
  if (config_.bounds) {
    const auto& b = *config_.bounds;
    if (!(b.m > 0.0 && b.w_low > 0.0 && b.w_low <= b.w_high)) {
      throw ValidationError("bound constants need M > 0 and 0 < W_l <= W_h");
    }
    const double p = config_.p;
    for (int a = 0; a < units_.n_a; ++a) {
      auto size = static_cast<double>(neighbors[a].size());
      if (units_.unipartite) size -= 1.0;
      diagnostics_.unit_bounds.push_back(b.m * b.w_high * size /
                                         (p * p * (1.0 - p) * b.w_low));
    }
  }
}

void AnchorEstimator::check_inputs(std::span<const double> y,
                                   const TreatmentVector& t) const {
  check_lengths(units_, y, t);
}

UnitValues AnchorEstimator::beta_hat(std::span<const double> y,
                                     const TreatmentVector& t) const {
  check_inputs(y, t);
  UnitValues out(y.size());
  const auto& cov = instruments_.covariance();
  const auto& ez = instruments_.expected_z();
  for (int a = 0; a < units_.n_a; ++a) {
    out[a] = y[a] * (instruments_.z(a, t) - ez[a]) / cov[a];
  }
  return out;
}

UnitValues AnchorEstimator::w_hat(const RealizedGraph& realized,
                                  const TreatmentVector& t) const {
  if (realized.n_a() != units_.n_a || realized.n_r() != units_.n_r ||
      static_cast<int>(t.size()) != units_.n_r) {
    throw ValidationError("realized graph does not match estimator units");
  }
  const double p = config_.p;
  UnitValues out(static_cast<std::size_t>(units_.n_a));
  for (int a = 0; a < units_.n_a; ++a) {
    // Terms vanish unless r is a realized neighbor or an anchor.
    std::vector<int> rs(realized.neighbors(a).begin(),
                        realized.neighbors(a).end());
    const auto anchors = config_.anchor.anchors_of(a);
    rs.insert(rs.end(), anchors.begin(), anchors.end());
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    CompensatedSum s;
    for (int r : rs) {
      const double w = config_.w(a, r);
      const double e = realized.edge(a, r) ? 1.0 : 0.0;
      const double c = config_.c(a, r);
      const double tr = t[static_cast<std::size_t>(r)] ? 1.0 : 0.0;
      s.add(tr * w * (e - c) / p + w * c);
    }
    out[a] = s.value();
  }
  return out;
}

UnitValues AnchorEstimator::w_hat_decomposed(const RealizedGraph& realized,
                                             const TreatmentVector& t) const {
  if (realized.n_a() != units_.n_a || realized.n_r() != units_.n_r ||
      static_cast<int>(t.size()) != units_.n_r) {
    throw ValidationError("realized graph does not match estimator units");
  }
  UnitValues out(instruments_.anchor_weight());
  for (int a = 0; a < units_.n_a; ++a) {
    CompensatedSum s;
    s.add(out[a]);
    for (int r : realized.neighbors(a)) {
      if (t[static_cast<std::size_t>(r)] && !config_.anchor.contains(a, r)) {
        s.add(config_.w(a, r) / config_.p);
      }
    }
    out[a] = s.value();
  }
  return out;
}

UnitValues AnchorEstimator::gamma_hat(std::span<const double> y,
                                      const TreatmentVector& t) const {
  return endograph::gamma_hat(units_, y, t, config_.p);
}

EstimateResult AnchorEstimator::estimate(const RealizedGraph& realized,
                                         std::span<const double> y,
                                         const TreatmentVector& t) const {
  const UnitValues b = beta_hat(y, t);
  const UnitValues w = w_hat(realized, t);
  UnitValues g;
  if (units_.unipartite) g = gamma_hat(y, t);
  EstimateResult result;
  result.per_unit.resize(b.size());
  CompensatedSum total;
  for (std::size_t a = 0; a < b.size(); ++a) {
    auto& unit = result.per_unit[a];
    unit.beta_hat = b[a];
    unit.w_hat = w[a];
    total.add(b[a] * w[a]);
    if (units_.unipartite) {
      unit.gamma_hat = g[a];
      total.add(g[a]);
    }
  }
  result.mu_hat = total.value() / units_.n_a;
  result.instrument_cov = instruments_.covariance();
  result.diagnostics = diagnostics_;
  return result;
}

double AnchorEstimator::mu_hat(const RealizedGraph& realized,
                               std::span<const double> y,
                               const TreatmentVector& t) const {
  return estimate(realized, y, t).mu_hat;
}

double AnchorEstimator::mu_tilde(std::span<const double> y,
                                 const TreatmentVector& t) const {
  const UnitValues b = beta_hat(y, t);
  const auto& anchored = instruments_.anchor_weight();
  CompensatedSum total;
  for (std::size_t a = 0; a < b.size(); ++a) total.add(b[a] * anchored[a]);
  return total.value() / units_.n_a;
}

double AnchorEstimator::mu_star(std::span<const double> beta) const {
  if (static_cast<int>(beta.size()) != units_.n_a) {
    throw ValidationError("beta needs one entry per analysis unit");
  }
  const auto& anchored = instruments_.anchor_weight();
  CompensatedSum total;
  for (std::size_t a = 0; a < beta.size(); ++a) {
    total.add(beta[a] * anchored[a]);
  }
  return total.value() / units_.n_a;
}

// ---------------------------------------------------------------------------
// Free functions

UnitValues beta_hat(const EndogenousGraph& graph, std::span<const double> y,
                    const TreatmentVector& t, const EstimatorConfig& config) {
  return AnchorEstimator(graph, config).beta_hat(y, t);
}

UnitValues w_hat(const EndogenousGraph& graph, const RealizedGraph& realized,
                 const TreatmentVector& t, const EstimatorConfig& config) {
  return AnchorEstimator(graph, config).w_hat(realized, t);
}

EstimateResult mu_hat(const EndogenousGraph& graph, std::span<const double> y,
                      const TreatmentVector& t, const EstimatorConfig& config) {
  if (graph.unipartite()) {
    throw ValidationError(
        "mu_hat expects a bipartite graph; use mu_hat_uni for unipartite "
        "graphs");
  }
  const AnchorEstimator estimator(graph, config);
  return estimator.estimate(realize_graph(graph, t), y, t);
}

EstimateResult mu_hat_uni(const EndogenousGraph& graph,
                          std::span<const double> y, const TreatmentVector& t,
                          const EstimatorConfig& config) {
  if (!graph.unipartite()) {
    throw ValidationError("mu_hat_uni expects a unipartite graph");
  }
  const AnchorEstimator estimator(graph, config);
  return estimator.estimate(realize_graph(graph, t), y, t);
}

double mu_tilde(const EndogenousGraph& graph, std::span<const double> y,
                const TreatmentVector& t, const EstimatorConfig& config) {
  return AnchorEstimator(graph, config).mu_tilde(y, t);
}

UnitValues gamma_hat(const UnitSets& units, std::span<const double> y,
                     const TreatmentVector& t, double p) {
  if (!units.unipartite) {
    throw ValidationError("direct-effect estimates need a unipartite graph");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("design probability must satisfy 0 < p < 1");
  }
  check_lengths(units, y, t);
  UnitValues out(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) {
    out[a] = t[a] ? y[a] / p : -y[a] / (1.0 - p);
  }
  return out;
}

}  // namespace endograph
