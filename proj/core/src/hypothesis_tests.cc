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

#include "endograph/hypothesis_tests.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "endograph/errors.h"
#include "endograph/stats.h"

namespace endograph {
namespace {

constexpr std::uint64_t kExogeneityStream = 0x65786f67;  // "exog"
constexpr std::uint64_t kSharpNullStream = 0x73686e6c;   // "shnl"

double plus_one_p_value(int count, int n) {
  return (1.0 + count) / (1.0 + n);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must satisfy 0 < alpha < 1");
  }
}

// Per-unit neighbor lists with cached log binomial coefficients.
class BinomialLikelihood {
 public:
  BinomialLikelihood(const RealizedGraph& realized, double p)
      : realized_(realized),
        log_p_(std::log(p)),
        log_q_(std::log1p(-p)) {
    std::size_t max_degree = 0;
    for (int a = 0; a < realized.n_a(); ++a) {
      max_degree = std::max(max_degree, realized.neighbors(a).size());
    }
    log_factorial_.resize(max_degree + 1, 0.0);
    for (std::size_t k = 1; k <= max_degree; ++k) {
      log_factorial_[k] = log_factorial_[k - 1] + std::log(double(k));
    }
  }

  template <typename Treated>
  double operator()(Treated&& treated) const {
    CompensatedSum w;
    for (int a = 0; a < realized_.n_a(); ++a) {
      const auto ra = realized_.neighbors(a);
      if (ra.empty()) continue;
      std::size_t k = 0;
      for (int r : ra) k += treated(r) ? 1 : 0;
      const std::size_t n = ra.size();
      w.add(log_factorial_[n] - log_factorial_[k] - log_factorial_[n - k] +
            double(k) * log_p_ + double(n - k) * log_q_);
    }
    return w.value();
  }

 private:
  const RealizedGraph& realized_;
  double log_p_;
  double log_q_;
  std::vector<double> log_factorial_;
};

}  // namespace

std::string_view to_string(Tail tail) {
  switch (tail) {
    case Tail::kTwoSided:
      return "two_sided";
    case Tail::kUpper:
      return "upper";
    case Tail::kLower:
      return "lower";
  }
  return "unknown";
}

std::optional<Tail> parse_tail(std::string_view name) {
  if (name == "two_sided") return Tail::kTwoSided;
  if (name == "upper") return Tail::kUpper;
  if (name == "lower") return Tail::kLower;
  return std::nullopt;
}

double binomial_log_likelihood(const RealizedGraph& realized,
                               const TreatmentVector& t, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("design probability must satisfy 0 < p < 1");
  }
  if (static_cast<int>(t.size()) != realized.n_r()) {
    throw ValidationError("treatment vector length does not match graph");
  }
  return BinomialLikelihood(realized, p)(
      [&](int r) { return t[static_cast<std::size_t>(r)]; });
}

TestResult exogeneity_test(const RealizedGraph& realized,
                           const TreatmentVector& t, double p,
                           const ResamplingOptions& options) {
  if (options.n_resamples < 100) {
    throw ValidationError(
        "exogeneity test needs at least 100 resamples, got " +
        std::to_string(options.n_resamples));
  }
  check_alpha(options.alpha);
  TestResult result;
  result.statistic = binomial_log_likelihood(realized, t, p);
  result.n_resamples = options.n_resamples;
  result.alpha = options.alpha;
  result.tail = options.tail;

  const BinomialLikelihood likelihood(realized, p);
  std::vector<double> draws(static_cast<std::size_t>(options.n_resamples));
  std::vector<std::uint8_t> star(static_cast<std::size_t>(realized.n_r()));
  for (int i = 0; i < options.n_resamples; ++i) {
    Rng rng(derive_seed(options.seed, kExogeneityStream,
                        static_cast<std::uint64_t>(i)));
    for (auto& bit : star) bit = rng.bernoulli(p) ? 1 : 0;
    draws[i] = likelihood([&](int r) { return star[r] != 0; });
  }

  int upper = 0;
  int lower = 0;
  for (double w : draws) {
    if (w >= result.statistic) ++upper;
    if (w <= result.statistic) ++lower;
  }
  const double p_upper = plus_one_p_value(upper, options.n_resamples);
  const double p_lower = plus_one_p_value(lower, options.n_resamples);
  switch (options.tail) {
    case Tail::kUpper:
      result.p_value = p_upper;
      result.critical_value = lower_quantile(draws, 1.0 - options.alpha);
      break;
    case Tail::kLower:
      result.p_value = p_lower;
      result.critical_value = -lower_quantile(
          [&] {
            std::vector<double> negated(draws.size());
            std::transform(draws.begin(), draws.end(), negated.begin(),
                           [](double w) { return -w; });
            return negated;
          }(),
          1.0 - options.alpha);
      break;
    case Tail::kTwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(p_upper, p_lower));
      result.critical_value = lower_quantile(draws, 1.0 - options.alpha / 2);
      break;
  }
  result.reject = result.p_value <= options.alpha;
  return result;
}

std::vector<double> net_edges(const RealizedGraph& realized,
                              const PairList& pre_edges) {
  std::vector<double> net(static_cast<std::size_t>(realized.n_r()), 0.0);
  for (int a = 0; a < realized.n_a(); ++a) {
    for (int r : realized.neighbors(a)) net[r] += 1.0;
  }
  for (const auto& [a, r] : normalize_pairs(pre_edges)) {
    if (a < 0 || a >= realized.n_a() || r < 0 || r >= realized.n_r()) {
      throw ValidationError("pre-treatment edge out of range");
    }
    net[r] -= 1.0;
  }
  return net;
}

TestResult r_driven_ttest(const RealizedGraph& realized,
                          const PairList& pre_edges, const TreatmentVector& t,
                          const TTestOptions& options) {
  check_alpha(options.alpha);
  if (static_cast<int>(t.size()) != realized.n_r()) {
    throw ValidationError("treatment vector length does not match graph");
  }
  const std::vector<double> net = net_edges(realized, pre_edges);
  std::vector<double> treated;
  std::vector<double> control;
  for (std::size_t r = 0; r < net.size(); ++r) {
    (t[r] ? treated : control).push_back(net[r]);
  }
  if (treated.size() < 2 || control.size() < 2) {
    throw ValidationError(
        "t-test needs at least two treated and two control units, got " +
        std::to_string(treated.size()) + " and " +
        std::to_string(control.size()));
  }

  TestResult result;
  result.alpha = options.alpha;
  result.tail = options.tail;
  const double n1 = double(treated.size());
  const double n0 = double(control.size());
  const double diff = mean(treated) - mean(control);
  const double v1 = sample_variance(treated) / n1;
  const double v0 = sample_variance(control) / n0;
  const double se2 = v1 + v0;
  if (se2 == 0.0) {
    // Both arms constant.
    result.df = n1 + n0 - 2;
    if (diff == 0.0) {
      result.statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.statistic = diff > 0 ? HUGE_VAL : -HUGE_VAL;
      const bool favored = options.tail == Tail::kTwoSided ||
                           (options.tail == Tail::kUpper) == (diff > 0);
      result.p_value = favored ? 0.0 : 1.0;
    }
  } else {
    result.statistic = diff / std::sqrt(se2);
    const double df = se2 * se2 / (v1 * v1 / (n1 - 1) + v0 * v0 / (n0 - 1));
    result.df = df;
    const boost::math::students_t dist(df);
    const double upper = boost::math::cdf(complement(dist, result.statistic));
    const double lower = boost::math::cdf(dist, result.statistic);
    switch (options.tail) {
      case Tail::kUpper:
        result.p_value = upper;
        break;
      case Tail::kLower:
        result.p_value = lower;
        break;
      case Tail::kTwoSided:
        result.p_value = std::min(1.0, 2.0 * std::min(upper, lower));
        break;
    }
    const double level = options.tail == Tail::kTwoSided ? options.alpha / 2
                                                         : options.alpha;
    result.critical_value = boost::math::quantile(complement(dist, level));
  }
  result.reject = result.p_value < options.alpha;
  return result;
}

// ---------------------------------------------------------------------------
// Sharp null

SharpNullPlan::SharpNullPlan(const InstrumentModel& instruments,
                             std::span<const double> y, int n_r)
    : p_(instruments.p()), n_a_(instruments.n_a()) {
  if (static_cast<int>(y.size()) != n_a_) {
    throw ValidationError("outcome vector length does not match config");
  }
  std::vector<double> dense(static_cast<std::size_t>(n_r), 0.0);
  std::vector<std::uint8_t> used(static_cast<std::size_t>(n_r), 0);
  CompensatedSum offset;
  for (int a = 0; a < n_a_; ++a) {
    const double k = y[a] * instruments.anchor_weight()[a] /
                     instruments.covariance()[a];
    offset.add(k * instruments.expected_z()[a]);
    for (const auto& [r, u] : instruments.row(a)) {
      dense[r] += k * u;
      used[r] = 1;
    }
  }
  offset_ = offset.value();
  for (int r = 0; r < n_r; ++r) {
    if (used[r]) {
      units_.push_back(r);
      coefficient_.push_back(dense[r]);
    }
  }
}

double SharpNullPlan::mu_tilde(const TreatmentVector& t) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (t[static_cast<std::size_t>(units_[i])]) s.add(coefficient_[i]);
  }
  s.add(-offset_);
  return s.value() / n_a_;
}

double SharpNullPlan::resample(Rng& rng) const {
  CompensatedSum s;
  for (double k : coefficient_) {
    if (rng.bernoulli(p_)) s.add(k);
  }
  s.add(-offset_);
  return s.value() / n_a_;
}

TestResult sharp_null_test(std::span<const double> y, const TreatmentVector& t,
                           const AnchorEstimator& estimator,
                           const ResamplingOptions& options) {
  check_alpha(options.alpha);
  if (options.n_resamples < 1) {
    throw ValidationError("sharp-null test needs at least one resample");
  }
  const int n_r = static_cast<int>(t.size());
  const SharpNullPlan plan(estimator.instruments(), y, n_r);
  for (int r : plan.anchor_units()) {
    if (r >= n_r) throw ValidationError("treatment vector is too short");
  }
  TestResult result;
  result.alpha = options.alpha;
  result.n_resamples = options.n_resamples;
  result.tail = Tail::kTwoSided;
  // Same summation path as the resamples, so exact ties stay ties.
  result.statistic = plan.mu_tilde(t);
  const double observed = std::abs(result.statistic);

  std::vector<double> draws(static_cast<std::size_t>(options.n_resamples));
  int extreme = 0;
  for (int i = 0; i < options.n_resamples; ++i) {
    Rng rng(derive_seed(options.seed, kSharpNullStream,
                        static_cast<std::uint64_t>(i)));
    draws[i] = std::abs(plan.resample(rng));
    if (draws[i] >= observed) ++extreme;
  }
  result.p_value = plus_one_p_value(extreme, options.n_resamples);
  // Reject iff 1 + #{draws >= |obs|} <= alpha (B + 1). The threshold is the
  // (k + 1)-th largest draw with k + 1 = floor(alpha (B + 1)); |obs| must
  // exceed it, so ties at the threshold never reject.
  const double budget = options.alpha * (options.n_resamples + 1);
  const int k = static_cast<int>(std::floor(budget)) - 1;
  if (k < 0) {
    result.critical_value = HUGE_VAL;
  } else {
    std::nth_element(draws.begin(), draws.begin() + k, draws.end(),
                     std::greater<>());
    result.critical_value = draws[k];
  }
  result.reject = extreme + 1 <= budget;
  return result;
}

}  // namespace endograph
