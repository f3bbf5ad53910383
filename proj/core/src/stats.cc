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

#include "endograph/stats.h"

#include <algorithm>
#include <numbers>

#include "endograph/errors.h"

namespace endograph {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size() - 1);
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ks_distance_to_standard_normal(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("KS distance of empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = standard_normal_cdf(sorted[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return std::clamp(d, 0.0, 1.0);
}

double lower_quantile(std::vector<double> samples, double fraction) {
  if (samples.empty()) throw ValidationError("quantile of empty sample");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("quantile fraction must lie in (0, 1]");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  auto k = static_cast<std::size_t>(std::ceil(fraction * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, samples.size());
  return samples[k - 1];
}

LineFit least_squares_line(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("line fit needs at least two paired points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxy, sxx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
  }
  if (sxx.value() == 0.0) throw ValidationError("line fit with constant x");
  LineFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace endograph
