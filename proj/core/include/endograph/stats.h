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

// Small numerical helpers shared by the estimators, tests and Monte Carlo
// harness.

#ifndef ENDOGRAPH_STATS_H_
#define ENDOGRAPH_STATS_H_

#include <cmath>
#include <span>
#include <vector>

namespace endograph {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> xs);
double mean(std::span<const double> xs);
// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

double standard_normal_cdf(double x);

// sup_x |F_n(x) - Phi(x)| for the empirical CDF of `samples`.
double ks_distance_to_standard_normal(std::span<const double> samples);

// Smallest sample value q such that at least `fraction` of the samples are
// <= q. Requires a non-empty input and fraction in (0, 1].
double lower_quantile(std::vector<double> samples, double fraction);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Ordinary least squares of y on x.
LineFit least_squares_line(std::span<const double> x,
                           std::span<const double> y);

}  // namespace endograph

#endif  // ENDOGRAPH_STATS_H_
