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

#include "endograph/design.h"

#include <cmath>

#include <gtest/gtest.h>

#include "endograph/errors.h"
#include "oracles.h"

namespace endograph {
namespace {

TEST(BernoulliDesign, SameSeedSameDraw) {
  const BernoulliDesign d(0.5, 3, 17);
  EXPECT_EQ(d.draw(), d.draw());
  EXPECT_EQ(d.draw(4), BernoulliDesign(0.5, 3, 17).draw(4));
}

TEST(BernoulliDesign, RejectsDegenerateProbability) {
  EXPECT_THROW(BernoulliDesign(0.0, 3), ValidationError);
  EXPECT_THROW(BernoulliDesign(1.0, 3), ValidationError);
  EXPECT_THROW(BernoulliDesign(0.5, 0), ValidationError);
}

TEST(BernoulliDesign, MarginalFrequency) {
  const BernoulliDesign d(0.3, 50, 5);
  double treated = 0;
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) treated += d.draw(i).count_treated();
  const double n = draws * 50.0;
  EXPECT_NEAR(treated / n, 0.3, 4 * std::sqrt(0.21 / n));
}

TEST(BernoulliDesign, Probability) {
  const BernoulliDesign d(0.2, 3);
  EXPECT_NEAR(d.probability(TreatmentVector::parse("101")), 0.2 * 0.8 * 0.2,
              1e-15);
}

TEST(Enumeration, CountsAndSumsToOne) {
  for (double p : {0.2, 0.5, 0.8}) {
    std::uint64_t n = 0;
    CompensatedSum total;
    for (const auto& item : enumerate_assignments(6, p)) {
      EXPECT_EQ(item.t, TreatmentVector::from_mask(n, 6));
      total.add(item.probability);
      ++n;
    }
    EXPECT_EQ(n, 64u);
    EXPECT_NEAR(total.value(), 1.0, 1e-15);
  }
}

TEST(Enumeration, RefusesAboveCap) {
  EXPECT_THROW(AssignmentEnumeration(21, 0.5), CapExceededError);
  EXPECT_NO_THROW(AssignmentEnumeration(20, 0.5));
}

TEST(Enumeration, MeanOfTreatedCount) {
  const double e = exact_expectation(
      [](const TreatmentVector& t) { return double(t.count_treated()); }, 7,
      0.3);
  EXPECT_NEAR(e, 2.1, 1e-14);
}

TEST(Enumeration, MatchesNaiveOracleOnNonlinearStatistic) {
  auto f = [](const TreatmentVector& t) {
    double v = 0;
    for (std::size_t r = 0; r < t.size(); ++r) v += (r + 1) * t[r];
    return std::sin(v) + v * v;
  };
  auto g = [&](const oracle::Bits& b) { return f(oracle::to_treatment(b)); };
  for (double p : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(exact_expectation(f, 9, p), oracle::expectation(g, 9, p),
                1e-12);
  }
}

TEST(Enumeration, CovarianceOfIndependentCoordinatesVanishes) {
  const double c = exact_covariance(
      [](const TreatmentVector& t) { return double(t[0]); },
      [](const TreatmentVector& t) { return double(t[1]); }, 3, 0.4);
  EXPECT_NEAR(c, 0.0, 1e-15);
  const double v = exact_covariance(
      [](const TreatmentVector& t) { return double(t[0]); },
      [](const TreatmentVector& t) { return double(t[0]); }, 3, 0.4);
  EXPECT_NEAR(v, 0.24, 1e-15);
}

TEST(Enumeration, VectorExpectation) {
  const auto v = exact_expectation_vector(
      [](const TreatmentVector& t) {
        return std::vector<double>{double(t[0]), double(t[1] * t[2])};
      },
      3, 0.5);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 0.5, 1e-15);
  EXPECT_NEAR(v[1], 0.25, 1e-15);
}

}  // namespace
}  // namespace endograph
