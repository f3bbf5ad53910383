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

#include "endograph/treatment.h"

#include <set>

#include <gtest/gtest.h>

namespace endograph {
namespace {

TEST(TreatmentVector, MaskBitOrder) {
  const auto t = TreatmentVector::from_mask(0b0110, 4);
  EXPECT_FALSE(t[0]);
  EXPECT_TRUE(t[1]);
  EXPECT_TRUE(t[2]);
  EXPECT_FALSE(t[3]);
  EXPECT_EQ(t.to_string(), "0110");
  EXPECT_EQ(TreatmentVector::parse("0110"), t);
  EXPECT_EQ(t.count_treated(), 2u);
}

TEST(TreatmentVector, AllTreatedAndControl) {
  EXPECT_EQ(TreatmentVector::all_treated(3).count_treated(), 3u);
  EXPECT_EQ(TreatmentVector::all_control(3).count_treated(), 0u);
}

TEST(TreatmentVector, RejectsNonBinary) {
  EXPECT_ANY_THROW(TreatmentVector::parse("012"));
  EXPECT_ANY_THROW(TreatmentVector(std::vector<std::uint8_t>{0, 2}));
}

TEST(Seeds, DeriveIsDeterministicAndSeparatesStreams) {
  EXPECT_EQ(derive_seed(5, 1, 2), derive_seed(5, 1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 0; stream < 4; ++stream) {
    for (std::uint64_t i = 0; i < 256; ++i) {
      seen.insert(derive_seed(5, stream, i));
    }
  }
  EXPECT_EQ(seen.size(), 4u * 256u);
  EXPECT_NE(derive_seed(5, 1, 2), derive_seed(6, 1, 2));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformAndBelowRanges) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
}

TEST(Rng, BelowIsRoughlyUniform) {
  Rng rng(9);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(5)];
  for (int c : counts) EXPECT_NEAR(c, n / 5.0, 5 * std::sqrt(n * 0.16));
}

}  // namespace
}  // namespace endograph
