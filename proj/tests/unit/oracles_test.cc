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

// Hand-computed values for the reference implementations themselves.

#include "oracles.h"

#include <cmath>

#include <gtest/gtest.h>

namespace endograph::oracle {
namespace {

TEST(Oracle, MaskBitsLowBitFirst) {
  EXPECT_EQ(mask_bits(0b101, 4), (Bits{1, 0, 1, 0}));
}

TEST(Oracle, ExpectationOfBernoulli) {
  // E[T_0 + 2 T_1] = 3p, Var(T_0) = p(1-p).
  const auto f = [](const Bits& t) { return t[0] + 2.0 * t[1]; };
  EXPECT_NEAR(expectation(f, 2, 0.3), 0.9, 1e-15);
  const auto g = [](const Bits& t) { return double(t[0]); };
  EXPECT_NEAR(covariance(g, g, 2, 0.3), 0.21, 1e-15);
  EXPECT_NEAR(covariance(g, [](const Bits& t) { return double(t[1]); }, 2, 0.3),
              0.0, 1e-15);
}

TEST(Oracle, HorvitzThompsonHandValue) {
  // Mixed exposure contributes nothing; a single treated edge gives y/p.
  const Dense e = {{1, 1}};
  const Bits t = {1, 0};
  const std::vector<double> y = {3};
  const double ht = horvitz_thompson(e, t, y, 0.5, true);
  EXPECT_NEAR(ht, 0.0, 1e-15);
  const Dense e1 = {{1, 0}};
  EXPECT_NEAR(horvitz_thompson(e1, t, y, 0.5, true), 6.0, 1e-15);
  EXPECT_NEAR(horvitz_thompson(e1, {0, 0}, y, 0.5, true), -6.0, 1e-15);
}

TEST(Oracle, OutcomesHandValue) {
  const Dense e = {{1, 1, 0}};
  const Dense w = {{2, 3, 5}};
  const auto y = outcomes(e, {1, 1, 1}, {1.0}, {0.5}, {}, w);
  EXPECT_DOUBLE_EQ(y[0], 1.0 + 0.5 * 5.0);
}

TEST(Oracle, MinimalDependencySet) {
  // Table over deps {4, 7}: value = T_7 only.
  const EdgeFunction fn({4, 7}, {0, 0, 1, 1});
  EXPECT_EQ(minimal_dependency_set(fn), (std::vector<int>{7}));
  const EdgeFunction xor_fn({1, 2}, {0, 1, 1, 0});
  EXPECT_EQ(minimal_dependency_set(xor_fn), (std::vector<int>{1, 2}));
}

TEST(Oracle, BinomialLikelihoodHandValue) {
  const Dense e = {{1, 1, 0}};
  const double ll = binomial_log_likelihood(e, {1, 0, 1}, 0.5);
  EXPECT_NEAR(ll, std::log(2 * 0.25), 1e-12);
}

TEST(Oracle, RandomInstancesAreDeterministic) {
  const auto a = random_bipartite_instance(3);
  const auto b = random_bipartite_instance(3);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.model.beta, b.model.beta);
  const auto u = random_unipartite_instance(3);
  EXPECT_TRUE(u.graph.unipartite());
}

}  // namespace
}  // namespace endograph::oracle
