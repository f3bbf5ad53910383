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

// The independent Bernoulli(p) design and the exact enumeration oracle.
//
// The oracle sums over all 2^{n_r} assignments with their design
// probabilities. Every exact unbiasedness and covariance check in the test
// suites goes through exact_expectation() below.

#ifndef ENDOGRAPH_DESIGN_H_
#define ENDOGRAPH_DESIGN_H_

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

#include "endograph/stats.h"
#include "endograph/treatment.h"

namespace endograph {

inline constexpr int kEnumerationCap = 20;

class BernoulliDesign {
 public:
  // Throws ValidationError unless 0 < p < 1 and n_r >= 1.
  BernoulliDesign(double p, int n_r, std::uint64_t seed = 0);

  double p() const { return p_; }
  int n_r() const { return n_r_; }
  std::uint64_t seed() const { return seed_; }

  // The assignment determined by the design seed.
  TreatmentVector draw() const;
  // The assignment of substream `stream` (e.g. a replication index).
  TreatmentVector draw(std::uint64_t stream) const;
  // Continues an existing generator.
  TreatmentVector draw(Rng& rng) const;

  // p^{#treated} (1 - p)^{#control}.
  double probability(const TreatmentVector& t) const;

 private:
  double p_;
  int n_r_;
  std::uint64_t seed_;
};

// Range over all 2^{n_r} assignments in mask order, each paired with its
// probability under Bernoulli(p).
class AssignmentEnumeration {
 public:
  struct Item {
    const TreatmentVector& t;
    double probability;
  };

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Item;
    using difference_type = std::ptrdiff_t;

    iterator(const AssignmentEnumeration* owner, std::uint64_t mask);
    Item operator*() const;
    iterator& operator++();
    bool operator==(const iterator& other) const {
      return mask_ == other.mask_;
    }

   private:
    const AssignmentEnumeration* owner_;
    std::uint64_t mask_;
    TreatmentVector t_;
    std::size_t treated_ = 0;
  };

  // Throws CapExceededError when n_r > cap.
  AssignmentEnumeration(int n_r, double p, int cap = kEnumerationCap);

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, count()); }
  std::uint64_t count() const { return std::uint64_t{1} << n_r_; }
  int n_r() const { return n_r_; }

 private:
  int n_r_;
  // powers_[k] = p^k (1 - p)^{n_r - k}
  std::vector<double> powers_;
};

inline AssignmentEnumeration enumerate_assignments(int n_r, double p) {
  return AssignmentEnumeration(n_r, p);
}

// Sum over T of Pr(T) * statistic(T), compensated.
template <typename Statistic>
double exact_expectation(Statistic&& statistic, int n_r, double p) {
  CompensatedSum total;
  for (const auto& item : enumerate_assignments(n_r, p)) {
    total.add(item.probability * static_cast<double>(statistic(item.t)));
  }
  return total.value();
}

// Elementwise expectation of a vector-valued statistic of fixed length.
template <typename Statistic>
std::vector<double> exact_expectation_vector(Statistic&& statistic, int n_r,
                                             double p) {
  std::vector<CompensatedSum> totals;
  for (const auto& item : enumerate_assignments(n_r, p)) {
    const auto values = statistic(item.t);
    if (totals.empty()) totals.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      totals[i].add(item.probability * values[i]);
    }
  }
  std::vector<double> out(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) out[i] = totals[i].value();
  return out;
}

// E[fg] - E[f]E[g], both moments by enumeration.
template <typename F, typename G>
double exact_covariance(F&& f, G&& g, int n_r, double p) {
  const double ef = exact_expectation(f, n_r, p);
  const double eg = exact_expectation(g, n_r, p);
  return exact_expectation(
      [&](const TreatmentVector& t) { return (f(t) - ef) * (g(t) - eg); },
      n_r, p);
}

}  // namespace endograph

#endif  // ENDOGRAPH_DESIGN_H_
