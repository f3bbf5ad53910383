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

#include <bit>
#include <cmath>
#include <string>

#include "endograph/errors.h"

namespace endograph {
namespace {

constexpr std::uint64_t kDrawStream = 0x64726177;  // "draw"

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("design probability must satisfy 0 < p < 1, got " +
                          std::to_string(p));
  }
}

}  // namespace

BernoulliDesign::BernoulliDesign(double p, int n_r, std::uint64_t seed)
    : p_(p), n_r_(n_r), seed_(seed) {
  check_probability(p);
  if (n_r < 1) throw ValidationError("design needs n_r >= 1");
}

TreatmentVector BernoulliDesign::draw() const {
  Rng rng(seed_);
  return draw(rng);
}

TreatmentVector BernoulliDesign::draw(std::uint64_t stream) const {
  Rng rng(derive_seed(seed_, kDrawStream, stream));
  return draw(rng);
}

TreatmentVector BernoulliDesign::draw(Rng& rng) const {
  TreatmentVector t(static_cast<std::size_t>(n_r_));
  for (std::size_t r = 0; r < t.size(); ++r) t.set(r, rng.bernoulli(p_));
  return t;
}

double BernoulliDesign::probability(const TreatmentVector& t) const {
  if (static_cast<int>(t.size()) != n_r_) {
    throw ValidationError("treatment vector length does not match design");
  }
  const auto k = static_cast<double>(t.count_treated());
  return std::pow(p_, k) * std::pow(1.0 - p_, static_cast<double>(n_r_) - k);
}

AssignmentEnumeration::AssignmentEnumeration(int n_r, double p, int cap)
    : n_r_(n_r) {
  check_probability(p);
  if (n_r < 1) throw ValidationError("enumeration needs n_r >= 1");
  if (n_r > cap) {
    throw CapExceededError("exact enumeration over " + std::to_string(n_r) +
                           " randomization units exceeds the cap of " +
                           std::to_string(cap));
  }
  powers_.resize(static_cast<std::size_t>(n_r) + 1);
  for (int k = 0; k <= n_r; ++k) {
    powers_[static_cast<std::size_t>(k)] =
        std::pow(p, k) * std::pow(1.0 - p, n_r - k);
  }
}

AssignmentEnumeration::iterator::iterator(const AssignmentEnumeration* owner,
                                          std::uint64_t mask)
    : owner_(owner),
      mask_(mask),
      t_(TreatmentVector::from_mask(mask,
                                    static_cast<std::size_t>(owner->n_r_))),
      treated_(static_cast<std::size_t>(std::popcount(mask))) {}

AssignmentEnumeration::Item AssignmentEnumeration::iterator::operator*()
    const {
  return {t_, owner_->powers_[treated_]};
}

AssignmentEnumeration::iterator&
AssignmentEnumeration::iterator::operator++() {
  // Binary increment: clear trailing ones, set the next zero.
  ++mask_;
  std::size_t r = 0;
  const std::size_t n = t_.size();
  while (r < n && t_[r]) {
    t_.set(r, false);
    --treated_;
    ++r;
  }
  if (r < n) {
    t_.set(r, true);
    ++treated_;
  }
  return *this;
}

}  // namespace endograph
