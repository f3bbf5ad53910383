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

#include <algorithm>
#include <climits>
#include <cstdint>

#include "endograph/errors.h"

namespace endograph {

TreatmentVector::TreatmentVector(std::vector<std::uint8_t> bits)
    : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw ValidationError("treatment entries must be 0 or 1");
  }
}

TreatmentVector TreatmentVector::from_mask(std::uint64_t mask,
                                           std::size_t n_r) {
  if (n_r > 64) throw ValidationError("from_mask supports at most 64 units");
  TreatmentVector t(n_r);
  for (std::size_t r = 0; r < n_r; ++r) t.bits_[r] = (mask >> r) & 1U;
  return t;
}

TreatmentVector TreatmentVector::parse(std::string_view bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ValidationError("treatment string must contain only 0 and 1");
    }
    out.push_back(c == '1' ? 1 : 0);
  }
  return TreatmentVector(std::move(out));
}

std::size_t TreatmentVector::count_treated() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::string TreatmentVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t r = 0; r < bits_.size(); ++r) {
    if (bits_[r]) s[r] = '1';
  }
  return s;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  return mix_seed(mix_seed(mix_seed(base) ^ stream) ^ index);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace endograph
