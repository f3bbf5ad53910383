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

#ifndef ENDOGRAPH_TREATMENT_H_
#define ENDOGRAPH_TREATMENT_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace endograph {

// One realization T in {0,1}^{n_r} of the treatment assignment.
class TreatmentVector {
 public:
  TreatmentVector() = default;
  explicit TreatmentVector(std::size_t n_r, bool value = false)
      : bits_(n_r, value ? 1 : 0) {}
  explicit TreatmentVector(std::vector<std::uint8_t> bits);

  static TreatmentVector all_treated(std::size_t n_r) {
    return TreatmentVector(n_r, true);
  }
  static TreatmentVector all_control(std::size_t n_r) {
    return TreatmentVector(n_r, false);
  }
  // Bit i of `mask` becomes T_i. Requires n_r <= 64.
  static TreatmentVector from_mask(std::uint64_t mask, std::size_t n_r);
  // Parses "0110"; character i is T_i.
  static TreatmentVector parse(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t r) const { return bits_[r] != 0; }
  void set(std::size_t r, bool value) { bits_[r] = value ? 1 : 0; }
  std::size_t count_treated() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::string to_string() const;

  friend bool operator==(const TreatmentVector&,
                         const TreatmentVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// SplitMix64 finalizer used to derive independent seed substreams. Derived
// seeds depend only on their inputs, so replication i always sees the same
// stream regardless of scheduling.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index = 0);

// Thin wrapper over mt19937_64 whose Bernoulli and integer draws are defined
// bit-for-bit here rather than by the standard library's distributions, so
// seeded runs are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform on {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n);
  double uniform(double low, double high) {
    return low + (high - low) * uniform();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace endograph

#endif  // ENDOGRAPH_TREATMENT_H_
