// Copyright 2026 The weaklearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace weaklearn {

/// xoshiro256** seeded through splitmix64. All distributions are implemented
/// here rather than taken from <random> so that streams are bit-identical
/// across standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithmId = "xoshiro256ss-splitmix64-v1";

  explicit Rng(uint64_t seed = 0);

  uint64_t next_u64();

  /// Uniform integer in [0, n). n must be positive.
  uint64_t uniform_below(uint64_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();

  /// Independent child stream; does not advance this generator.
  Rng split(uint64_t stream) const;

  std::array<uint64_t, 4> state() const { return s_; }
  void set_state(const std::array<uint64_t, 4>& s) { s_ = s; }
  std::string state_hex() const;
  static Rng from_state_hex(const std::string& hex);

 private:
  std::array<uint64_t, 4> s_{};
};

uint64_t splitmix64(uint64_t& x);

/// FNV-1a 64-bit; used for stable id-hash splits.
uint64_t stable_hash(std::string_view s);

}  // namespace weaklearn
