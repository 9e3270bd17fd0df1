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

#include <cstdint>
#include <vector>

#include "weaklearn/data.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

/// Inverted index class -> example ordinals. Immutable after build.
struct ClassIndex {
  std::vector<std::vector<int64_t>> examples_of;  // per class, ascending ordinals
  std::vector<int32_t> active_classes;            // classes with N_k > 0, ascending
  int64_t num_examples = 0;

  int64_t count(int32_t k) const { return static_cast<int64_t>(examples_of[size_t(k)].size()); }
  int32_t num_classes() const { return static_cast<int32_t>(examples_of.size()); }
};

ClassIndex build_index(const Dataset& dataset, int32_t num_classes);

/// One sampled batch. Slot i pairs example `examples[i]` with the single
/// positive `targets[i]`; every other class is a negative for that slot.
struct Batch {
  std::vector<int64_t> examples;
  std::vector<int32_t> targets;
  std::vector<int32_t> present_classes;  // sorted unique targets

  size_t size() const { return targets.size(); }
  /// Position of each slot's target inside present_classes.
  std::vector<int32_t> target_positions() const;
};

/// Class-balanced sampling with replacement: per slot, a class uniformly from
/// the active classes, then an example uniformly among that class's examples.
Batch next_batch(const ClassIndex& index, int32_t batch_size, Rng& rng);

}  // namespace weaklearn
