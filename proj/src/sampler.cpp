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

#include "weaklearn/sampler.hpp"

#include <algorithm>

#include "weaklearn/error.hpp"

namespace weaklearn {

ClassIndex build_index(const Dataset& dataset, int32_t num_classes) {
  if (dataset.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot index an empty dataset");
  ClassIndex index;
  index.examples_of.resize(size_t(num_classes));
  index.num_examples = static_cast<int64_t>(dataset.size());
  for (size_t n = 0; n < dataset.size(); ++n) {
    for (int32_t k : dataset.examples[n].labels) {
      if (k < 0 || k >= num_classes) throw Error(ErrorKind::kOutOfRange, "label out of range");
      index.examples_of[size_t(k)].push_back(static_cast<int64_t>(n));
    }
  }
  for (int32_t k = 0; k < num_classes; ++k) {
    if (!index.examples_of[size_t(k)].empty()) index.active_classes.push_back(k);
  }
  return index;
}

std::vector<int32_t> Batch::target_positions() const {
  std::vector<int32_t> pos(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto it = std::lower_bound(present_classes.begin(), present_classes.end(), targets[i]);
    pos[i] = static_cast<int32_t>(it - present_classes.begin());
  }
  return pos;
}

Batch next_batch(const ClassIndex& index, int32_t batch_size, Rng& rng) {
  if (index.active_classes.empty()) throw Error(ErrorKind::kInvalidArgument, "no active classes");
  if (batch_size < 1) throw Error(ErrorKind::kInvalidArgument, "batch_size must be positive");
  Batch batch;
  batch.examples.reserve(size_t(batch_size));
  batch.targets.reserve(size_t(batch_size));
  const uint64_t n_active = index.active_classes.size();
  for (int32_t i = 0; i < batch_size; ++i) {
    const int32_t c = index.active_classes[rng.uniform_below(n_active)];
    const auto& members = index.examples_of[size_t(c)];
    batch.targets.push_back(c);
    batch.examples.push_back(members[rng.uniform_below(members.size())]);
  }
  batch.present_classes = batch.targets;
  std::sort(batch.present_classes.begin(), batch.present_classes.end());
  batch.present_classes.erase(std::unique(batch.present_classes.begin(), batch.present_classes.end()),
                              batch.present_classes.end());
  return batch;
}

}  // namespace weaklearn
