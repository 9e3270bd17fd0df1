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
#include <string>

#include "weaklearn/model.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

struct CheckpointMeta {
  std::string rng_state;  // Rng::state_hex()
  int64_t step = 0;
  double learning_rate = 0.0;
};

/// "WLCKPT1" file: ASCII header lines, then each parameter array as
/// `array <name> <d0>x<d1>...` followed by little-endian raw values.
/// Written to a temporary file and renamed into place.
template <typename Real>
void save_checkpoint(const std::string& path, const ModelParams<Real>& params, const CheckpointMeta& meta);

/// Reads a checkpoint, converting values to Real if the stored dtype differs.
template <typename Real>
ModelParams<Real> load_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

/// The dtype recorded in a checkpoint header.
DType checkpoint_dtype(const std::string& path);

}  // namespace weaklearn
