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
#include <functional>
#include <string>
#include <vector>

#include "weaklearn/data.hpp"
#include "weaklearn/model.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

enum class LossKind { kMulticlass, kOneVsAll };
std::string loss_kind_name(LossKind kind);
LossKind parse_loss_kind(const std::string& s);

struct TrainConfig {
  int32_t batch_size = 128;
  double lr_init = 0.1;
  double lr_floor = 1e-6;
  int32_t min_epochs_per_lr = 10;
  int64_t epoch_size = 10000;
  int32_t max_epochs = 200;
  LossKind loss_kind = LossKind::kMulticlass;
  // false: score every class and update every column (full softmax).
  bool sampled_targets = true;
  uint64_t seed = 1;
  double validation_fraction = 0.1;
  int32_t val_k = 0;  // 0 -> min(10, K - 1)
  int32_t workers = 0;  // 0 -> runtime default

  /// Throws kInvalidArgument. lr_init < lr_floor is allowed (no-op run).
  void validate() const;
};

struct EpochRecord {
  int32_t epoch = 0;
  double lr = 0.0;
  double train_loss_mean = 0.0;
  double val_error = 0.0;
  double wall_ms = 0.0;

  std::string to_json() const;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::string checkpoint_path;
  int64_t steps = 0;
  double final_lr = 0.0;
};

template <typename Real>
struct TrainResult {
  ModelParams<Real> params;
  TrainLog log;
  Rng rng{0};  // sampler state after the last step
};

struct DataSplit {
  Dataset train, validation;
};

/// Assigns an example to validation when hash(id) / 2^64 < fraction.
DataSplit split_by_id(const Dataset& dataset, double validation_fraction, uint64_t seed);

using EpochCallback = std::function<void(const EpochRecord&)>;

template <typename Real>
TrainResult<Real> train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set,
                        const ModelConfig& model_cfg, int32_t num_classes, const EpochCallback& on_epoch = {});

/// Splits `dataset` by id, then trains.
template <typename Real>
TrainResult<Real> train(const TrainConfig& cfg, const Dataset& dataset, const ModelConfig& model_cfg,
                        int32_t num_classes, const EpochCallback& on_epoch = {});

/// theta -= lr * grad; w_k -= lr * grad_k for k in grads.classes only.
template <typename Real>
void sgd_step(ModelParams<Real>& params, const Gradients<Real>& grads, double lr);

template <typename Real>
struct StepResult {
  double loss = 0.0;
  Gradients<Real> grads;
};

/// One forward / loss / backward pass over a sampled batch. `class_counts`
/// holds N_k for every class and is only read by the one-vs-all loss.
template <typename Real>
StepResult<Real> compute_gradients(const ModelParams<Real>& params, const Dataset& dataset,
                                   std::span<const int64_t> examples, std::span<const int32_t> targets,
                                   const TrainConfig& cfg, std::span<const int64_t> class_counts,
                                   int64_t num_examples, Exec exec = Exec::kParallel);

/// 1 - precision@k on `val_set`.
template <typename Real>
double validation_error(const ModelParams<Real>& params, const Dataset& val_set, int64_t k);

int64_t default_val_k(int32_t num_classes);

struct GradCheckOptions {
  int32_t num_classes = 5;
  int32_t batch_size = 4;
  double step = 1e-4;
  bool degenerate = false;  // zero inputs and zero parameters
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  int64_t num_params = 0;
  std::string worst_param;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  std::string to_json() const;
};

/// Compares analytic gradients against central differences for every
/// parameter of a 64-bit model built from `model_cfg`.
GradCheckReport gradient_check(const ModelConfig& model_cfg, LossKind loss_kind, uint64_t seed,
                               const GradCheckOptions& options = {});

/// Backbone used when no layers are configured.
inline constexpr const char* kPresetLayers = "fc:128,fc:64";

/// Small default backbone used by grad-check: 4x4x1 -> fc:12 -> fc:10 -> fc:8.
ModelConfig tiny_model_config();

/// Checks the schedule contract from a log alone. Returns an empty string
/// when the log is valid, else a description of the first violation.
std::string check_schedule(const std::vector<EpochRecord>& log, double lr_init, double lr_floor,
                           int32_t min_epochs_per_lr, int32_t max_epochs);

std::vector<EpochRecord> read_train_log(const std::string& path);

}  // namespace weaklearn
