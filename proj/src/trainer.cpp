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

#include "weaklearn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "weaklearn/error.hpp"
#include "weaklearn/eval.hpp"
#include "weaklearn/loss.hpp"
#include "weaklearn/sampler.hpp"

namespace weaklearn {

std::string loss_kind_name(LossKind kind) { return kind == LossKind::kMulticlass ? "multiclass" : "one_vs_all"; }

LossKind parse_loss_kind(const std::string& s) {
  if (s == "multiclass") return LossKind::kMulticlass;
  if (s == "one_vs_all" || s == "ova") return LossKind::kOneVsAll;
  throw Error(ErrorKind::kInvalidArgument, "unknown loss kind: " + s);
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorKind::kInvalidArgument, "batch_size must be >= 1");
  if (!(lr_init > 0.0) || !(lr_floor > 0.0)) throw Error(ErrorKind::kInvalidArgument, "learning rates must be > 0");
  if (min_epochs_per_lr < 1) throw Error(ErrorKind::kInvalidArgument, "min_epochs_per_lr must be >= 1");
  if (epoch_size < 1) throw Error(ErrorKind::kInvalidArgument, "epoch_size must be >= 1");
  if (max_epochs < 0) throw Error(ErrorKind::kInvalidArgument, "max_epochs must be >= 0");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "validation_fraction must be in (0, 1)");
  }
  if (val_k < 0) throw Error(ErrorKind::kInvalidArgument, "val_k must be >= 0");
}

std::string EpochRecord::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["lr"] = lr;
  j["train_loss_mean"] = train_loss_mean;
  j["val_error"] = val_error;
  j["wall_ms"] = wall_ms;
  return j.dump();
}

DataSplit split_by_id(const Dataset& dataset, double validation_fraction, uint64_t seed) {
  DataSplit s;
  for (Dataset* d : {&s.train, &s.validation}) {
    d->height = dataset.height;
    d->width = dataset.width;
    d->channels = dataset.channels;
  }
  for (const auto& ex : dataset.examples) {
    uint64_t h = stable_hash(ex.id) ^ seed;
    h = splitmix64(h);
    const double u = double(h >> 11) * 0x1.0p-53;
    (u < validation_fraction ? s.validation : s.train).examples.push_back(ex);
  }
  return s;
}

int64_t default_val_k(int32_t num_classes) { return std::max<int64_t>(1, std::min<int64_t>(10, num_classes - 1)); }

template <typename Real>
void sgd_step(ModelParams<Real>& params, const Gradients<Real>& grads, double lr) {
  if (grads.layers.size() != params.layers.size()) throw Error(ErrorKind::kShapeMismatch, "sgd_step: layer count");
  const size_t E = params.embed_dim();
  if (grads.columns.rows != grads.classes.size() || (grads.columns.rows > 0 && grads.columns.cols != E)) {
    throw Error(ErrorKind::kShapeMismatch, "sgd_step: column gradient shape");
  }
  for (size_t i = 0; i < grads.classes.size(); ++i) {
    if (grads.classes[i] < 0 || grads.classes[i] >= params.num_classes) {
      throw Error(ErrorKind::kOutOfRange, "sgd_step: class out of range");
    }
    if (i > 0 && grads.classes[i] <= grads.classes[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument, "sgd_step: classes must be sorted unique");
    }
  }
  for (size_t l = 0; l < params.layers.size(); ++l) {
    if (grads.layers[l].weight.values.size() != params.layers[l].weight.values.size() ||
        grads.layers[l].bias.values.size() != params.layers[l].bias.values.size()) {
      throw Error(ErrorKind::kShapeMismatch, "sgd_step: gradient of " + params.layers[l].weight.name);
    }
  }
  const Real step = static_cast<Real>(lr);
  auto update = [step](std::vector<Real>& v, const std::vector<Real>& g) {
    for (size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
  };
  for (size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weight.values, grads.layers[l].weight.values);
    update(params.layers[l].bias.values, grads.layers[l].bias.values);
  }
  for (size_t i = 0; i < grads.classes.size(); ++i) {
    auto w = params.column(grads.classes[i]);
    const auto g = grads.columns.row(i);
    for (size_t e = 0; e < E; ++e) w[e] -= step * g[e];
  }
}

namespace {

template <typename Real>
Matrix<Real> gather(const Dataset& dataset, std::span<const int64_t> examples) {
  const size_t dim = dataset.input_dim();
  Matrix<Real> m(examples.size(), dim);
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto& px = dataset.examples[size_t(examples[i])].image.pixels;
    std::copy(px.begin(), px.end(), m.data.begin() + static_cast<ptrdiff_t>(i * dim));
  }
  return m;
}

// Classes scored for a batch: the present targets (sampled) or every class.
// One-vs-all skips classes whose balance weights are undefined.
std::vector<int32_t> scored_classes(std::span<const int32_t> targets, const TrainConfig& cfg,
                                    std::span<const int64_t> class_counts, int64_t num_examples, int32_t K) {
  std::vector<int32_t> classes;
  if (cfg.sampled_targets) {
    classes.assign(targets.begin(), targets.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  } else {
    for (int32_t k = 0; k < K; ++k) {
      if (cfg.loss_kind == LossKind::kOneVsAll &&
          (class_counts[size_t(k)] <= 0 || class_counts[size_t(k)] >= num_examples)) {
        continue;
      }
      classes.push_back(k);
    }
  }
  return classes;
}

}  // namespace

template <typename Real>
StepResult<Real> compute_gradients(const ModelParams<Real>& params, const Dataset& dataset,
                                   std::span<const int64_t> examples, std::span<const int32_t> targets,
                                   const TrainConfig& cfg, std::span<const int64_t> class_counts,
                                   int64_t num_examples, Exec exec) {
  if (examples.size() != targets.size()) throw Error(ErrorKind::kShapeMismatch, "examples/targets length");
  if (class_counts.size() != size_t(params.num_classes)) throw Error(ErrorKind::kShapeMismatch, "class_counts size");
  const auto classes = scored_classes(targets, cfg, class_counts, num_examples, params.num_classes);
  const auto images = gather<Real>(dataset, examples);
  auto fwd = forward(params, std::span<const Real>(images.data), examples.size(), exec);
  const auto logits = score_subset(params, fwd.embeddings, classes, exec);

  LossGrad<Real> lg;
  if (cfg.loss_kind == LossKind::kMulticlass) {
    std::vector<int32_t> pos(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
      const auto it = std::lower_bound(classes.begin(), classes.end(), targets[i]);
      if (it == classes.end() || *it != targets[i]) {
        throw Error(ErrorKind::kPositiveNotInSubset, "positive class not in subset");
      }
      pos[i] = static_cast<int32_t>(it - classes.begin());
    }
    lg = sampled_multiclass_loss(logits, pos);
  } else {
    // y restricted to the scored classes: every label of the example counts.
    std::vector<LabelSet> positives(examples.size());
    for (size_t i = 0; i < examples.size(); ++i) {
      for (int32_t label : dataset.examples[size_t(examples[i])].labels) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), label);
        if (it != classes.end() && *it == label) positives[i].push_back(static_cast<int32_t>(it - classes.begin()));
      }
    }
    std::vector<int64_t> counts(classes.size());
    for (size_t j = 0; j < classes.size(); ++j) counts[j] = class_counts[size_t(classes[j])];
    lg = ova_loss(logits, positives, num_examples, counts);
  }

  auto og = output_backward(params, fwd.embeddings, classes, lg.d_logits, exec);
  StepResult<Real> r;
  r.loss = lg.loss;
  r.grads.layers = backward(params, fwd.trace, og.d_embeddings, exec);
  r.grads.classes = classes;
  r.grads.columns = std::move(og.columns);
  return r;
}

template <typename Real>
double validation_error(const ModelParams<Real>& params, const Dataset& val_set, int64_t k) {
  return 1.0 - precision_at_k(params, val_set, k).value;
}

template <typename Real>
TrainResult<Real> train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set,
                        const ModelConfig& model_cfg, int32_t num_classes, const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_set.empty()) throw Error(ErrorKind::kEmptySplit, "empty train split");
  if (val_set.empty()) throw Error(ErrorKind::kEmptySplit, "empty validation split");
  if (cfg.workers > 0) kernels::set_workers(cfg.workers);

  const Rng root(cfg.seed);
  TrainResult<Real> result;
  result.params = init_params<Real>(model_cfg, num_classes, root.split(0).next_u64());
  result.rng = root.split(1);
  result.log.final_lr = cfg.lr_init;
  if (cfg.lr_init < cfg.lr_floor) return result;

  const ClassIndex index = build_index(train_set, num_classes);
  std::vector<int64_t> counts(static_cast<size_t>(num_classes));
  for (int32_t k = 0; k < num_classes; ++k) counts[size_t(k)] = index.count(k);
  const int64_t val_k = cfg.val_k > 0 ? cfg.val_k : default_val_k(num_classes);

  double lr = cfg.lr_init;
  int32_t epochs_at_lr = 0;
  double prev_val = std::numeric_limits<double>::quiet_NaN();
  for (int32_t epoch = 1; epoch <= cfg.max_epochs && lr >= cfg.lr_floor; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    for (int64_t done = 0; done < cfg.epoch_size;) {
      const auto bs = static_cast<int32_t>(std::min<int64_t>(cfg.batch_size, cfg.epoch_size - done));
      const Batch batch = next_batch(index, bs, result.rng);
      const auto step =
          compute_gradients(result.params, train_set, batch.examples, batch.targets, cfg, counts, index.num_examples);
      sgd_step(result.params, step.grads, lr);
      // Multiclass losses are batch means, one-vs-all is a batch sum.
      loss_sum += cfg.loss_kind == LossKind::kMulticlass ? step.loss * bs : step.loss;
      done += bs;
      ++result.log.steps;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss_mean = loss_sum / double(cfg.epoch_size);
    rec.val_error = validation_error(result.params, val_set, val_k);
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ++epochs_at_lr;
    result.log.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (!std::isnan(prev_val) && rec.val_error > prev_val && epochs_at_lr >= cfg.min_epochs_per_lr) {
      lr /= 2.0;
      epochs_at_lr = 0;
    }
    prev_val = rec.val_error;
  }
  result.log.final_lr = lr;
  return result;
}

template <typename Real>
TrainResult<Real> train(const TrainConfig& cfg, const Dataset& dataset, const ModelConfig& model_cfg,
                        int32_t num_classes, const EpochCallback& on_epoch) {
  cfg.validate();
  const DataSplit split = split_by_id(dataset, cfg.validation_fraction, cfg.seed);
  return train<Real>(cfg, split.train, split.validation, model_cfg, num_classes, on_epoch);
}

std::string GradCheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["max_rel_err"] = max_rel_err;
  j["num_params"] = num_params;
  j["worst_param"] = worst_param;
  j["worst_analytic"] = worst_analytic;
  j["worst_numeric"] = worst_numeric;
  return j.dump();
}

ModelConfig tiny_model_config() {
  ModelConfig cfg;
  cfg.in_h = 4;
  cfg.in_w = 4;
  cfg.in_c = 1;
  cfg.layers = parse_layers("fc:12,fc:10,fc:8");
  cfg.dtype = DType::kF64;
  return cfg;
}

GradCheckReport gradient_check(const ModelConfig& model_cfg, LossKind loss_kind, uint64_t seed,
                               const GradCheckOptions& options) {
  const int32_t K = options.num_classes;
  const auto B = size_t(options.batch_size);
  if (K < 2 || B < 1) throw Error(ErrorKind::kInvalidArgument, "grad check needs K >= 2 and batch >= 1");
  const Rng root(seed);
  ModelParams<double> params = init_params<double>(model_cfg, K, root.split(0).next_u64());
  const size_t dim = model_cfg.input_dim();

  // Images as a dataset so the trainer's own gradient path is exercised.
  Dataset data;
  data.height = model_cfg.in_h;
  data.width = model_cfg.in_w;
  data.channels = model_cfg.in_c;
  Rng rng = root.split(1);
  std::vector<int32_t> targets(B);
  std::vector<int64_t> examples(B);
  for (size_t i = 0; i < B; ++i) {
    Example ex;
    ex.id = "g" + std::to_string(i);
    ex.image = ImageTensor(model_cfg.in_h, model_cfg.in_w, model_cfg.in_c);
    targets[i] = static_cast<int32_t>(rng.uniform_below(uint64_t(K)));
    ex.labels = {targets[i]};
    const auto extra = static_cast<int32_t>(rng.uniform_below(uint64_t(K)));
    if (extra != targets[i]) ex.labels.push_back(extra);
    std::sort(ex.labels.begin(), ex.labels.end());
    examples[i] = int64_t(i);
    data.examples.push_back(std::move(ex));
  }
  auto fill_images = [&](Rng& r) {
    for (auto& ex : data.examples) {
      for (auto& v : ex.image.pixels) v = options.degenerate ? 0.0f : static_cast<float>(r.normal());
    }
  };
  if (options.degenerate) {
    for (auto* a : params.arrays()) std::fill(a->values.begin(), a->values.end(), 0.0);
    fill_images(rng);
  } else {
    // Redraw inputs until no pre-activation sits near a rectifier kink.
    for (int attempt = 0; attempt < 50; ++attempt) {
      fill_images(rng);
      std::vector<double> img(B * dim);
      for (size_t i = 0; i < B; ++i) {
        std::copy(data.examples[i].image.pixels.begin(), data.examples[i].image.pixels.end(), img.begin() + long(i * dim));
      }
      const auto fwd = forward(params, std::span<const double>(img), B, Exec::kSerial);
      bool near_kink = false;
      for (const auto& pre : fwd.trace.pre) {
        for (double v : pre) near_kink = near_kink || std::fabs(v) < 1e-3;
      }
      if (!near_kink) break;
    }
  }

  TrainConfig cfg;
  cfg.loss_kind = loss_kind;
  cfg.sampled_targets = true;
  std::vector<int64_t> counts(static_cast<size_t>(K));
  const int64_t n_total = 4 * int64_t(K);
  for (int32_t k = 0; k < K; ++k) counts[size_t(k)] = 1 + k % 3;

  auto loss_at = [&](const ModelParams<double>& p) {
    return compute_gradients(p, data, examples, targets, cfg, counts, n_total, Exec::kSerial).loss;
  };
  const auto analytic = compute_gradients(params, data, examples, targets, cfg, counts, n_total, Exec::kSerial);

  // Flat view of the analytic gradient in params.arrays() order.
  std::vector<std::vector<double>> grad_arrays;
  for (const auto& lp : analytic.grads.layers) {
    if (lp.weight.values.empty()) continue;  // pool layers, skipped by arrays() too
    grad_arrays.push_back(lp.weight.values);
    grad_arrays.push_back(lp.bias.values);
  }
  std::vector<double> out_grad(params.output.values.size(), 0.0);
  for (size_t j = 0; j < analytic.grads.classes.size(); ++j) {
    const auto row = analytic.grads.columns.row(j);
    std::copy(row.begin(), row.end(), out_grad.begin() + long(size_t(analytic.grads.classes[j]) * params.embed_dim()));
  }
  grad_arrays.push_back(out_grad);

  GradCheckReport report;
  auto arrays = params.arrays();
  for (size_t a = 0; a < arrays.size(); ++a) {
    auto& values = arrays[a]->values;
    for (size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + options.step;
      const double up = loss_at(params);
      values[i] = saved - options.step;
      const double down = loss_at(params);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double exact = grad_arrays[a][i];
      const double denom = std::max({std::fabs(exact), std::fabs(numeric), 1e-8});
      const double rel = std::fabs(exact - numeric) / denom;
      ++report.num_params;
      if (rel > report.max_rel_err || report.worst_param.empty()) {
        report.max_rel_err = std::max(report.max_rel_err, rel);
        report.worst_param = arrays[a]->name + "[" + std::to_string(i) + "]";
        report.worst_analytic = exact;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

std::string check_schedule(const std::vector<EpochRecord>& log, double lr_init, double lr_floor,
                           int32_t min_epochs_per_lr, int32_t max_epochs) {
  if (lr_init < lr_floor) return log.empty() ? "" : "log must be empty when lr_init < lr_floor";
  if (log.empty()) return max_epochs == 0 ? "" : "empty log";
  if (log.front().lr != lr_init) return "first epoch does not use lr_init";
  int32_t at_lr = 0;
  bool final_halving = false;
  for (size_t i = 0; i < log.size(); ++i) {
    if (log[i].epoch != int32_t(i) + 1) return "epoch numbers not consecutive at record " + std::to_string(i);
    if (i > 0 && log[i].lr > log[i - 1].lr) return "lr increased at epoch " + std::to_string(log[i].epoch);
    ++at_lr;
    const bool halves_after = i > 0 && log[i].val_error > log[i - 1].val_error && at_lr >= min_epochs_per_lr;
    if (i + 1 < log.size()) {
      const bool halved = log[i + 1].lr < log[i].lr;
      if (halved && log[i + 1].lr != log[i].lr / 2.0) return "lr change is not a halving at epoch " + std::to_string(log[i + 1].epoch);
      if (halved && !halves_after) {
        return "halving after epoch " + std::to_string(log[i].epoch) + " without a qualifying val_error increase";
      }
      if (!halved && halves_after) return "missed halving after epoch " + std::to_string(log[i].epoch);
      if (halved) at_lr = 0;
    } else {
      final_halving = halves_after;
    }
  }
  const double last_lr = final_halving ? log.back().lr / 2.0 : log.back().lr;
  if (int32_t(log.size()) < max_epochs && !(last_lr < lr_floor)) {
    return "stopped before max_epochs with lr >= lr_floor";
  }
  if (int32_t(log.size()) > max_epochs) return "more than max_epochs epochs";
  return "";
}

std::vector<EpochRecord> read_train_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::vector<EpochRecord> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    EpochRecord r;
    r.epoch = j.at("epoch").get<int32_t>();
    r.lr = j.at("lr").get<double>();
    r.train_loss_mean = j.at("train_loss_mean").get<double>();
    r.val_error = j.at("val_error").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    out.push_back(r);
  }
  return out;
}

#define WL_TRAINER_INSTANTIATE(Real)                                                                              \
  template void sgd_step<Real>(ModelParams<Real>&, const Gradients<Real>&, double);                             \
  template StepResult<Real> compute_gradients<Real>(const ModelParams<Real>&, const Dataset&,                   \
                                                    std::span<const int64_t>, std::span<const int32_t>,         \
                                                    const TrainConfig&, std::span<const int64_t>, int64_t, Exec); \
  template double validation_error<Real>(const ModelParams<Real>&, const Dataset&, int64_t);                    \
  template TrainResult<Real> train<Real>(const TrainConfig&, const Dataset&, const Dataset&, const ModelConfig&, \
                                         int32_t, const EpochCallback&);                                        \
  template TrainResult<Real> train<Real>(const TrainConfig&, const Dataset&, const ModelConfig&, int32_t,       \
                                         const EpochCallback&);

WL_TRAINER_INSTANTIATE(float)
WL_TRAINER_INSTANTIATE(double)

}  // namespace weaklearn
