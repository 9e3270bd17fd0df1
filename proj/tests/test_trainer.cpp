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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "test_util.hpp"
#include "weaklearn/error.hpp"
#include "weaklearn/eval.hpp"
#include "weaklearn/trainer.hpp"

using namespace weaklearn;

namespace {

ModelConfig small_model(const std::string& layers = "fc:16,fc:8") {
  ModelConfig cfg;
  cfg.in_h = cfg.in_w = 4;
  cfg.in_c = 1;
  cfg.layers = parse_layers(layers);
  cfg.dtype = DType::kF64;
  return cfg;
}

SynthData small_synth(int64_t n = 600, int32_t K = 6) {
  SynthConfig cfg;
  cfg.K = K;
  cfg.image_size = 4;
  cfg.num_examples = n;
  cfg.words_per_image = 1;
  cfg.noise_sigma = 0.3;
  return generate_synthetic(cfg);
}

Gradients<double> zero_grads(const ModelParams<double>& p, std::vector<int32_t> classes) {
  Gradients<double> g;
  for (const auto& l : p.layers) {
    LayerParams<double> z = l;
    std::fill(z.weight.values.begin(), z.weight.values.end(), 0.0);
    std::fill(z.bias.values.begin(), z.bias.values.end(), 0.0);
    g.layers.push_back(std::move(z));
  }
  g.columns = Matrix<double>(classes.size(), p.embed_dim());
  g.classes = std::move(classes);
  return g;
}

bool same_bits(const ModelParams<double>& a, const ModelParams<double>& b) {
  const auto x = a.arrays(), y = b.arrays();
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i]->values.size() != y[i]->values.size()) return false;
    if (std::memcmp(x[i]->values.data(), y[i]->values.data(), x[i]->values.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

TEST(SgdStep, ZeroGradientLeavesParamsUnchanged) {
  auto p = init_params<double>(small_model(), 7, 1);
  const auto before = p;
  sgd_step(p, zero_grads(p, {0, 2, 5}), 0.1);
  EXPECT_TRUE(same_bits(p, before));
}

TEST(SgdStep, SingleColumnEntry) {
  auto p = init_params<double>(small_model(), 7, 2);
  const auto before = p;
  auto g = zero_grads(p, {3});
  g.columns(0, 4) = 0.625;
  sgd_step(p, g, 1.0);
  for (int32_t k = 0; k < 7; ++k) {
    for (size_t e = 0; e < p.embed_dim(); ++e) {
      const double expect = before.column(k)[e] - ((k == 3 && e == 4) ? 0.625 : 0.0);
      EXPECT_EQ(p.column(k)[e], expect);
    }
  }
  for (size_t l = 0; l < p.layers.size(); ++l) EXPECT_EQ(p.layers[l].weight.values, before.layers[l].weight.values);
}

TEST(SgdStep, RandomStepMatchesDenseOracle) {
  auto p = init_params<double>(small_model(), 9, 3);
  const auto before = p;
  Rng rng(4);
  auto g = zero_grads(p, {1, 4, 8});
  for (auto& l : g.layers) {
    for (double& v : l.weight.values) v = rng.normal();
    for (double& v : l.bias.values) v = rng.normal();
  }
  for (double& v : g.columns.data) v = rng.normal();
  const double lr = 0.37;
  sgd_step(p, g, lr);

  // Dense oracle: scatter the column gradients into a full K x E matrix.
  std::vector<double> dense(before.output.values.size(), 0.0);
  for (size_t j = 0; j < g.classes.size(); ++j)
    for (size_t e = 0; e < p.embed_dim(); ++e) dense[size_t(g.classes[j]) * p.embed_dim() + e] = g.columns(j, e);
  for (size_t i = 0; i < dense.size(); ++i) {
    const size_t k = i / p.embed_dim();
    const bool touched = k == 1 || k == 4 || k == 8;
    if (touched) {
      EXPECT_EQ(p.output.values[i], before.output.values[i] - lr * dense[i]);
    } else {
      EXPECT_EQ(std::memcmp(&p.output.values[i], &before.output.values[i], sizeof(double)), 0);
    }
  }
  for (size_t l = 0; l < p.layers.size(); ++l)
    for (size_t i = 0; i < p.layers[l].weight.values.size(); ++i)
      EXPECT_EQ(p.layers[l].weight.values[i], before.layers[l].weight.values[i] - lr * g.layers[l].weight.values[i]);
}

TEST(SgdStep, RejectsBadShapes) {
  auto p = init_params<double>(small_model(), 5, 5);
  auto g = zero_grads(p, {3, 1});
  EXPECT_THROW(sgd_step(p, g, 0.1), Error);
  g = zero_grads(p, {1, 5});
  EXPECT_THROW(sgd_step(p, g, 0.1), Error);
  g = zero_grads(p, {1});
  g.layers.pop_back();
  try {
    sgd_step(p, g, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShapeMismatch);
  }
}

TEST(Train, LrBelowFloorReturnsEmptyLog) {
  const auto data = small_synth(200);
  TrainConfig cfg;
  cfg.lr_init = 1e-7;
  cfg.lr_floor = 1e-6;
  const auto r = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  EXPECT_TRUE(r.log.epochs.empty());
  EXPECT_EQ(r.log.steps, 0);
  EXPECT_TRUE(same_bits(r.params, init_params<double>(small_model(), data.dict.size(), Rng(cfg.seed).split(0).next_u64())));
}

TEST(Train, DeterministicGivenSeed) {
  const auto data = small_synth();
  TrainConfig cfg;
  cfg.epoch_size = 256;
  cfg.max_epochs = 3;
  cfg.batch_size = 32;
  const auto a = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  const auto b = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  EXPECT_TRUE(same_bits(a.params, b.params));
  ASSERT_EQ(a.log.epochs.size(), 3u);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(a.log.epochs[i].val_error, b.log.epochs[i].val_error);
  cfg.seed = 2;
  const auto c = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  EXPECT_FALSE(same_bits(a.params, c.params));
}

TEST(Train, WorkerCountDoesNotChangeResult) {
  const auto data = small_synth();
  TrainConfig cfg;
  cfg.epoch_size = 128;
  cfg.max_epochs = 2;
  cfg.batch_size = 32;
  cfg.workers = 1;
  const auto a = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  cfg.workers = 3;
  const auto b = train<double>(cfg, data.dataset, small_model(), data.dict.size());
  kernels::set_workers(0);
  EXPECT_TRUE(same_bits(a.params, b.params));
}

TEST(Train, UnsampledColumnsKeepInitialization) {
  // Classes 6..9 have no examples and must never be updated.
  const auto data = small_synth(300, 6);
  TrainConfig cfg;
  cfg.epoch_size = 256;
  cfg.max_epochs = 2;
  for (LossKind kind : {LossKind::kMulticlass, LossKind::kOneVsAll}) {
    cfg.loss_kind = kind;
    const auto r = train<double>(cfg, data.dataset, small_model(), 10);
    const auto init = init_params<double>(small_model(), 10, Rng(cfg.seed).split(0).next_u64());
    for (int32_t k = 6; k < 10; ++k) {
      EXPECT_EQ(std::memcmp(r.params.column(k).data(), init.column(k).data(), init.embed_dim() * sizeof(double)), 0);
    }
    EXPECT_NE(std::memcmp(r.params.column(0).data(), init.column(0).data(), init.embed_dim() * sizeof(double)), 0);
  }
}

TEST(Train, LogSatisfiesScheduleContract) {
  const auto data = small_synth();
  TrainConfig cfg;
  cfg.epoch_size = 128;
  cfg.batch_size = 16;
  cfg.max_epochs = 30;
  cfg.min_epochs_per_lr = 2;
  cfg.val_k = 1;
  cfg.lr_init = 0.5;
  std::vector<EpochRecord> seen;
  const auto r = train<double>(cfg, data.dataset, small_model(), data.dict.size(),
                               [&](const EpochRecord& e) { seen.push_back(e); });
  EXPECT_EQ(seen.size(), r.log.epochs.size());
  EXPECT_EQ(check_schedule(r.log.epochs, cfg.lr_init, cfg.lr_floor, cfg.min_epochs_per_lr, cfg.max_epochs), "");
  for (const auto& e : r.log.epochs) {
    EXPECT_GE(e.val_error, 0.0);
    EXPECT_LE(e.val_error, 1.0);
    EXPECT_EQ(std::log2(cfg.lr_init / e.lr), std::round(std::log2(cfg.lr_init / e.lr)));
  }
}

TEST(Train, EmptySplitsAreErrors) {
  const auto data = small_synth(50);
  Dataset empty;
  empty.height = empty.width = 4;
  empty.channels = 1;
  try {
    train<double>(TrainConfig{}, data.dataset, empty, small_model(), data.dict.size());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptySplit);
  }
  EXPECT_THROW(train<double>(TrainConfig{}, empty, data.dataset, small_model(), data.dict.size()), Error);
}

TEST(SplitById, DisjointStableAndNearFraction) {
  const auto data = small_synth(4000);
  const auto s = split_by_id(data.dataset, 0.1, 1);
  EXPECT_EQ(s.train.size() + s.validation.size(), 4000u);
  std::set<std::string> train_ids;
  for (const auto& ex : s.train.examples) train_ids.insert(ex.id);
  for (const auto& ex : s.validation.examples) EXPECT_EQ(train_ids.count(ex.id), 0u);
  EXPECT_NEAR(double(s.validation.size()) / 4000.0, 0.1, 0.015);

  // Membership depends on the id only, not on file order.
  Dataset reversed = data.dataset;
  std::reverse(reversed.examples.begin(), reversed.examples.end());
  const auto t = split_by_id(reversed, 0.1, 1);
  std::set<std::string> a, b;
  for (const auto& ex : s.validation.examples) a.insert(ex.id);
  for (const auto& ex : t.validation.examples) b.insert(ex.id);
  EXPECT_EQ(a, b);
}

TEST(ValidationError, ScorerExamples) {
  Rng rng(8);
  const int32_t K = 20;
  const size_t n = 10000;
  std::vector<LabelSet> labels(n);
  Matrix<double> perfect(n, K), random(n, K), adversarial(n, K);
  for (size_t i = 0; i < n; ++i) {
    labels[i] = {int32_t(rng.uniform_below(K))};
    for (int32_t k = 0; k < K; ++k) {
      const bool pos = k == labels[i][0];
      perfect(i, size_t(k)) = pos ? 1e300 : 0.0;
      adversarial(i, size_t(k)) = pos ? -1e300 : 0.0;
      random(i, size_t(k)) = rng.uniform01();
    }
  }
  EXPECT_EQ(1.0 - precision_at_k(perfect, labels, 1).value, 0.0);
  EXPECT_NEAR(1.0 - precision_at_k(random, labels, 1).value, 0.95, 0.02);
  EXPECT_EQ(1.0 - precision_at_k(adversarial, labels, 1).value, 1.0);
  EXPECT_EQ(1.0 - precision_at_k(adversarial, labels, K - 1).value, 1.0);
}

TEST(ValidationError, MatchesBruteForceOnModel) {
  const auto data = small_synth(200);
  const auto p = init_params<double>(small_model(), data.dict.size(), 9);
  for (int64_t k : {1, 3}) {
    double hits = 0.0;
    for (const auto& ex : data.dataset.examples) {
      const auto x = to_real<double>(ex.image.pixels);
      const auto fwd = forward(p, std::span<const double>(x), 1, Exec::kSerial);
      std::vector<std::pair<double, int32_t>> s;
      for (int32_t c = 0; c < p.num_classes; ++c) {
        double dot = 0.0;
        for (size_t e = 0; e < p.embed_dim(); ++e) dot += p.column(c)[e] * fwd.embeddings(0, e);
        s.emplace_back(-dot, c);
      }
      std::sort(s.begin(), s.end());
      for (int64_t j = 0; j < k; ++j)
        hits += std::count(ex.labels.begin(), ex.labels.end(), s[size_t(j)].second) / double(k);
    }
    EXPECT_NEAR(validation_error(p, data.dataset, k), 1.0 - hits / double(data.dataset.size()), 1e-12);
  }
  EXPECT_EQ(default_val_k(20), 10);
  EXPECT_EQ(default_val_k(5), 4);
}

TEST(GradientCheck, BothLossesAgreeWithFiniteDifferences) {
  for (LossKind kind : {LossKind::kMulticlass, LossKind::kOneVsAll}) {
    const auto r = gradient_check(tiny_model_config(), kind, 1);
    EXPECT_LT(r.num_params, 1000);
    EXPECT_EQ(r.num_params, int64_t(init_params<double>(tiny_model_config(), 5, 0).parameter_count()));
    EXPECT_LT(r.max_rel_err, 1e-5) << loss_kind_name(kind) << " " << r.to_json();
  }
  const auto conv = gradient_check(small_model("conv:3x2,pool:2,fc:6"), LossKind::kMulticlass, 2);
  EXPECT_LT(conv.max_rel_err, 1e-5) << conv.to_json();
}

TEST(GradientCheck, DegenerateModelIsExactlyZero) {
  GradCheckOptions opt;
  opt.degenerate = true;
  for (LossKind kind : {LossKind::kMulticlass, LossKind::kOneVsAll}) {
    const auto r = gradient_check(tiny_model_config(), kind, 3, opt);
    EXPECT_EQ(r.max_rel_err, 0.0);
  }
}

TEST(CheckSchedule, DetectsViolations) {
  auto rec = [](int32_t e, double lr, double v) {
    EpochRecord r;
    r.epoch = e;
    r.lr = lr;
    r.val_error = v;
    return r;
  };
  // min_epochs 2: increase at epoch 3 triggers a halving for epoch 4.
  std::vector<EpochRecord> ok{rec(1, 0.1, 0.5), rec(2, 0.1, 0.4), rec(3, 0.1, 0.45), rec(4, 0.05, 0.3)};
  EXPECT_EQ(check_schedule(ok, 0.1, 1e-6, 2, 4), "");
  auto missed = ok;
  missed[3].lr = 0.1;
  EXPECT_NE(check_schedule(missed, 0.1, 1e-6, 2, 4), "");
  auto early = ok;
  early[1].val_error = 0.6;
  early[2].lr = 0.05;
  early[3].lr = 0.05;
  early[2].val_error = 0.5;
  EXPECT_NE(check_schedule(early, 0.1, 1e-6, 3, 4), "");
  auto third = ok;
  third[3].lr = 0.1 / 3.0;
  EXPECT_NE(check_schedule(third, 0.1, 1e-6, 2, 4), "");
  EXPECT_NE(check_schedule(ok, 0.1, 1e-6, 2, 10), "");  // stopped early with lr above the floor
  EXPECT_EQ(check_schedule({}, 1e-7, 1e-6, 2, 10), "");
}

TEST(TrainLogIo, RoundTrip) {
  testing_util::TempDir dir;
  EpochRecord r;
  r.epoch = 1;
  r.lr = 0.1;
  r.train_loss_mean = 2.5;
  r.val_error = 0.25;
  r.wall_ms = 12.0;
  {
    std::ofstream out(dir.file("log.jsonl"));
    out << r.to_json() << '\n';
    r.epoch = 2;
    r.lr = 0.05;
    out << r.to_json() << '\n';
  }
  const auto log = read_train_log(dir.file("log.jsonl"));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].lr, 0.05);
  EXPECT_EQ(log[0].val_error, 0.25);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.validation_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_loss_kind("ova"), LossKind::kOneVsAll);
  EXPECT_THROW(parse_loss_kind("hinge"), Error);
}
