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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <span>
#include <vector>

#include <unistd.h>

#include "weaklearn/cli.hpp"
#include "weaklearn/data.hpp"
#include "weaklearn/eval.hpp"
#include "weaklearn/loss.hpp"
#include "weaklearn/sampler.hpp"
#include "weaklearn/trainer.hpp"

using namespace weaklearn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

ModelConfig preset_model(const Dataset& d) {
  ModelConfig mc;
  mc.in_h = d.height;
  mc.in_w = d.width;
  mc.in_c = d.channels;
  mc.layers = parse_layers(kPresetLayers);
  mc.dtype = DType::kF32;
  return mc;
}

// Logs of every training run, checked together by criterion 10.
struct NamedLog {
  std::string name;
  TrainConfig cfg;
  std::vector<EpochRecord> epochs;
};
std::vector<NamedLog> g_logs;

// ---------------------------------------------------------------------------

Outcome gradient_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelConfig mc = tiny_model_config();
  double worst = 0.0;
  int64_t params = 0;
  for (LossKind kind : {LossKind::kMulticlass, LossKind::kOneVsAll}) {
    const auto r = gradient_check(mc, kind, 1);
    worst = std::max(worst, r.max_rel_err);
    params = r.num_params;
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-5 && params <= 1000 && secs < 10.0,
          fmt("max rel err %.3g over %lld params (3 layers, f64), %.2f s", worst, (long long)params, secs)};
}

Outcome bound_verification() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  int upper = 0, lower = 0;
  for (int c = 0; c < 100; ++c) {
    const auto K = int64_t(2 + rng.uniform_below(49));
    const double scale = 0.5 + 2.5 * rng.uniform01();
    std::vector<double> logits(static_cast<size_t>(K));
    for (double& l : logits) l = scale * rng.normal();
    const auto positive = int32_t(rng.uniform_below(uint64_t(K)));
    bool up = true, lo = true;
    for (int64_t m : {int64_t(1), std::max<int64_t>(1, K / 4), std::max<int64_t>(1, K / 2), K}) {
      const auto r = check_bounds(logits, m, 100000, uint64_t(c), positive);
      up = up && r.upper_holds;
      lo = lo && r.lower_holds;
    }
    upper += up;
    lower += lo;
  }

  // K = 10, m = 3: every subset containing the positive is equally likely.
  std::vector<double> logits(10);
  for (double& l : logits) l = 1.5 * rng.normal();
  const double lo_l = *std::min_element(logits.begin(), logits.end());
  std::vector<long double> s(10);
  for (size_t k = 0; k < 10; ++k) s[k] = std::exp((long double)(logits[k] - lo_l));
  long double exact = 0;
  int subsets = 0;
  for (int a = 1; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b, ++subsets) exact += std::log(s[0] + s[size_t(a)] + s[size_t(b)]);
  exact /= subsets;
  const auto r = check_bounds(logits, 3, 100000, 99, 0);
  const double z = std::fabs(r.mc_mean - double(exact)) / r.mc_stderr;
  const double secs = seconds_since(t0);
  return {upper == 100 && lower == 100 && z <= 3.0 && secs < 120.0,
          fmt("upper %d/100, lower %d/100 (each over m in {1,K/4,K/2,K}, 1e5 trials); K=10 m=3 MC %.6f vs "
              "exhaustive %.6f (%.2f stderr); %.1f s",
              upper, lower, r.mc_mean, double(exact), z, secs)};
}

struct PresetRuns {
  SynthData data;
  DataSplit split;
  double oracle = 0.0;
  double sampled_p1 = 0.0, full_p1 = 0.0;
  double sampled_secs = 0.0, full_secs = 0.0;
};

PresetRuns run_preset() {
  PresetRuns p;
  p.data = generate_synthetic(SynthConfig{});
  const TrainConfig cfg;
  p.split = split_by_id(p.data.dataset, cfg.validation_fraction, cfg.seed);
  p.oracle = nearest_prototype_accuracy(p.split.validation, p.data.prototypes);
  std::printf("  preset: %zu train / %zu validation examples, nearest-prototype precision@1 %.4f\n",
              p.split.train.size(), p.split.validation.size(), p.oracle);
  std::fflush(stdout);
  const ModelConfig mc = preset_model(p.data.dataset);
  for (bool sampled : {true, false}) {
    TrainConfig c = cfg;
    c.sampled_targets = sampled;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = train<float>(c, p.split.train, p.split.validation, mc, int32_t(p.data.dict.size()));
    const double secs = seconds_since(t0);
    const double p1 = precision_at_k(r.params, p.split.validation, 1).value;
    (sampled ? p.sampled_p1 : p.full_p1) = p1;
    (sampled ? p.sampled_secs : p.full_secs) = secs;
    g_logs.push_back({sampled ? "preset sampled" : "preset full softmax", c, r.log.epochs});
    std::printf("  preset %s: %zu epochs, final lr %g, val precision@1 %.4f, %.1f s\n",
                sampled ? "sampled" : "full softmax", r.log.epochs.size(), r.log.final_lr, p1, secs);
    std::fflush(stdout);
  }
  return p;
}

Outcome sampled_full_consistency(const PresetRuns& p) {
  const double gap = std::fabs(p.sampled_p1 - p.full_p1);
  return {gap <= 0.05 && p.sampled_secs < 300 && p.full_secs < 300,
          fmt("sampled %.4f vs full softmax %.4f (gap %.4f); runs %.1f s and %.1f s", p.sampled_p1, p.full_p1, gap,
              p.sampled_secs, p.full_secs)};
}

Outcome learnability(const PresetRuns& p) {
  return {p.sampled_p1 >= 0.90 && p.sampled_secs < 300,
          fmt("val precision@1 %.4f (oracle ceiling %.4f, chance 0.05), %.1f s", p.sampled_p1, p.oracle,
              p.sampled_secs)};
}

Outcome sampler_uniformity() {
  Dataset d;
  d.height = d.width = d.channels = 1;
  Rng rng(5);
  for (int32_t k = 0; k < 10; ++k) {
    const auto n = int64_t(std::llround(std::pow(10.0, 3.0 * k / 9.0)));  // 1 .. 1000
    for (int64_t i = 0; i < n; ++i) {
      Example ex;
      ex.id = "c" + std::to_string(k) + "_" + std::to_string(i);
      ex.image = ImageTensor(1, 1, 1);
      ex.labels = {k};
      if (rng.uniform01() < 0.3) {
        const auto extra = int32_t(rng.uniform_below(10));
        if (extra != k) ex.labels.push_back(extra);
        std::sort(ex.labels.begin(), ex.labels.end());
      }
      d.examples.push_back(std::move(ex));
    }
  }
  const ClassIndex index = build_index(d, 10);
  int64_t nmin = index.count(0), nmax = index.count(0);
  for (int32_t k = 1; k < 10; ++k) nmin = std::min(nmin, index.count(k)), nmax = std::max(nmax, index.count(k));
  std::vector<double> counts(10);
  int64_t bad = 0;
  Rng srng(6);
  for (int b = 0; b < 100; ++b) {
    const Batch batch = next_batch(index, 1000, srng);
    for (size_t i = 0; i < batch.size(); ++i) {
      counts[size_t(batch.targets[i])] += 1;
      const auto& labels = d.examples[size_t(batch.examples[i])].labels;
      bad += !std::binary_search(labels.begin(), labels.end(), batch.targets[i]);
    }
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - 1e4) * (c - 1e4) / 1e4;
  const double pval = boost::math::cdf(boost::math::complement(boost::math::chi_squared(9), chi2));
  return {pval > 0.01 && bad == 0,
          fmt("N_k from %lld to %lld, 1e5 draws, chi2 %.2f (p = %.3f), target not in labels: %lld", (long long)nmin,
              (long long)nmax, chi2, pval, (long long)bad)};
}

Outcome sparse_updates() {
  SynthConfig sc;
  sc.num_examples = 2000;
  const SynthData data = generate_synthetic(sc);
  const int32_t K = int32_t(data.dict.size()) + 5;  // five classes without examples
  ModelConfig mc = preset_model(data.dataset);
  const ClassIndex index = build_index(data.dataset, K);
  std::vector<int64_t> counts(static_cast<size_t>(K));
  for (int32_t k = 0; k < K; ++k) counts[size_t(k)] = index.count(k);

  auto params = init_params<float>(mc, K, 11);
  const auto init = params;
  TrainConfig cfg;
  Rng rng(12);
  std::set<int32_t> sampled;
  int64_t mismatches = 0;
  const size_t E = params.embed_dim();
  for (int step = 0; step < 100; ++step) {
    const Batch batch = next_batch(index, cfg.batch_size, rng);
    const auto g = compute_gradients(params, data.dataset, batch.examples, batch.targets, cfg, counts,
                                     index.num_examples);
    // Dense oracle: every column updated with a gradient that is zero off the batch classes.
    std::vector<float> dense(params.output.values.size(), 0.0f);
    for (size_t j = 0; j < g.grads.classes.size(); ++j)
      for (size_t e = 0; e < E; ++e) dense[size_t(g.grads.classes[j]) * E + e] = g.grads.columns(j, e);
    std::vector<float> oracle = params.output.values;
    const auto lr = static_cast<float>(cfg.lr_init);
    for (size_t i = 0; i < oracle.size(); ++i) oracle[i] -= lr * dense[i];
    const auto before = params.output.values;
    sgd_step(params, g.grads, cfg.lr_init);
    for (size_t i = 0; i < oracle.size(); ++i) {
      const bool touched = std::binary_search(g.grads.classes.begin(), g.grads.classes.end(), int32_t(i / E));
      const float expect = touched ? oracle[i] : before[i];
      mismatches += std::memcmp(&expect, &params.output.values[i], sizeof(float)) != 0;
    }
    sampled.insert(g.grads.classes.begin(), g.grads.classes.end());
  }
  int untouched = 0, untouched_equal = 0;
  for (int32_t k = 0; k < K; ++k) {
    if (sampled.count(k)) continue;
    ++untouched;
    untouched_equal += std::memcmp(params.column(k).data(), init.column(k).data(), E * sizeof(float)) == 0;
  }
  return {mismatches == 0 && untouched >= 5 && untouched_equal == untouched,
          fmt("100 steps: %d never-sampled columns, %d bitwise at init; %lld entries differ from the dense oracle",
              untouched, untouched_equal, (long long)mismatches)};
}

Outcome learning_curve() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthConfig base;
  base.noise_sigma = 3.0;
  SynthConfig tcfg = base;
  tcfg.first_example = 100000;
  tcfg.num_examples = 4000;
  const SynthData test_raw = generate_synthetic(tcfg);
  std::vector<double> p1;
  std::string detail;
  for (int64_t n : {int64_t(1000), int64_t(10000), int64_t(100000)}) {
    SynthConfig c = base;
    c.num_examples = n;
    const SynthData data = generate_synthetic(c);
    const Dataset test = relabel(test_raw, data.dict);
    TrainConfig cfg;
    cfg.max_epochs = 30;
    const auto r = train<float>(cfg, data.dataset, preset_model(data.dataset), int32_t(data.dict.size()));
    g_logs.push_back({"learning curve n=" + std::to_string(n), cfg, r.log.epochs});
    p1.push_back(precision_at_k(r.params, test, 1).value);
    detail += fmt("%s%lld: %.4f", detail.empty() ? "" : ", ", (long long)n, p1.back());
    if (n == 1000) detail += fmt(" (oracle %.4f)", nearest_prototype_accuracy(test, data.prototypes));
  }
  const bool ok = p1[1] >= p1[0] - 0.02 && p1[2] >= p1[1] - 0.02;
  return {ok, "test precision@1 by training-set size, noise 3.0, 30 epochs: " + detail +
                  fmt("; %.1f s", seconds_since(t0))};
}

// Deterministic oracles, written without the library's helpers.
double cos_ld(std::span<const double> a, std::span<const double> b) {
  long double ab = 0, aa = 0, bb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += (long double)a[i] * b[i];
    aa += (long double)a[i] * a[i];
    bb += (long double)b[i] * b[i];
  }
  return double(ab / std::sqrt(aa * bb));
}

Dictionary numbered_dict(size_t n) {
  Dictionary d;
  for (size_t i = 0; i < n; ++i) d.words.push_back(std::string("w") + char('a' + i / 26) + char('a' + i % 26));
  d.counts.assign(n, 1);
  d.K = int64_t(n);
  d.rebuild_lookup();
  return d;
}

Outcome eval_oracles() {
  Rng rng(31);
  std::vector<std::string> failures;
  const size_t K = 50;

  // precision@k with heavy ties.
  const size_t n = 400;
  Matrix<double> s(n, K);
  std::vector<LabelSet> labels(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < K; ++k) {
      s(i, k) = double(rng.uniform_below(8));
      if (rng.uniform01() < 0.1) labels[i].push_back(int32_t(k));
    }
  }
  for (int64_t k : {1, 5, 10}) {
    int64_t hits = 0;
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<double, int32_t>> order;
      for (size_t c = 0; c < K; ++c) order.emplace_back(-s(i, c), int32_t(c));
      std::sort(order.begin(), order.end());
      for (int64_t j = 0; j < k; ++j)
        hits += std::count(labels[i].begin(), labels[i].end(), order[size_t(j)].second);
    }
    const double v = precision_at_k(s, labels, k).value;
    if (std::llround(v * double(n) * double(k)) != hits) failures.push_back(fmt("precision@%lld", (long long)k));
  }

  // Analogy over random vectors.
  Matrix<double> w(K, 8);
  for (double& v : w.data) v = rng.normal();
  const Dictionary dict = numbered_dict(K);
  std::vector<AnalogyQuestion> qs;
  int correct = 0;
  for (int q = 0; q < 50; ++q) {
    size_t a = rng.uniform_below(K), b = rng.uniform_below(K), c = rng.uniform_below(K), d = rng.uniform_below(K);
    std::vector<double> t(8);
    auto unit = [&](size_t r, size_t e) {
      double nn = 0;
      for (size_t j = 0; j < 8; ++j) nn += w(r, j) * w(r, j);
      return w(r, e) / std::sqrt(nn);
    };
    for (size_t e = 0; e < 8; ++e) t[e] = unit(b, e) - unit(a, e) + unit(c, e);
    size_t best = 0;
    double best_s = -3;
    for (size_t k = 0; k < K; ++k) {
      if (k == a || k == b || k == c) continue;
      const double sc = cos_ld(t, w.row(k));
      if (sc > best_s) best_s = sc, best = k;
    }
    if (q % 2 == 0) d = best;
    correct += d == best;
    qs.push_back({dict.words[a], dict.words[b], dict.words[c], dict.words[d]});
  }
  if (analogy_accuracy(w, qs, dict).value != correct / 50.0) failures.push_back("analogy");

  // Spearman: 40 random pairs with tied ratings.
  std::vector<SimilarityPair> pairs;
  std::vector<double> mc, hr;
  for (int i = 0; i < 40; ++i) {
    const size_t a = rng.uniform_below(K), b = (a + 1 + rng.uniform_below(K - 1)) % K;
    pairs.push_back({dict.words[a], dict.words[b], double(rng.uniform_below(6))});
    mc.push_back(cos_ld(w.row(a), w.row(b)));
    hr.push_back(pairs.back().rating);
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double below = 0, equal = 0;
      for (double x : v) below += x < v[i], equal += x == v[i];
      r[i] = below + (equal + 1) / 2.0;
    }
    return r;
  };
  const auto rm = ranks(mc), rh = ranks(hr);
  long double mx = 0, my = 0, sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rm.size(); ++i) mx += rm[i], my += rh[i];
  mx /= rm.size();
  my /= rm.size();
  for (size_t i = 0; i < rm.size(); ++i) {
    sxy += (rm[i] - mx) * (rh[i] - my);
    sxx += (rm[i] - mx) * (rm[i] - mx);
    syy += (rh[i] - my) * (rh[i] - my);
  }
  const double rho = double(sxy / std::sqrt(sxx * syy));
  const double got = spearman_similarity(w, pairs, dict).value;
  if (std::fabs(got - rho) > 1e-12) failures.push_back(fmt("spearman (%.15g vs %.15g)", got, rho));

  // Translation, both directions.
  std::vector<TranslationPair> tp;
  for (size_t i = 0; i < 20; ++i) tp.push_back({dict.words[i], dict.words[25 + (i * 7) % 20]});
  for (int64_t k : {1, 5}) {
    for (auto dir : {Direction::kSourceToTarget, Direction::kTargetToSource}) {
      const bool fwd = dir == Direction::kSourceToTarget;
      int hits = 0;
      for (const auto& p : tp) {
        const int32_t q = dict.find(fwd ? p.source : p.target), ans = dict.find(fwd ? p.target : p.source);
        std::vector<std::pair<double, int32_t>> order;
        for (const auto& c : tp) {
          const int32_t cand = dict.find(fwd ? c.target : c.source);
          order.emplace_back(-cos_ld(w.row(size_t(q)), w.row(size_t(cand))), cand);
        }
        std::sort(order.begin(), order.end());
        for (int64_t j = 0; j < k; ++j) hits += order[size_t(j)].second == ans;
      }
      if (translation_precision(w, tp, dict, dir, k).value != hits / 20.0)
        failures.push_back(fmt("translation %s@%lld", fwd ? "src2tgt" : "tgt2src", (long long)k));
    }
  }
  std::string detail = "precision@{1,5,10}, analogy (50 questions), Spearman (40 pairs), translation (20 pairs) at K=50";
  if (!failures.empty()) {
    detail += "; mismatch:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "weaklearn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = dispatch(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& work) {
  std::vector<std::string> ckpts, metrics;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = work / ("run" + std::to_string(run));
    const std::string data = (dir / "data").string(), model = (dir / "model").string();
    const std::vector<std::vector<std::string>> steps{
        {"gen-synth", "--num-examples", "3000", "--test-examples", "500", "--out-dir", data, "--seed", "7"},
        {"build-dict", "--data-dir", data, "--k", "20", "--stop", "5", "--out-dir", data},
        {"train", "--data-dir", data, "--out-dir", model, "--epochs", "5", "--epoch-size", "3000", "--seed", "3"},
        {"eval-words", "--ckpt", model, "--data", data + "/test", "--k", "1"}};
    for (const auto& s : steps) {
      const CliRun r = cli(s);
      if (r.code != 0) return {false, "command " + s[0] + " failed: " + r.err};
      if (s[0] == "eval-words") metrics.push_back(r.out);
    }
    ckpts.push_back(slurp(model + "/model.wlckpt"));
    TrainConfig cfg;
    cfg.max_epochs = 5;
    g_logs.push_back({"cli run " + std::to_string(run), cfg, read_train_log(model + "/train_log.jsonl")});
  }
  const bool same = !ckpts[0].empty() && ckpts[0] == ckpts[1] && metrics[0] == metrics[1];
  std::string m = metrics[0];
  if (!m.empty() && m.back() == '\n') m.pop_back();
  return {same, fmt("checkpoints %zu bytes, %s; metrics %s: %s", ckpts[0].size(),
                    ckpts[0] == ckpts[1] ? "identical" : "DIFFER", metrics[0] == metrics[1] ? "identical" : "DIFFER",
                    m.c_str())};
}

Outcome schedule_contract() {
  // A run that actually halves: noisy data, precision@1 validation, short epochs.
  SynthConfig sc;
  sc.noise_sigma = 3.0;
  const SynthData data = generate_synthetic(sc);
  TrainConfig cfg;
  cfg.epoch_size = 2000;
  cfg.val_k = 1;
  const auto r = train<float>(cfg, data.dataset, preset_model(data.dataset), int32_t(data.dict.size()));
  g_logs.push_back({"halving run", cfg, r.log.epochs});
  int halvings = 0;
  for (size_t i = 1; i < r.log.epochs.size(); ++i) halvings += r.log.epochs[i].lr < r.log.epochs[i - 1].lr;

  std::string detail;
  bool ok = halvings > 0;
  for (const auto& l : g_logs) {
    const std::string v = check_schedule(l.epochs, l.cfg.lr_init, l.cfg.lr_floor, l.cfg.min_epochs_per_lr,
                                         l.cfg.max_epochs);
    if (!v.empty()) {
      ok = false;
      detail += "; " + l.name + ": " + v;
    }
  }
  return {ok, fmt("%zu logs valid; halving run: %zu epochs, %d halvings, final lr %g (%s)", g_logs.size(),
                  r.log.epochs.size(), halvings, r.log.final_lr,
                  r.log.final_lr < cfg.lr_floor ? "stopped below floor" : "stopped at max_epochs") +
                  detail};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("weaklearn_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gradient correctness", gradient_correctness);
  report(2, "bound verification", bound_verification);
  PresetRuns preset;
  bool preset_ok = true;
  try {
    preset = run_preset();
  } catch (const std::exception& e) {
    preset_ok = false;
    std::printf("  preset training failed: %s\n", e.what());
  }
  report(3, "sampled vs full softmax", [&] { return preset_ok ? sampled_full_consistency(preset) : Outcome{}; });
  report(4, "learnability", [&] { return preset_ok ? learnability(preset) : Outcome{}; });
  report(5, "sampler uniformity", sampler_uniformity);
  report(6, "sparse updates", sparse_updates);
  report(7, "learning curve", learning_curve);
  report(8, "eval oracle equivalence", eval_oracles);
  report(9, "determinism", [&] { return determinism(work); });
  report(10, "lr schedule contract", schedule_contract);

  std::error_code ec;
  fs::remove_all(work, ec);
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
