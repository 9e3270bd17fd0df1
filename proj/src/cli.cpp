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

#include "weaklearn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "weaklearn/checkpoint.hpp"
#include "weaklearn/config.hpp"
#include "weaklearn/data.hpp"
#include "weaklearn/error.hpp"
#include "weaklearn/eval.hpp"
#include "weaklearn/kernels.hpp"
#include "weaklearn/loss.hpp"
#include "weaklearn/trainer.hpp"

#ifndef WEAKLEARN_VERSION
#define WEAKLEARN_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace weaklearn {

namespace {

constexpr const char* kCheckpointName = "model.wlckpt";
constexpr const char* kDictName = "dict.txt";
constexpr const char* kLogName = "train_log.jsonl";

struct Options {
  // shared
  uint64_t seed = 7;
  bool seed_given = false;
  int32_t workers = 0;
  std::string out_dir, data_dir, dict_path, ckpt, config_path;
  // gen-synth
  SynthConfig synth;
  int64_t test_examples = 2000;
  // build-dict
  std::string captions;
  int64_t dict_k = 20, stop_count = 5;
  // train overrides (set only when given on the command line)
  std::optional<int32_t> batch_size, max_epochs, min_epochs;
  std::optional<int64_t> epoch_size;
  std::optional<double> lr, lr_floor, val_fraction;
  std::optional<std::string> loss, layers, dtype;
  bool full_softmax = false;
  // check-bounds
  int64_t bounds_k = 20, subset = 5, trials = 100000;
  double logit_scale = 1.0;
  // grad-check
  std::string grad_loss = "both";
  bool degenerate = false;
  // eval
  int64_t k = 0;
  std::string lambda_grid, questions, pairs, direction = "src2tgt";
};

std::string resolve_ckpt(const std::string& ckpt) {
  return fs::is_directory(ckpt) ? (fs::path(ckpt) / kCheckpointName).string() : ckpt;
}

Dictionary resolve_dictionary(const Options& o) {
  std::vector<std::string> candidates;
  if (!o.dict_path.empty()) candidates.push_back(o.dict_path);
  if (!o.ckpt.empty()) candidates.push_back((fs::path(resolve_ckpt(o.ckpt)).parent_path() / kDictName).string());
  if (!o.data_dir.empty()) candidates.push_back((fs::path(o.data_dir) / kDictName).string());
  for (const auto& c : candidates) {
    if (fs::is_regular_file(c)) return load_dictionary(c);
  }
  throw Error(ErrorKind::kIo, "no dictionary found (pass --dict)");
}

LoadResult load_data_dir(const std::string& dir, const Dictionary& dict) {
  return load_dataset((fs::path(dir) / "captions.jsonl").string(), (fs::path(dir) / "images.wlt").string(), dict);
}

void log_config(std::ostream& err, const std::string& command, const json& resolved) {
  json j;
  j["command"] = command;
  j["config"] = resolved;
  err << "config " << j.dump() << '\n';
}

// Runs `fn` with the checkpoint loaded in its stored precision.
template <typename Fn>
auto with_checkpoint(const std::string& path, Fn&& fn) {
  const std::string file = resolve_ckpt(path);
  if (checkpoint_dtype(file) == DType::kF64) return fn(load_checkpoint<double>(file));
  return fn(load_checkpoint<float>(file));
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "empty lambda grid");
  return out;
}

int run_gen_synth(const Options& o, std::ostream& out, std::ostream& err) {
  SynthConfig cfg = o.synth;
  cfg.seed = o.seed;
  json resolved{{"k", cfg.K},
                {"img_size", cfg.image_size},
                {"channels", cfg.channels},
                {"zipf", cfg.zipf_exponent},
                {"words_per_image", cfg.words_per_image},
                {"noise", cfg.noise_sigma},
                {"seed", cfg.seed},
                {"num_examples", cfg.num_examples},
                {"test_examples", o.test_examples},
                {"stop_count", cfg.stop_count},
                {"out_dir", o.out_dir}};
  log_config(err, "gen-synth", resolved);
  const SynthData train = generate_synthetic(cfg);
  save_dataset_dir(o.out_dir, train.dataset, train.captions, train.dict);

  json summary{{"train_examples", train.dataset.size()},
               {"dropped", cfg.num_examples - int64_t(train.dataset.size())},
               {"dictionary_size", train.dict.size()}};
  double labels = 0.0;
  for (const auto& ex : train.dataset.examples) labels += double(ex.labels.size());
  summary["mean_labels"] = train.dataset.empty() ? 0.0 : labels / double(train.dataset.size());
  if (o.test_examples > 0) {
    SynthConfig tcfg = cfg;
    tcfg.first_example = cfg.first_example + cfg.num_examples;
    tcfg.num_examples = o.test_examples;
    const SynthData test = generate_synthetic(tcfg);
    const Dataset relabelled = relabel(test, train.dict);
    std::vector<std::string> captions;
    for (const auto& ex : relabelled.examples) {
      const auto it = std::find_if(test.dataset.examples.begin(), test.dataset.examples.end(),
                                   [&](const Example& e) { return e.id == ex.id; });
      captions.push_back(test.captions[size_t(it - test.dataset.examples.begin())]);
    }
    save_dataset_dir((fs::path(o.out_dir) / "test").string(), relabelled, captions, train.dict);
    summary["test_examples"] = relabelled.size();
    summary["nearest_prototype_precision_at_1"] = nearest_prototype_accuracy(relabelled, train.prototypes);
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_build_dict(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string captions =
      !o.captions.empty() ? o.captions : (fs::path(o.data_dir) / "captions.jsonl").string();
  const std::string dest = o.dict_path.empty() ? (fs::path(o.out_dir) / kDictName).string() : o.dict_path;
  log_config(err, "build-dict", json{{"captions", captions}, {"k", o.dict_k}, {"stop", o.stop_count}, {"out", dest}});
  TokenCounter counter;
  for (const auto& rec : read_captions(captions)) counter.add(normalize_text(rec.caption));
  const Dictionary dict = counter.finalize(o.dict_k, o.stop_count);
  if (fs::path(dest).has_parent_path()) fs::create_directories(fs::path(dest).parent_path());
  save_dictionary(dest, dict);
  out << json{{"dictionary", dest}, {"size", dict.size()}, {"stop", o.stop_count}}.dump() << '\n';
  return kExitOk;
}

template <typename Real>
int train_and_save(const TrainConfig& tc, const Dataset& data, const ModelConfig& mc, const Dictionary& dict,
                   const Options& o, std::ostream& out) {
  fs::create_directories(o.out_dir);
  const std::string log_path = (fs::path(o.out_dir) / kLogName).string();
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw Error(ErrorKind::kIo, "cannot write " + log_path);
  auto result = train<Real>(tc, data, mc, dict.size(), [&](const EpochRecord& r) { log << r.to_json() << '\n' << std::flush; });
  const std::string ckpt = (fs::path(o.out_dir) / kCheckpointName).string();
  save_checkpoint(ckpt, result.params, CheckpointMeta{result.rng.state_hex(), result.log.steps, result.log.final_lr});
  save_dictionary((fs::path(o.out_dir) / kDictName).string(), dict);
  json summary{{"checkpoint", ckpt},
               {"log", log_path},
               {"epochs", result.log.epochs.size()},
               {"steps", result.log.steps},
               {"final_lr", result.log.final_lr}};
  if (!result.log.epochs.empty()) summary["final_val_error"] = result.log.epochs.back().val_error;
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_train(const Options& o, std::ostream& out, std::ostream& err) {
  Config file;
  if (!o.config_path.empty()) file = load_config(o.config_path);
  auto key = [&](const std::string& section, const std::string& name) {
    return file.has(section + "." + name) ? section + "." + name : name;
  };
  TrainConfig tc;
  tc.batch_size = static_cast<int32_t>(file.get_int(key("train", "batch_size"), tc.batch_size));
  tc.lr_init = file.get_double(key("train", "lr_init"), tc.lr_init);
  tc.lr_floor = file.get_double(key("train", "lr_floor"), tc.lr_floor);
  tc.min_epochs_per_lr = static_cast<int32_t>(file.get_int(key("train", "min_epochs_per_lr"), tc.min_epochs_per_lr));
  tc.epoch_size = file.get_int(key("train", "epoch_size"), tc.epoch_size);
  tc.max_epochs = static_cast<int32_t>(file.get_int(key("train", "max_epochs"), tc.max_epochs));
  tc.loss_kind = parse_loss_kind(file.get_string(key("train", "loss"), loss_kind_name(tc.loss_kind)));
  tc.sampled_targets = file.get_bool(key("train", "sampled_targets"), tc.sampled_targets);
  tc.seed = static_cast<uint64_t>(file.get_int(key("train", "seed"), int64_t(tc.seed)));
  tc.validation_fraction = file.get_double(key("train", "validation_fraction"), tc.validation_fraction);
  tc.val_k = static_cast<int32_t>(file.get_int(key("train", "val_k"), tc.val_k));
  tc.workers = static_cast<int32_t>(file.get_int(key("train", "workers"), tc.workers));
  std::string layers = file.get_string(key("model", "layers"), kPresetLayers);
  std::string dtype = file.get_string(key("model", "dtype"), "f32");
  std::string data_dir = file.get_string(key("data", "data_dir"), "");
  Options opt = o;

  if (o.batch_size) tc.batch_size = *o.batch_size;
  if (o.max_epochs) tc.max_epochs = *o.max_epochs;
  if (o.min_epochs) tc.min_epochs_per_lr = *o.min_epochs;
  if (o.epoch_size) tc.epoch_size = *o.epoch_size;
  if (o.lr) tc.lr_init = *o.lr;
  if (o.lr_floor) tc.lr_floor = *o.lr_floor;
  if (o.val_fraction) tc.validation_fraction = *o.val_fraction;
  if (o.loss) tc.loss_kind = parse_loss_kind(*o.loss);
  if (o.layers) layers = *o.layers;
  if (o.dtype) dtype = *o.dtype;
  if (o.full_softmax) tc.sampled_targets = false;
  if (o.seed_given) tc.seed = o.seed;
  if (o.workers > 0) tc.workers = o.workers;
  if (!o.data_dir.empty()) data_dir = o.data_dir;
  opt.data_dir = data_dir;
  if (data_dir.empty()) throw Error(ErrorKind::kInvalidArgument, "train needs --data-dir");
  if (o.out_dir.empty()) throw Error(ErrorKind::kInvalidArgument, "train needs --out-dir");
  tc.validate();

  const Dictionary dict = resolve_dictionary(opt);
  const LoadResult loaded = load_data_dir(data_dir, dict);
  ModelConfig mc;
  mc.in_h = loaded.dataset.height;
  mc.in_w = loaded.dataset.width;
  mc.in_c = loaded.dataset.channels;
  mc.layers = parse_layers(layers);
  mc.dtype = parse_dtype(dtype);
  mc.validate();

  log_config(err, "train",
             json{{"batch_size", tc.batch_size},
                  {"lr_init", tc.lr_init},
                  {"lr_floor", tc.lr_floor},
                  {"min_epochs_per_lr", tc.min_epochs_per_lr},
                  {"epoch_size", tc.epoch_size},
                  {"max_epochs", tc.max_epochs},
                  {"loss", loss_kind_name(tc.loss_kind)},
                  {"sampled_targets", tc.sampled_targets},
                  {"seed", tc.seed},
                  {"validation_fraction", tc.validation_fraction},
                  {"val_k", tc.val_k > 0 ? int64_t(tc.val_k) : default_val_k(dict.size())},
                  {"workers", tc.workers},
                  {"layers", mc.layers_string()},
                  {"dtype", dtype_name(mc.dtype)},
                  {"input", std::to_string(mc.in_h) + "x" + std::to_string(mc.in_w) + "x" + std::to_string(mc.in_c)},
                  {"data_dir", data_dir},
                  {"out_dir", o.out_dir},
                  {"examples", loaded.dataset.size()},
                  {"dropped", loaded.dropped}});
  return mc.dtype == DType::kF64 ? train_and_save<double>(tc, loaded.dataset, mc, dict, opt, out)
                                 : train_and_save<float>(tc, loaded.dataset, mc, dict, opt, out);
}

int run_check_bounds(const Options& o, std::ostream& out, std::ostream& err) {
  log_config(err, "check-bounds",
             json{{"k", o.bounds_k}, {"subset", o.subset}, {"trials", o.trials}, {"seed", o.seed},
                  {"logit_scale", o.logit_scale}});
  if (o.bounds_k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  Rng rng = Rng(o.seed).split(0);
  std::vector<double> logits(static_cast<size_t>(o.bounds_k));
  for (double& l : logits) l = o.logit_scale * rng.normal();
  out << check_bounds(logits, o.subset, o.trials, o.seed).to_json() << '\n';
  return kExitOk;
}

int run_grad_check(const Options& o, std::ostream& out, std::ostream& err) {
  ModelConfig mc = tiny_model_config();
  if (o.layers) mc.layers = parse_layers(*o.layers);
  log_config(err, "grad-check",
             json{{"seed", o.seed}, {"loss", o.grad_loss}, {"layers", mc.layers_string()}, {"degenerate", o.degenerate}});
  GradCheckOptions gopt;
  gopt.degenerate = o.degenerate;
  std::vector<LossKind> kinds;
  if (o.grad_loss == "both") {
    kinds = {LossKind::kMulticlass, LossKind::kOneVsAll};
  } else {
    kinds = {parse_loss_kind(o.grad_loss)};
  }
  json j;
  double worst = 0.0;
  for (LossKind kind : kinds) {
    const auto r = gradient_check(mc, kind, o.seed, gopt);
    worst = std::max(worst, r.max_rel_err);
    j[loss_kind_name(kind)] = json::parse(r.to_json());
  }
  json result{{"max_rel_err", worst}};
  result.update(j);
  out << result.dump() << '\n';
  return kExitOk;
}

int run_eval_words(const Options& o, std::ostream& out, std::ostream& err) {
  const Dictionary dict = resolve_dictionary(o);
  const int64_t k = o.k > 0 ? o.k : 1;
  log_config(err, "eval-words", json{{"ckpt", resolve_ckpt(o.ckpt)}, {"data", o.data_dir}, {"k", k}});
  const LoadResult loaded = load_data_dir(o.data_dir, dict);
  return with_checkpoint(o.ckpt, [&](const auto& params) {
    EvalReport r = precision_at_k(params, loaded.dataset, k);
    r.n_skipped = loaded.dropped;
    out << r.to_json() << '\n';
    return kExitOk;
  });
}

int run_eval_probe(const Options& o, std::ostream& out, std::ostream& err) {
  const Dictionary dict = resolve_dictionary(o);
  ProbeOptions popt;
  if (!o.lambda_grid.empty()) popt.lambda_grid = parse_grid(o.lambda_grid);
  popt.seed = o.seed;
  log_config(err, "eval-probe",
             json{{"ckpt", resolve_ckpt(o.ckpt)}, {"data", o.data_dir}, {"lambda_grid", popt.lambda_grid},
                  {"seed", popt.seed}, {"max_iterations", popt.max_iterations}});
  const LoadResult loaded = load_data_dir(o.data_dir, dict);
  return with_checkpoint(o.ckpt, [&](const auto& params) {
    const auto features = extract_features(params, loaded.dataset);
    Matrix<double> f(features.rows, features.cols);
    std::copy(features.data.begin(), features.data.end(), f.data.begin());
    std::vector<int32_t> labels;
    std::vector<std::string> ids;
    for (const auto& ex : loaded.dataset.examples) {
      labels.push_back(ex.labels.front());
      ids.push_back(ex.id);
    }
    out << linear_probe(f, labels, ids, popt).report.to_json() << '\n';
    return kExitOk;
  });
}

int run_word_eval(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  const Dictionary dict = resolve_dictionary(o);
  json resolved{{"ckpt", resolve_ckpt(o.ckpt)}};
  if (command == "eval-analogy") resolved["questions"] = o.questions;
  if (command == "eval-sim" || command == "eval-translate") resolved["pairs"] = o.pairs;
  if (command == "eval-translate") {
    resolved["direction"] = o.direction;
    resolved["k"] = o.k > 0 ? o.k : 1;
  }
  if (command == "dump-embeddings") resolved["out_dir"] = o.out_dir;
  log_config(err, command, resolved);
  const Matrix<double> vectors = with_checkpoint(o.ckpt, [](const auto& params) { return word_vectors(params); });
  if (command == "eval-analogy") {
    out << analogy_accuracy(vectors, read_analogy_questions(o.questions), dict).to_json() << '\n';
  } else if (command == "eval-sim") {
    out << spearman_similarity(vectors, read_similarity_pairs(o.pairs), dict).to_json() << '\n';
  } else if (command == "eval-translate") {
    Direction dir;
    if (o.direction == "src2tgt") {
      dir = Direction::kSourceToTarget;
    } else if (o.direction == "tgt2src") {
      dir = Direction::kTargetToSource;
    } else {
      throw Error(ErrorKind::kInvalidArgument, "direction must be src2tgt or tgt2src");
    }
    out << translation_precision(vectors, read_translation_pairs(o.pairs), dict, dir, o.k > 0 ? o.k : 1).to_json()
        << '\n';
  } else {
    fs::create_directories(o.out_dir);
    const std::string csv = (fs::path(o.out_dir) / "embeddings.csv").string();
    const std::string nn = (fs::path(o.out_dir) / "neighbors.json").string();
    dump_embeddings(vectors, dict, csv, nn);
    out << json{{"embeddings", csv}, {"neighbors", nn}, {"words", vectors.rows}, {"dim", vectors.cols}}.dump() << '\n';
  }
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--version") {
      out << "weaklearn " << WEAKLEARN_VERSION << " (tensor WLTENS1, checkpoint WLCKPT1, dictionary dict v1)\n";
      return kExitOk;
    }
  }

  CLI::App app{"weaklearn: weakly supervised image-word training and evaluation", "weaklearn"};
  app.require_subcommand(1);
  Options o;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<uint64_t>("--seed", [&](const uint64_t& s) { o.seed = s; seed_given = true; }, "RNG seed");
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  };

  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic image-caption dataset");
  gen->add_option("--k", o.synth.K, "Number of classes")->check(CLI::PositiveNumber);
  gen->add_option("--img-size", o.synth.image_size, "Image side length")->check(CLI::PositiveNumber);
  gen->add_option("--channels", o.synth.channels, "Image channels")->check(CLI::PositiveNumber);
  gen->add_option("--zipf", o.synth.zipf_exponent, "Zipf exponent")->check(CLI::NonNegativeNumber);
  gen->add_option("--words-per-image", o.synth.words_per_image, "Classes per image")->check(CLI::PositiveNumber);
  gen->add_option("--noise", o.synth.noise_sigma, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  gen->add_option("--num-examples", o.synth.num_examples, "Training examples")->check(CLI::PositiveNumber);
  gen->add_option("--test-examples", o.test_examples, "Held-out examples written to out-dir/test")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--stop-count", o.synth.stop_count, "Most frequent words removed")->check(CLI::NonNegativeNumber);
  gen->add_option("--out-dir", o.out_dir, "Output directory")->required();
  add_seed(gen);

  auto* bd = app.add_subcommand("build-dict", "Build a dictionary from a captions file");
  bd->add_option("--captions", o.captions, "Captions JSON-lines file");
  bd->add_option("--data-dir", o.data_dir, "Directory containing captions.jsonl");
  bd->add_option("--k", o.dict_k, "Dictionary size")->check(CLI::PositiveNumber);
  bd->add_option("--stop", o.stop_count, "Most frequent words removed")->check(CLI::NonNegativeNumber);
  bd->add_option("--out", o.dict_path, "Dictionary output path");
  bd->add_option("--out-dir", o.out_dir, "Directory for dict.txt");

  auto* tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--config", o.config_path, "Config file (.toml/.ini or .json)");
  tr->add_option("--data-dir", o.data_dir, "Dataset directory");
  tr->add_option("--out-dir", o.out_dir, "Output directory");
  tr->add_option("--dict", o.dict_path, "Dictionary file");
  tr->add_option("--batch-size", o.batch_size, "Batch size");
  tr->add_option("--epochs", o.max_epochs, "Maximum epochs");
  tr->add_option("--min-epochs-per-lr", o.min_epochs, "Epochs before a halving is allowed");
  tr->add_option("--epoch-size", o.epoch_size, "Samples per epoch");
  tr->add_option("--lr", o.lr, "Initial learning rate");
  tr->add_option("--lr-floor", o.lr_floor, "Stop once the learning rate falls below this");
  tr->add_option("--validation-fraction", o.val_fraction, "Share of examples held out for validation");
  tr->add_option("--loss", o.loss, "multiclass or one_vs_all");
  tr->add_option("--layers", o.layers, "Backbone, e.g. conv:3x8,pool:2,fc:64");
  tr->add_option("--dtype", o.dtype, "f32 or f64");
  tr->add_flag("--full-softmax", o.full_softmax, "Score and update every class");
  add_seed(tr);
  add_workers(tr);

  auto* cb = app.add_subcommand("check-bounds", "Monte-Carlo check of the sampled-loss bounds");
  cb->add_option("--k", o.bounds_k, "Number of classes")->check(CLI::PositiveNumber);
  cb->add_option("--subset", o.subset, "Subset size")->check(CLI::PositiveNumber);
  cb->add_option("--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  cb->add_option("--logit-scale", o.logit_scale, "Standard deviation of the random logits");
  add_seed(cb);

  auto* gc = app.add_subcommand("grad-check", "Finite-difference gradient check");
  gc->add_option("--loss", o.grad_loss, "multiclass, one_vs_all or both");
  gc->add_option("--layers", o.layers, "Backbone of the 4x4x1 test model");
  gc->add_flag("--degenerate", o.degenerate, "Zero inputs and parameters");
  add_seed(gc);

  auto* ew = app.add_subcommand("eval-words", "Word prediction precision@k");
  ew->add_option("--ckpt", o.ckpt, "Checkpoint file or training output directory")->required();
  ew->add_option("--data", o.data_dir, "Dataset directory")->required();
  ew->add_option("--k", o.k, "k")->check(CLI::PositiveNumber);
  ew->add_option("--dict", o.dict_path, "Dictionary file");
  add_workers(ew);

  auto* ep = app.add_subcommand("eval-probe", "Linear probe on penultimate features");
  ep->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  ep->add_option("--data", o.data_dir, "Dataset directory")->required();
  ep->add_option("--lambda-grid", o.lambda_grid, "Comma-separated L2 strengths");
  ep->add_option("--dict", o.dict_path, "Dictionary file");
  add_seed(ep);
  add_workers(ep);

  auto* ea = app.add_subcommand("eval-analogy", "Analogy accuracy of the word embeddings");
  ea->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  ea->add_option("--questions", o.questions, "File with 4 words per line")->required();
  ea->add_option("--dict", o.dict_path, "Dictionary file");

  auto* es = app.add_subcommand("eval-sim", "Spearman correlation with similarity ratings");
  es->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  es->add_option("--pairs", o.pairs, "File with: word1 word2 rating")->required();
  es->add_option("--dict", o.dict_path, "Dictionary file");

  auto* et = app.add_subcommand("eval-translate", "Translation precision@k");
  et->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  et->add_option("--pairs", o.pairs, "File with: source target")->required();
  et->add_option("--direction", o.direction, "src2tgt or tgt2src");
  et->add_option("--k", o.k, "k")->check(CLI::PositiveNumber);
  et->add_option("--dict", o.dict_path, "Dictionary file");

  auto* de = app.add_subcommand("dump-embeddings", "Write word vectors and nearest neighbours");
  de->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  de->add_option("--out-dir", o.out_dir, "Output directory")->required();
  de->add_option("--dict", o.dict_path, "Dictionary file");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n" << sub->help();
    return kExitUsage;
  }
  o.seed_given = seed_given;

  try {
    if (o.workers > 0) kernels::set_workers(o.workers);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "gen-synth") return run_gen_synth(o, out, err);
    if (name == "build-dict") return run_build_dict(o, out, err);
    if (name == "train") return run_train(o, out, err);
    if (name == "check-bounds") return run_check_bounds(o, out, err);
    if (name == "grad-check") return run_grad_check(o, out, err);
    if (name == "eval-words") return run_eval_words(o, out, err);
    if (name == "eval-probe") return run_eval_probe(o, out, err);
    return run_word_eval(name, o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace weaklearn
