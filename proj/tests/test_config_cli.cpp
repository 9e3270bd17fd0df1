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

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "test_util.hpp"
#include "weaklearn/cli.hpp"
#include "weaklearn/config.hpp"
#include "weaklearn/error.hpp"

using namespace weaklearn;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
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

}  // namespace

TEST(Config, IniSectionsQuotesCommentsAndLists) {
  std::istringstream in(
      "# top comment\n"
      "seed = 3\n"
      "[train]\n"
      "lr_init = 0.05   # trailing\n"
      "loss = \"one_vs_all\"\n"
      "sampled_targets = false\n"
      "; another comment\n"
      "[model]\n"
      "layers = [\"fc:32\", \"fc:16\"]\n"
      "name = 'a # b'\n");
  const Config c = parse_ini(in);
  EXPECT_EQ(c.get_int("seed", 0), 3);
  EXPECT_EQ(c.get_double("train.lr_init", 0), 0.05);
  EXPECT_EQ(c.get_string("train.loss", ""), "one_vs_all");
  EXPECT_FALSE(c.get_bool("train.sampled_targets", true));
  EXPECT_EQ(c.get_string("model.layers", ""), "fc:32,fc:16");
  EXPECT_EQ(c.get_string("model.name", ""), "a # b");
  EXPECT_EQ(c.get_int("train.missing", 42), 42);
  EXPECT_THROW(c.get_int("train.loss", 0), Error);
}

TEST(Config, JsonFlattensNestedObjects) {
  std::istringstream in(R"({"train": {"batch_size": 64, "lr_init": 0.2, "sampled_targets": true},
                            "model": {"layers": "fc:8"}, "top": "x"})");
  const Config c = parse_json_config(in);
  EXPECT_EQ(c.get_int("train.batch_size", 0), 64);
  EXPECT_EQ(c.get_double("train.lr_init", 0), 0.2);
  EXPECT_TRUE(c.get_bool("train.sampled_targets", false));
  EXPECT_EQ(c.get_string("model.layers", ""), "fc:8");
  EXPECT_EQ(c.get_string("top", ""), "x");
}

TEST(Config, MissingFileIsNamedError) {
  try {
    load_config("/nonexistent/missing.toml");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfigNotFound);
    EXPECT_NE(std::string(e.what()).find("config not found"), std::string::npos);
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"nosuchcmd"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"grad-check", "--bogus"}).code, kExitUsage);
  const CliRun missing = run({"train", "--config", "missing.toml"});
  EXPECT_EQ(missing.code, kExitRuntime);
  EXPECT_NE(missing.err.find("config not found"), std::string::npos);
  EXPECT_TRUE(missing.out.empty());
}

TEST(Cli, VersionListsFormats) {
  const CliRun r = run({"--version"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* s : {"WLTENS1", "WLCKPT1", "dict v1"}) EXPECT_NE(r.out.find(s), std::string::npos);
}

TEST(Cli, GradCheckEmitsJson) {
  const CliRun r = run({"grad-check", "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j.at("max_rel_err").get<double>(), 1e-5);
  EXPECT_LT(j.at("multiclass").at("max_rel_err").get<double>(), 1e-5);
  EXPECT_LT(j.at("one_vs_all").at("max_rel_err").get<double>(), 1e-5);
  EXPECT_EQ(r.err.rfind("config {", 0), 0u);
}

TEST(Cli, CheckBoundsEmitsReport) {
  const CliRun r = run({"check-bounds", "--k", "30", "--subset", "8", "--trials", "2000", "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("upper_holds").get<bool>());
  EXPECT_TRUE(j.at("lower_holds").get<bool>());
  EXPECT_EQ(run({"check-bounds", "--k", "3", "--subset", "5"}).code, kExitRuntime);
}

TEST(Cli, EndToEndPipeline) {
  testing_util::TempDir dir;
  const std::string data = dir.file("data"), model = dir.file("model");
  CliRun r = run({"gen-synth", "--k", "8", "--img-size", "6", "--num-examples", "400", "--test-examples", "200",
               "--out-dir", data, "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("dictionary_size"), 8);
  EXPECT_TRUE(fs::exists(data + "/test/images.wlt"));

  r = run({"build-dict", "--data-dir", data, "--k", "8", "--out", dir.file("dict2.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(dir.file("dict2.txt")), slurp(data + "/dict.txt"));

  {
    std::ofstream cfg(dir.file("train.toml"));
    cfg << "[train]\nbatch_size = 32\nepoch_size = 256\nmax_epochs = 5\nlr_init = 0.5\n"
           "[model]\nlayers = \"fc:24,fc:12\"\n";
  }
  r = run({"train", "--config", dir.file("train.toml"), "--data-dir", data, "--out-dir", model, "--epochs", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto cfg_line = nlohmann::json::parse(r.err.substr(r.err.find('{')));
  EXPECT_EQ(cfg_line.at("config").at("max_epochs"), 3);  // flag beats file
  EXPECT_EQ(cfg_line.at("config").at("batch_size"), 32);
  EXPECT_EQ(cfg_line.at("config").at("layers"), "fc:24,fc:12");
  EXPECT_TRUE(fs::exists(model + "/model.wlckpt"));
  EXPECT_TRUE(fs::exists(model + "/dict.txt"));
  std::ifstream log(model + "/train_log.jsonl");
  int lines = 0;
  for (std::string line; std::getline(log, line);) ++lines;
  EXPECT_EQ(lines, 3);

  r = run({"eval-words", "--ckpt", model, "--data", data + "/test", "--k", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("metric"), "precision_at_k");
  EXPECT_GT(j.at("value").get<double>(), 0.125);

  r = run({"eval-probe", "--ckpt", model, "--data", data + "/test", "--lambda-grid", "0.01,1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  {
    std::ofstream(dir.file("pairs.txt")) << "#src tgt\n";
  }
  r = run({"dump-embeddings", "--ckpt", model, "--out-dir", dir.file("emb")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir.file("emb/embeddings.csv")));
  EXPECT_EQ(run({"eval-translate", "--ckpt", model, "--pairs", dir.file("pairs.txt")}).code, kExitRuntime);
  EXPECT_EQ(run({"eval-translate", "--ckpt", model}).code, kExitUsage);
  EXPECT_EQ(run({"eval-words", "--ckpt", dir.file("nope"), "--data", data}).code, kExitRuntime);
}
