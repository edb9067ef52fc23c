// Copyright 2026 The weakpol Authors. All Rights Reserved.
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
#include <sstream>

#include "cli.hpp"
#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"

namespace weakpol {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "weakpol");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("weakpol_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const char* name) const { return (dir / name).string(); }
  fs::path dir;
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({}).code, cli::kExitValidation);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"--jobs", "zero", "synth"}).code, cli::kExitValidation);
}

TEST_F(Cli, MissingFilesAreIoErrors) {
  EXPECT_EQ(run({"--out-dir", path("o"), "ingest", "--input", path("nope.jsonl")}).code, cli::kExitIo);
  EXPECT_EQ(run({"--config", path("nope.toml"), "synth"}).code, cli::kExitIo);
  EXPECT_EQ(run({"--out-dir", path("o"), "evaluate", "--model", path("m.json"), "--features", path("f.csv")}).code,
            cli::kExitIo);
}

TEST_F(Cli, InvalidConfigIsValidationError) {
  write_text_file(dir / "bad.toml", "n_candidates = 0\n");
  EXPECT_EQ(run({"--config", path("bad.toml"), "synth"}).code, cli::kExitValidation);
  write_text_file(dir / "typo.toml", "seeed = 1\n");
  EXPECT_EQ(run({"--config", path("typo.toml"), "synth"}).code, cli::kExitValidation);
}

TEST_F(Cli, PipelineStages) {
  const std::string synth = path("synth");
  ASSERT_EQ(run({"--seed", "3", "--out-dir", synth, "synth", "--n-tweets", "1200"}).code, 0);
  const std::string corpus = synth + "/corpus.jsonl";

  ASSERT_EQ(run({"--out-dir", path("ingest"), "ingest", "--input", corpus, "--dedupe", "--out", path("ingest/c.csv")}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "ingest" / "ingest_report.json"));

  const auto label = run({"--out-dir", path("label"), "label", "--corpus", corpus, "--slang", synth + "/slang_lexicon.csv",
                          "--concepts", synth + "/concept_lexicon.csv"});
  ASSERT_EQ(label.code, 0) << label.err;
  const auto label2 = run({"--out-dir", path("label2"), "label", "--corpus", path("ingest/c.csv"), "--slang",
                           synth + "/slang_lexicon.csv", "--concepts", synth + "/concept_annotations.csv"});
  ASSERT_EQ(label2.code, 0) << label2.err;
  EXPECT_EQ(read_text_file(dir / "label" / "labeled.csv"), read_text_file(dir / "label2" / "labeled.csv"));
  EXPECT_EQ(run({"--out-dir", path("label3"), "label", "--corpus", corpus, "--slang", synth + "/slang_lexicon.csv",
                 "--concepts", synth + "/concept_lexicon.csv", "--vote-threshold", "0.5"})
                .code,
            cli::kExitValidation);

  ASSERT_EQ(run({"--out-dir", path("feat"), "featurize", "--labeled", path("label/labeled.csv")}).code, 0);
  const auto train = run({"--out-dir", path("model"), "train", "--features", path("feat/features_train.csv"), "--model",
                          "lr", "--strategy", "cost_sensitive", "--schema", path("feat/schema.json")});
  ASSERT_EQ(train.code, 0) << train.err;
  const auto eval = run({"--out-dir", path("eval"), "evaluate", "--model", path("model/model.json"), "--features",
                         path("feat/features_test.csv")});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_TRUE(fs::exists(dir / "eval" / "metrics.json"));
  EXPECT_EQ(run({"--out-dir", path("model2"), "train", "--features", path("feat/features_train.csv"), "--model", "svm"}).code,
            cli::kExitValidation);
}

}  // namespace
}  // namespace weakpol
