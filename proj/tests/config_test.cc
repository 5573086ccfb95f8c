// Copyright 2026 The XREF Authors.
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

#include "xref/config.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "xref/error.h"
#include "xref/io.h"

namespace xref {
namespace {

namespace fs = std::filesystem;

TEST(ConfigTest, DefaultsCarryReferenceHyperparameters) {
  const XrefConfig c;
  const ModelConfig m = c.ToModelConfig();
  EXPECT_EQ(m.char_dim, 300);
  EXPECT_EQ(2 * m.hidden, 200);
  EXPECT_EQ(m.joint_dim, 300);
  EXPECT_EQ(m.entity_dim, 600);
  EXPECT_EQ(m.fusion_input_dim(), 1000);
  EXPECT_EQ(m.lambda, 0.1);
  const TrainOptions t = c.ToTrainOptions(7);
  EXPECT_EQ(t.adam.lr, 1e-4);
  EXPECT_EQ(t.clip_norm, 5.0);
  EXPECT_EQ(t.batch_size, 128);
  EXPECT_EQ(t.seed, 7u);
}

TEST(ConfigTest, ShippedDefaultFileMatchesDefaults) {
  const XrefConfig shipped = XrefConfig::Load(XREF_SOURCE_DIR "/configs/default.json");
  EXPECT_EQ(shipped.ToJson(), XrefConfig{}.ToJson());
  const Json raw = Json::parse(ReadFile(XREF_SOURCE_DIR "/configs/default.json"));
  EXPECT_EQ(raw["dims"]["char_dim"], 300);
  EXPECT_EQ(raw["dims"]["hidden_per_direction"], 100);
  EXPECT_EQ(raw["training"]["lr"], 1e-4);
  EXPECT_EQ(raw["training"]["clip_norm"], 5.0);
  EXPECT_EQ(raw["training"]["batch_size"], 128);
  EXPECT_EQ(raw["training"]["lambda"], 0.1);
}

TEST(ConfigTest, DeskFileLoads) {
  const XrefConfig desk = XrefConfig::Load(XREF_SOURCE_DIR "/configs/desk.json");
  EXPECT_EQ(desk.ToModelConfig().entity_dim, desk.dims.node_dim + desk.dims.word_dim);
  EXPECT_NO_THROW(desk.ToModelConfig().Validate());
}

TEST(ConfigTest, JsonRoundTripAndPartialInput) {
  XrefConfig c;
  c.dims.char_dim = 8;
  c.training.nil_mode = NilMode::kFixedBias;
  c.ablations.features = false;
  c.data.synthetic.num_articles = 11;
  EXPECT_EQ(XrefConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  const XrefConfig partial = XrefConfig::FromJson(Json{{"dims", {{"joint_dim", 7}}}});
  EXPECT_EQ(partial.dims.joint_dim, 7);
  EXPECT_EQ(partial.dims.char_dim, 300);
}

TEST(ConfigTest, RejectsUnknownSectionsAndBadValues) {
  EXPECT_THROW(XrefConfig::FromJson(Json{{"optimizer", Json::object()}}), InvalidArgument);
  EXPECT_THROW(XrefConfig::FromJson(Json{{"dims", {{"char_dim", "big"}}}}), InvalidArgument);
  EXPECT_THROW(XrefConfig::FromJson(Json{{"training", {{"nil_mode", "sometimes"}}}}),
               InvalidArgument);
}

TEST(ConfigTest, LoadResolvesRelativePathsAndHashes) {
  const fs::path dir = fs::temp_directory_path() / "xref_config_test";
  fs::create_directories(dir);
  WriteFile((dir / "c.json").string(), R"({"data": {"kb": "kb.jsonl"}})");
  const XrefConfig c = XrefConfig::Load((dir / "c.json").string());
  EXPECT_EQ(fs::path(c.data.kb), dir / "kb.jsonl");
  EXPECT_EQ(c.Hash(), XrefConfig::Load((dir / "c.json").string()).Hash());
  EXPECT_EQ(c.Hash().size(), 16u);
  XrefConfig d = c;
  d.training.lambda = 0.2;
  EXPECT_NE(c.Hash(), d.Hash());
  WriteFile((dir / "bad.json").string(), "{oops");
  EXPECT_THROW(XrefConfig::Load((dir / "bad.json").string()), LoadError);
  EXPECT_THROW(XrefConfig::Load((dir / "missing.json").string()), Error);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace xref
