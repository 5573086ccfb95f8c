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

#include <filesystem>

#include "xref/error.h"

namespace xref {
namespace {

template <typename T>
void Read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j[key].get<T>();
}

void ResolvePath(const std::filesystem::path& base, std::string& p) {
  if (p.empty() || std::filesystem::path(p).is_absolute()) return;
  p = (base / p).lexically_normal().string();
}

}  // namespace

ModelConfig XrefConfig::ToModelConfig() const {
  ModelConfig m;
  m.char_dim = dims.char_dim;
  m.hidden = dims.hidden_per_direction;
  m.joint_dim = dims.joint_dim;
  m.entity_dim = dims.node_dim + dims.word_dim;
  m.comment_attention = ablations.comment_attention;
  m.article_attention = ablations.article_attention;
  m.features = ablations.features;
  m.lambda = training.lambda;
  m.normalize_att_targets = training.normalize_att_targets;
  m.freeze_char_emb = training.freeze_char_emb;
  m.base_state = training.base_state;
  m.nil_mode = training.nil_mode;
  m.nil_bias = training.nil_bias;
  m.Validate();
  return m;
}

TrainOptions XrefConfig::ToTrainOptions(uint64_t seed) const {
  TrainOptions t;
  t.epochs = training.epochs;
  t.batch_size = training.batch_size;
  t.adam = training.adam;
  t.clip_norm = training.clip_norm;
  t.patience = training.patience;
  t.seed = seed;
  return t;
}

Json XrefConfig::ToJson() const {
  const ModelConfig m = ToModelConfig();
  const Node2VecParams& n = training.node2vec;
  const CharEmbeddingParams& c = training.char_embeddings;
  return Json{
      {"data",
       {{"kb", data.kb},
        {"articles", data.articles},
        {"comments", data.comments},
        {"split", data.split},
        {"titles", data.titles},
        {"unlabeled_articles", data.unlabeled_articles},
        {"unlabeled_comments", data.unlabeled_comments},
        {"pronouns", data.pronouns},
        {"transliteration", data.transliteration},
        {"special_surfaces", data.special_surfaces},
        {"node_embeddings", data.node_embeddings},
        {"word_embeddings", data.word_embeddings},
        {"char_embeddings", data.char_embeddings},
        {"harvest_aliases", data.harvest_aliases},
        {"synthetic", SyntheticConfigToJson(data.synthetic)}}},
      {"dims",
       {{"char_dim", dims.char_dim},
        {"hidden_per_direction", dims.hidden_per_direction},
        {"joint_dim", dims.joint_dim},
        {"node_dim", dims.node_dim},
        {"word_dim", dims.word_dim}}},
      {"training",
       {{"lr", training.adam.lr},
        {"beta1", training.adam.beta1},
        {"beta2", training.adam.beta2},
        {"eps", training.adam.eps},
        {"clip_norm", training.clip_norm},
        {"batch_size", training.batch_size},
        {"epochs", training.epochs},
        {"patience", training.patience},
        {"lambda", training.lambda},
        {"normalize_att_targets", training.normalize_att_targets},
        {"freeze_char_emb", training.freeze_char_emb},
        {"base_state", m.ToJson()["base_state"]},
        {"nil_mode", m.ToJson()["nil_mode"]},
        {"nil_bias", training.nil_bias},
        {"pretrain_epochs", training.pretrain_epochs},
        {"node2vec",
         {{"walks_per_node", n.walks_per_node},
          {"walk_length", n.walk_length},
          {"window", n.window},
          {"negatives", n.negatives},
          {"epochs", n.epochs},
          {"p", n.p},
          {"q", n.q},
          {"lr", n.lr}}},
        {"char_embeddings",
         {{"window", c.window},
          {"negatives", c.negatives},
          {"epochs", c.epochs},
          {"lr", c.lr}}}}},
      {"features",
       {{"edit_dist_max", features.edit_dist_max},
        {"comment_dist_absent", features.comment_dist_absent}}},
      {"ablations",
       {{"comment_attention", ablations.comment_attention},
        {"article_attention", ablations.article_attention},
        {"features", ablations.features},
        {"pretrain", ablations.pretrain}}}};
}

XrefConfig XrefConfig::FromJson(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "data" && key != "dims" && key != "training" && key != "features" &&
        key != "ablations") {
      throw InvalidArgument("unknown config section: " + key);
    }
  }
  XrefConfig c;
  try {
    const Json d = j.value("data", Json::object());
    Read(d, "kb", c.data.kb);
    Read(d, "articles", c.data.articles);
    Read(d, "comments", c.data.comments);
    Read(d, "split", c.data.split);
    Read(d, "titles", c.data.titles);
    Read(d, "unlabeled_articles", c.data.unlabeled_articles);
    Read(d, "unlabeled_comments", c.data.unlabeled_comments);
    Read(d, "pronouns", c.data.pronouns);
    Read(d, "transliteration", c.data.transliteration);
    Read(d, "special_surfaces", c.data.special_surfaces);
    Read(d, "node_embeddings", c.data.node_embeddings);
    Read(d, "word_embeddings", c.data.word_embeddings);
    Read(d, "char_embeddings", c.data.char_embeddings);
    Read(d, "harvest_aliases", c.data.harvest_aliases);
    if (d.contains("synthetic")) c.data.synthetic = SyntheticConfigFromJson(d["synthetic"]);

    const Json dims = j.value("dims", Json::object());
    Read(dims, "char_dim", c.dims.char_dim);
    Read(dims, "hidden_per_direction", c.dims.hidden_per_direction);
    Read(dims, "joint_dim", c.dims.joint_dim);
    Read(dims, "node_dim", c.dims.node_dim);
    Read(dims, "word_dim", c.dims.word_dim);

    const Json t = j.value("training", Json::object());
    Read(t, "lr", c.training.adam.lr);
    Read(t, "beta1", c.training.adam.beta1);
    Read(t, "beta2", c.training.adam.beta2);
    Read(t, "eps", c.training.adam.eps);
    Read(t, "clip_norm", c.training.clip_norm);
    Read(t, "batch_size", c.training.batch_size);
    Read(t, "epochs", c.training.epochs);
    Read(t, "patience", c.training.patience);
    Read(t, "lambda", c.training.lambda);
    Read(t, "normalize_att_targets", c.training.normalize_att_targets);
    Read(t, "freeze_char_emb", c.training.freeze_char_emb);
    Read(t, "nil_bias", c.training.nil_bias);
    Read(t, "pretrain_epochs", c.training.pretrain_epochs);
    Json mode = Json::object();
    if (t.contains("base_state")) mode["base_state"] = t["base_state"];
    if (t.contains("nil_mode")) mode["nil_mode"] = t["nil_mode"];
    const ModelConfig parsed = ModelConfig::FromJson(mode);
    c.training.base_state = parsed.base_state;
    c.training.nil_mode = parsed.nil_mode;
    const Json n = t.value("node2vec", Json::object());
    Read(n, "walks_per_node", c.training.node2vec.walks_per_node);
    Read(n, "walk_length", c.training.node2vec.walk_length);
    Read(n, "window", c.training.node2vec.window);
    Read(n, "negatives", c.training.node2vec.negatives);
    Read(n, "epochs", c.training.node2vec.epochs);
    Read(n, "p", c.training.node2vec.p);
    Read(n, "q", c.training.node2vec.q);
    Read(n, "lr", c.training.node2vec.lr);
    const Json ce = t.value("char_embeddings", Json::object());
    Read(ce, "window", c.training.char_embeddings.window);
    Read(ce, "negatives", c.training.char_embeddings.negatives);
    Read(ce, "epochs", c.training.char_embeddings.epochs);
    Read(ce, "lr", c.training.char_embeddings.lr);

    const Json f = j.value("features", Json::object());
    Read(f, "edit_dist_max", c.features.edit_dist_max);
    Read(f, "comment_dist_absent", c.features.comment_dist_absent);

    const Json a = j.value("ablations", Json::object());
    Read(a, "comment_attention", c.ablations.comment_attention);
    Read(a, "article_attention", c.ablations.article_attention);
    Read(a, "features", c.ablations.features);
    Read(a, "pretrain", c.ablations.pretrain);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.ToModelConfig();  // validates dims
  if (c.training.batch_size < 1 || c.training.epochs < 0) {
    throw InvalidArgument("batch_size must be >= 1 and epochs >= 0");
  }
  return c;
}

XrefConfig XrefConfig::Load(const std::string& path) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw LoadError("config " + path + " is not valid JSON: " + e.what());
  }
  XrefConfig c = FromJson(j);
  const auto base = std::filesystem::path(path).parent_path();
  for (std::string* p :
       {&c.data.kb, &c.data.articles, &c.data.comments, &c.data.split, &c.data.titles,
        &c.data.unlabeled_articles, &c.data.unlabeled_comments, &c.data.pronouns,
        &c.data.transliteration, &c.data.special_surfaces, &c.data.node_embeddings,
        &c.data.word_embeddings, &c.data.char_embeddings}) {
    ResolvePath(base, *p);
  }
  return c;
}

std::string XrefConfig::Hash() const { return HexU64(Fnv1a64(ToJson().dump())); }

}  // namespace xref
