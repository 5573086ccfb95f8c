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

#ifndef XREF_CONFIG_H_
#define XREF_CONFIG_H_

#include <string>

#include "xref/embeddings.h"
#include "xref/io.h"
#include "xref/model.h"
#include "xref/synthetic.h"

namespace xref {

struct DataConfig {
  // Paths; empty means unused. Relative paths resolve against the config
  // file's directory.
  std::string kb;
  std::string articles;
  std::string comments;
  std::string split;
  std::string titles;  // one title per line
  std::string unlabeled_articles;
  std::string unlabeled_comments;
  std::string pronouns;
  std::string transliteration;
  std::string special_surfaces;
  std::string node_embeddings;
  std::string word_embeddings;
  std::string char_embeddings;

  bool harvest_aliases = true;
  // Used when kb is empty: data is generated instead of loaded.
  SyntheticConfig synthetic;
};

struct DimsConfig {
  int char_dim = 300;
  int hidden_per_direction = 100;
  int joint_dim = 300;
  int node_dim = 300;
  int word_dim = 300;
};

struct TrainingConfig {
  AdamOptions adam;
  double clip_norm = 5.0;
  int batch_size = 128;
  int epochs = 200;
  int patience = 10;
  double lambda = 0.1;
  bool normalize_att_targets = false;
  bool freeze_char_emb = false;
  BaseStateMode base_state = BaseStateMode::kFinalStates;
  NilMode nil_mode = NilMode::kTrainableVector;
  double nil_bias = 0.0;
  int pretrain_epochs = 20;
  Node2VecParams node2vec;
  CharEmbeddingParams char_embeddings;
};

struct FeaturesConfig {
  double edit_dist_max = 100;
  double comment_dist_absent = 100;
};

struct AblationConfig {
  bool comment_attention = true;
  bool article_attention = true;
  bool features = true;
  bool pretrain = true;
};

struct XrefConfig {
  DataConfig data;
  DimsConfig dims;
  TrainingConfig training;
  FeaturesConfig features;
  AblationConfig ablations;

  ModelConfig ToModelConfig() const;
  TrainOptions ToTrainOptions(uint64_t seed) const;

  Json ToJson() const;
  // Missing keys keep their defaults; unknown sections raise InvalidArgument.
  static XrefConfig FromJson(const Json& j);
  static XrefConfig Load(const std::string& path);

  // FNV-1a of the canonical JSON dump, in hex.
  std::string Hash() const;
};

}  // namespace xref

#endif  // XREF_CONFIG_H_
