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

#ifndef XREF_MODEL_H_
#define XREF_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xref/corpus.h"
#include "xref/embeddings.h"
#include "xref/features.h"
#include "xref/io.h"
#include "xref/nn.h"
#include "xref/rng.h"

namespace xref {

// One mention with everything the network consumes precomputed.
struct LinkingExample {
  std::string comment_id;
  std::string article_id;
  int start = 0;
  int end = 0;
  std::u32string text;
  std::optional<MentionType> type;
  std::vector<std::string> gold;  // empty for NIL

  std::vector<std::string> candidate_ids;  // NIL included
  std::vector<Vec> candidate_inputs;       // u per candidate; empty for NIL
  std::vector<FeatureVector> features;     // per candidate, or empty
  std::vector<std::string> article_entities;  // E_a
  std::vector<Vec> article_inputs;            // u per E_a entry

  // 1 on every candidate that is a gold entity (NIL for NIL mentions).
  Vec Targets() const;
  // 1 on every E_a entry matching a gold id, or on ABS (last) if none does.
  Vec AttentionTargets() const;
};

enum class BaseStateMode {
  kFinalStates,   // [fwd h_T; bwd h_1]
  kLastPosition,  // [fwd h_T; bwd h_T]
};

enum class NilMode {
  kTrainableVector,  // v_nil stands in for v_e
  kFixedBias,        // NIL dot score is the constant nil_bias
};

struct ModelConfig {
  int char_dim = 300;
  int hidden = 100;  // per direction
  int joint_dim = 300;
  int entity_dim = 600;

  bool comment_attention = true;
  bool article_attention = true;
  bool features = true;

  double lambda = 0.1;
  bool normalize_att_targets = false;
  bool freeze_char_emb = false;
  BaseStateMode base_state = BaseStateMode::kFinalStates;
  NilMode nil_mode = NilMode::kTrainableVector;
  double nil_bias = 0.0;

  int fusion_input_dim() const { return 4 * hidden + entity_dim; }
  void Validate() const;
  Json ToJson() const;
  static ModelConfig FromJson(const Json& j);
};

struct ScoredCandidates {
  std::vector<std::string> candidate_ids;
  Vec logits;
  Vec probs;
  Vec alpha;  // over comment characters; empty without comment attention
  Vec beta;   // over E_a then ABS; empty without article attention
};

struct RankedCandidate {
  std::string entity_id;
  double prob = 0;
};

class XrefModel {
 public:
  // char_vocab[0] is the UNK label; other entries are single characters.
  XrefModel(ModelConfig config, std::vector<std::string> char_vocab);

  // Random initialization; char embeddings are copied from char_init where
  // it has the label.
  void Init(Rng& rng, const EmbeddingTable* char_init = nullptr);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  const std::vector<std::string>& char_vocab() const { return char_vocab_; }
  int CharId(char32_t c) const;

  // Trainable parameters (char embeddings excluded when frozen).
  std::vector<Parameter*> params();
  // Every parameter, for checkpoints.
  std::vector<Parameter*> all_params();
  Parameter* FindParam(std::string_view name);

  // m~: mean character embedding over [start, end).
  Vec MentionQuery(std::u32string_view text, int start, int end) const;

  ScoredCandidates Score(const LinkingExample& ex) const;
  std::vector<RankedCandidate> PredictTopK(const LinkingExample& ex, int k) const;

  struct LossParts {
    double total = 0;  // mean of el + lambda * att
    double el = 0;     // mean
    double att = 0;    // mean
    int correct = 0;   // rank-1 in gold, before any update
  };
  // Adds d(total)/d(theta) to the parameter gradients when backward is set.
  LossParts Loss(std::span<const LinkingExample> batch, bool backward);
  LossParts Loss(std::span<const LinkingExample* const> batch, bool backward);

  Json ToJson() const;
  static XrefModel FromJson(const Json& j);

 private:
  struct Cache;
  double Forward(const LinkingExample& ex, Cache* cache) const;
  void Backward(const LinkingExample& ex, const Cache& cache, double scale);

  ModelConfig config_;
  std::vector<std::string> char_vocab_;
  std::unordered_map<char32_t, int> char_ids_;

  Parameter char_emb_;
  BiLstm lstm_;
  Parameter w_c_;
  Parameter w_a_;
  Parameter w_e_;
  Parameter b_e_;
  Parameter w_m_;
  Parameter b_m_;
  Parameter w_;  // 1 x (1 + kNumFeatures)
  Parameter v_nil_;
};

// Fraction of examples whose rank-1 candidate is a gold entity (NIL for NIL
// mentions).
double LinkingAccuracy(const XrefModel& model, std::span<const LinkingExample> examples);

struct TrainOptions {
  int epochs = 200;
  int batch_size = 128;
  AdamOptions adam;
  double clip_norm = 5.0;
  // Epochs without a validation improvement before stopping; <= 0 disables.
  int patience = 10;
  uint64_t seed = 0;
  bool log_progress = false;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0;
  double train_acc = 0;  // measured during the epoch, before each update
  double valid_acc = 0;
};

struct TrainResult {
  std::vector<EpochStats> trace;
  int best_epoch = 0;
  double best_valid_acc = 0;
};

// Shuffled minibatches, Adam and global-norm clipping; keeps the parameters
// of the epoch with the best validation accuracy (training accuracy when
// valid is empty). The model is trained in place from its current values.
TrainResult Train(XrefModel& model, std::span<const LinkingExample> train,
                  std::span<const LinkingExample> valid, const TrainOptions& options);

Json TrainResultToJson(const TrainResult& r);

}  // namespace xref

#endif  // XREF_MODEL_H_
