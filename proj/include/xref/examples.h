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

#ifndef XREF_EXAMPLES_H_
#define XREF_EXAMPLES_H_

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xref/candidates.h"
#include "xref/config.h"
#include "xref/corpus.h"
#include "xref/embeddings.h"
#include "xref/eval.h"
#include "xref/features.h"
#include "xref/kb.h"
#include "xref/model.h"

namespace xref {

// Turns annotated mentions into LinkingExamples. Referenced objects must
// outlive the builder; features may be null.
class ExampleBuilder {
 public:
  ExampleBuilder(const KnowledgeBase& kb, const EntityInputTable& inputs,
                 const CandidateBuilder& candidates, const FeatureExtractor* features);

  LinkingExample Build(const Comment& comment, const Mention& mention,
                       const Article& article) const;
  // Every mention of every comment, articles looked up in `articles`.
  std::vector<LinkingExample> BuildAll(std::span<const Comment* const> comments,
                                       const Corpus& articles) const;

 private:
  LinkingExample Build(const Comment& comment, const Mention& mention, const Article& article,
                       const std::vector<std::string>& article_entities) const;

  const KnowledgeBase& kb_;
  const EntityInputTable& inputs_;
  const CandidateBuilder& candidates_;
  const FeatureExtractor* features_;
  std::unique_ptr<Tokenizer> tokenizer_;
};

// Everything loaded or generated before embeddings are trained.
struct Dataset {
  KnowledgeBase kb;
  Corpus corpus;
  DatasetSplit split;
  std::vector<std::string> titles;
  Corpus unlabeled;
  PronounLexicon pronouns;
  Transliterator transliterator;
  std::set<std::string> special_surfaces;
};

// Reads the files named in config.data, or generates synthetic data with
// the given seed when no KB path is set.
Dataset LoadDataset(const XrefConfig& config, uint64_t seed);
Dataset DatasetFromSynthetic(SyntheticData data);

struct EmbeddingSet {
  EmbeddingTable node;
  EmbeddingTable word;
  EmbeddingTable chars;
};

// Node2vec and SVD over the title stream, skip-gram characters over the
// training and unlabeled comments. Seeds derive from `seed`.
EmbeddingSet TrainEmbeddings(const Dataset& data, const XrefConfig& config, uint64_t seed);

// Embedding files named in config.data, falling back to training them.
EmbeddingSet LoadOrTrainEmbeddings(const Dataset& data, const XrefConfig& config,
                                   uint64_t seed);

// Alias harvesting, priors, features, candidates and example building over
// a dataset. The dataset's KB receives the harvested aliases when enabled.
class Pipeline {
 public:
  Pipeline(Dataset data, XrefConfig config, uint64_t seed);
  Pipeline(Dataset data, XrefConfig config, uint64_t seed, EmbeddingSet embeddings);
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  const Dataset& data() const { return data_; }
  const XrefConfig& config() const { return config_; }
  const EmbeddingSet& embeddings() const { return embeddings_; }
  const PriorTable& priors() const { return priors_; }
  const FeatureExtractor& features() const { return *features_; }
  const CandidateBuilder& candidates() const { return *candidates_; }
  const EntityInputTable& inputs() const { return inputs_; }
  const std::vector<AliasAddition>& aliases() const { return aliases_; }

  std::vector<const Comment*> Comments(const std::set<std::string>& article_ids) const;
  std::vector<LinkingExample> Examples(const std::set<std::string>& article_ids) const;
  // Weak labels over the unlabeled corpus.
  std::vector<LinkingExample> WeakExamples() const;

  XrefModel NewModel(uint64_t seed) const;

  struct Trained {
    TrainResult pretrain;
    TrainResult finetune;
  };
  // Optional pre-training on weak examples (ablations.pretrain and a
  // non-empty weak set), then training on train with early stopping on valid.
  Trained Fit(XrefModel& model, std::span<const LinkingExample> train,
              std::span<const LinkingExample> valid, std::span<const LinkingExample> weak,
              uint64_t seed) const;

 private:
  void Prepare();

  Dataset data_;
  XrefConfig config_;
  uint64_t seed_;
  EmbeddingSet embeddings_;
  std::vector<AliasAddition> aliases_;
  PriorTable priors_;
  std::unique_ptr<FeatureExtractor> features_;
  std::unique_ptr<CandidateBuilder> candidates_;
  EntityInputTable inputs_;
};

// Full ranking of every candidate per example.
std::vector<PredictionRecord> PredictXref(const XrefModel& model,
                                          std::span<const LinkingExample> examples);

const std::vector<std::string>& BaselineNames();

// Rankings of a named baseline. Examples must carry features for "logreg",
// which is fitted on `train`.
std::vector<PredictionRecord> PredictBaseline(const Pipeline& pipeline, std::string_view system,
                                              std::span<const LinkingExample> examples,
                                              std::span<const LinkingExample> train,
                                              uint64_t seed);

}  // namespace xref

#endif  // XREF_EXAMPLES_H_
