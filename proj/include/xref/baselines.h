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

#ifndef XREF_BASELINES_H_
#define XREF_BASELINES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xref/corpus.h"
#include "xref/features.h"
#include "xref/kb.h"
#include "xref/model.h"
#include "xref/nn.h"

namespace xref {

// Exact canonical-name lookup; several holders resolve to the lowest id,
// none to NIL.
std::string MatchCanon(std::string_view surface, const KnowledgeBase& kb);

// MatchCanon, then the same lookup over nicknames.
std::string MatchCanonAndNick(std::string_view surface, const KnowledgeBase& kb);

// E_a ranked by the number of canonical-name occurrences in the article,
// ties in first-occurrence order; [NIL] when E_a is empty.
std::vector<std::string> FrequencyInArt(const Article& article, const KnowledgeBase& kb);

// E_a in first-occurrence order; [NIL] when empty.
std::vector<std::string> FirstInArt(const Article& article, const KnowledgeBase& kb);

// Entities of the surface's prior row by descending probability (ties by
// id); [NIL] for an unseen surface.
std::vector<std::string> PriorRanking(std::string_view surface, const PriorTable& priors);

// Candidates by TF-IDF cosine between the comment and each entity
// description, ties in candidate order.
std::vector<std::string> VsmRank(const LinkingExample& ex, const KnowledgeBase& kb,
                                 const TfIdfModel& tfidf, const Tokenizer& tokenizer);

struct LogRegOptions {
  double lr = 0.1;
  int epochs = 200;
  int batch_size = 32;
  uint64_t seed = 0;
};

// Pointwise binary logistic regression over standardized features plus a
// bias.
class LogReg {
 public:
  LogReg();

  // Throws InvalidArgument when all labels agree.
  void Train(std::span<const FeatureVector> x, std::span<const double> y,
             const LogRegOptions& options);

  // Probability that the candidate is gold.
  double Score(const FeatureVector& f) const;
  // Candidate order ties.
  std::vector<std::string> Rank(const LinkingExample& ex) const;

  // Mean binary cross-entropy; adds its gradient to weights().grad when
  // backward is set. Uses the current standardization.
  double Loss(std::span<const FeatureVector> x, std::span<const double> y, bool backward);

  Parameter& weights() { return w_; }  // 1 x (kNumFeatures + 1), bias last
  void SetStandardization(const FeatureVector& mean, const FeatureVector& scale);

 private:
  double Logit(const FeatureVector& f) const;

  Parameter w_;
  FeatureVector mean_{};
  FeatureVector scale_{};
};

// (features, label) pairs for every candidate of every example.
void LogRegData(std::span<const LinkingExample> examples, std::vector<FeatureVector>* x,
                std::vector<double>* y);

}  // namespace xref

#endif  // XREF_BASELINES_H_
