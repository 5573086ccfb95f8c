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

#ifndef XREF_FEATURES_H_
#define XREF_FEATURES_H_

#include <array>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xref/candidates.h"
#include "xref/corpus.h"
#include "xref/kb.h"
#include "xref/text.h"

namespace xref {

inline constexpr int kNumFeatures = 20;

enum FeatureIndex {
  kCanonMatch,
  kNicknMatch,
  kCharJaccard,
  kPinyJaccard,
  kGendMatch,
  kEntArtFreq,
  kCommentDist,
  kPriorProb,
  kSpecial,
  kEditDist,
  kStartWithMent,
  kEndWithMent,
  kStartInMent,
  kEndInMent,
  kEqualWordCnt,
  kMissWordCnt,
  kContxtSim,
  kContxtSimRank,
  kAllInSrc,
  kMatchedNE,
};

using FeatureVector = std::array<double, kNumFeatures>;

const std::array<std::string_view, kNumFeatures>& FeatureNames();

// Levenshtein distance over code points with unit costs.
int EditDistance(std::u32string_view a, std::u32string_view b);

// |A n B| / |A u B| over character sets; 0 when both are empty.
double CharJaccard(std::u32string_view a, std::u32string_view b);

// P(e | surface) by maximum likelihood over training links. Surfaces are
// normalized; NIL mentions count toward kNilId. A plural mention adds one
// link per gold entity.
class PriorTable {
 public:
  static PriorTable Build(std::span<const Comment* const> train_comments);

  double Prob(std::string_view surface, std::string_view entity_id) const;
  // Normalized surface -> entity -> probability.
  const std::map<std::string, std::map<std::string, double>>& rows() const {
    return rows_;
  }

 private:
  std::map<std::string, std::map<std::string, double>> rows_;
};

struct PronounInfo {
  Gender gender = Gender::kUnknown;
  bool plural = false;
};

// JSONL {"surface", "gender", "plural"}.
class PronounLexicon {
 public:
  static PronounLexicon Parse(std::string_view jsonl);
  void Add(std::string_view surface, PronounInfo info);

  const PronounInfo* Find(std::string_view surface) const;
  std::set<std::string> Surfaces() const;

 private:
  std::map<std::string, PronounInfo, std::less<>> entries_;
};

// Per-character romanization, JSONL {"char", "roman"}. Unmapped characters
// stand for themselves.
class Transliterator {
 public:
  static Transliterator Parse(std::string_view jsonl);
  std::vector<std::string> Apply(std::u32string_view text) const;

 private:
  std::map<char32_t, std::string> table_;
};

using SparseVec = std::map<std::string, double>;

// Raw term frequency times smoothed idf ln((1 + N) / (1 + df)) + 1.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  static TfIdfModel Build(const std::vector<std::vector<std::string>>& docs);

  double Idf(const std::string& term) const;
  SparseVec Vectorize(std::span<const std::string> tokens) const;
  // Cosine of the two vectors; 0 when either is zero.
  static double Cosine(const SparseVec& a, const SparseVec& b);
  double Similarity(std::span<const std::string> a,
                    std::span<const std::string> b) const;

 private:
  int num_docs_ = 0;
  std::map<std::string, int> df_;
};

struct FeatureConfig {
  double edit_dist_max = 100;  // NIL value of EditDist
  double comment_dist_absent = 100;
  std::set<std::string> special_surfaces;  // normalized
  PronounLexicon pronouns;
  Transliterator transliterator;
};

// Normalized tokens of a text under the given tokenizer.
std::vector<std::string> TokenStrings(const Tokenizer& tokenizer,
                                      std::u32string_view text);

class FeatureExtractor {
 public:
  // idf statistics come from the training comments plus all entity
  // descriptions. The referenced kb and priors must outlive the extractor.
  FeatureExtractor(const KnowledgeBase& kb, const PriorTable& priors,
                   std::span<const Comment* const> train_comments,
                   FeatureConfig config);

  // All features except ContxtSimRank, which needs the candidate set.
  FeatureVector Extract(const Comment& comment, const Mention& mention,
                        const Article& article, std::string_view candidate) const;

  // One vector per candidate, ContxtSimRank included: 1 / rank of ContxtSim
  // among the non-NIL candidates, equal values sharing the better rank; NIL
  // gets 0.
  std::vector<FeatureVector> ExtractAll(const Comment& comment,
                                        const Mention& mention,
                                        const Article& article,
                                        const CandidateSet& candidates) const;

  const TfIdfModel& tfidf() const { return tfidf_; }

 private:
  struct EntityInfo {
    std::u32string canonical;               // normalized
    std::vector<std::u32string> nicknames;  // normalized
    std::vector<std::set<std::string>> name_words;  // canonical first
    std::vector<std::string> canonical_words;
    SparseVec description_vec;
    std::set<int> description_names;  // canonical matcher keys
    SurfaceMatcher canonical_matcher;
    SurfaceMatcher all_names_matcher;
  };

  const EntityInfo& Info(std::string_view id) const;

  const KnowledgeBase* kb_;
  const PriorTable* priors_;
  FeatureConfig config_;
  std::unique_ptr<Tokenizer> tokenizer_;
  SurfaceMatcher canonical_names_;
  TfIdfModel tfidf_;
  std::map<std::string, EntityInfo, std::less<>> info_;
};

}  // namespace xref

#endif  // XREF_FEATURES_H_
