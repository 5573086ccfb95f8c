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

#include "xref/baselines.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "xref/candidates.h"
#include "xref/error.h"
#include "xref/rng.h"
#include "xref/text.h"

namespace xref {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<std::string> RankByScore(const std::vector<std::string>& ids, const Vec& scores) {
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  std::vector<std::string> out;
  for (int i : order) out.push_back(ids[i]);
  return out;
}

}  // namespace

std::string MatchCanon(std::string_view surface, const KnowledgeBase& kb) {
  if (surface.empty()) return std::string(kNilId);
  const IdSet ids = kb.LookupSurface(surface, /*use_nicknames=*/false);
  return ids.empty() ? std::string(kNilId) : *ids.begin();
}

std::string MatchCanonAndNick(std::string_view surface, const KnowledgeBase& kb) {
  std::string canon = MatchCanon(surface, kb);
  if (canon != kNilId) return canon;
  const std::string key = NormalizeSurface(surface);
  auto it = kb.alias_index().find(key);
  if (it == kb.alias_index().end()) return std::string(kNilId);
  // The alias index also holds harvested aliases; only listed nicknames count.
  for (const auto& id : it->second) {
    for (const auto& n : kb.Get(id).nicknames) {
      if (NormalizeSurface(n) == key) return id;
    }
  }
  return std::string(kNilId);
}

std::vector<std::string> FrequencyInArt(const Article& article, const KnowledgeBase& kb) {
  auto tokenizer = MakeCanonicalTokenizer(kb);
  const std::vector<std::string> entities = ArticleEntitySet(article, kb, *tokenizer);
  if (entities.empty()) return {std::string(kNilId)};
  std::map<std::string, double> counts;
  for (std::u32string_view seg : ArticleSegments(article)) {
    for (const auto& tok : tokenizer->Tokenize(seg)) {
      auto it = kb.canonical_index().find(NormalizeSurface(U32ToUtf8(tok)));
      if (it == kb.canonical_index().end()) continue;
      for (const auto& id : it->second) counts[id] += 1;
    }
  }
  Vec scores;
  for (const auto& id : entities) scores.push_back(counts[id]);
  return RankByScore(entities, scores);
}

std::vector<std::string> FirstInArt(const Article& article, const KnowledgeBase& kb) {
  std::vector<std::string> entities = ArticleEntitySet(article, kb);
  if (entities.empty()) return {std::string(kNilId)};
  return entities;
}

std::vector<std::string> PriorRanking(std::string_view surface, const PriorTable& priors) {
  auto it = priors.rows().find(NormalizeSurface(surface));
  if (it == priors.rows().end()) return {std::string(kNilId)};
  std::vector<std::string> ids;
  Vec scores;
  for (const auto& [id, p] : it->second) {
    ids.push_back(id);
    scores.push_back(p);
  }
  return RankByScore(ids, scores);
}

std::vector<std::string> VsmRank(const LinkingExample& ex, const KnowledgeBase& kb,
                                 const TfIdfModel& tfidf, const Tokenizer& tokenizer) {
  const SparseVec comment = tfidf.Vectorize(TokenStrings(tokenizer, ex.text));
  Vec scores;
  for (const auto& id : ex.candidate_ids) {
    double s = 0;
    if (id != kNilId) {
      const Entity& e = kb.Get(id);
      if (e.description) {
        s = TfIdfModel::Cosine(
            tfidf.Vectorize(TokenStrings(tokenizer, Utf8ToU32(*e.description))), comment);
      }
    }
    scores.push_back(s);
  }
  return RankByScore(ex.candidate_ids, scores);
}

LogReg::LogReg() : w_("logreg.w", 1, kNumFeatures + 1) { scale_.fill(1.0); }

void LogReg::SetStandardization(const FeatureVector& mean, const FeatureVector& scale) {
  mean_ = mean;
  scale_ = scale;
}

double LogReg::Logit(const FeatureVector& f) const {
  double z = w_.value(0, kNumFeatures);
  for (int k = 0; k < kNumFeatures; ++k) z += w_.value(0, k) * (f[k] - mean_[k]) / scale_[k];
  return z;
}

double LogReg::Score(const FeatureVector& f) const { return Sigmoid(Logit(f)); }

std::vector<std::string> LogReg::Rank(const LinkingExample& ex) const {
  if (ex.features.size() != ex.candidate_ids.size()) {
    throw InvalidArgument("logistic regression needs a feature vector per candidate");
  }
  Vec scores;
  for (const auto& f : ex.features) scores.push_back(Logit(f));
  return RankByScore(ex.candidate_ids, scores);
}

double LogReg::Loss(std::span<const FeatureVector> x, std::span<const double> y, bool backward) {
  if (x.size() != y.size() || x.empty()) throw ShapeError("logistic data size mismatch");
  const double inv = 1.0 / x.size();
  double loss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double z = Logit(x[i]);
    // log(1 + e^z) - y z
    loss += inv * ((z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - y[i] * z);
    if (!backward) continue;
    const double g = inv * (Sigmoid(z) - y[i]);
    for (int k = 0; k < kNumFeatures; ++k) {
      w_.grad(0, k) += g * (x[i][k] - mean_[k]) / scale_[k];
    }
    w_.grad(0, kNumFeatures) += g;
  }
  return loss;
}

void LogReg::Train(std::span<const FeatureVector> x, std::span<const double> y,
                   const LogRegOptions& options) {
  if (x.size() != y.size() || x.empty()) throw ShapeError("logistic data size mismatch");
  const bool has_pos = std::any_of(y.begin(), y.end(), [](double v) { return v > 0.5; });
  const bool has_neg = std::any_of(y.begin(), y.end(), [](double v) { return v <= 0.5; });
  if (!has_pos || !has_neg) {
    throw InvalidArgument("logistic regression needs both positive and negative examples");
  }
  FeatureVector mean{}, scale{};
  for (const auto& f : x) {
    for (int k = 0; k < kNumFeatures; ++k) mean[k] += f[k] / x.size();
  }
  for (const auto& f : x) {
    for (int k = 0; k < kNumFeatures; ++k) scale[k] += (f[k] - mean[k]) * (f[k] - mean[k]) / x.size();
  }
  for (double& s : scale) s = s > 1e-12 ? std::sqrt(s) : 1.0;
  SetStandardization(mean, scale);
  w_.value.SetZero();
  w_.grad.SetZero();

  Rng rng(options.seed);
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<FeatureVector> bx;
  std::vector<double> by;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.Shuffle(std::span<int>(order));
    for (size_t s = 0; s < order.size(); s += options.batch_size) {
      bx.clear();
      by.clear();
      for (size_t i = s; i < std::min(order.size(), s + options.batch_size); ++i) {
        bx.push_back(x[order[i]]);
        by.push_back(y[order[i]]);
      }
      Loss(bx, by, true);
      Axpy(-options.lr, w_.grad.data(), w_.value.data());
      w_.grad.SetZero();
    }
  }
}

void LogRegData(std::span<const LinkingExample> examples, std::vector<FeatureVector>* x,
                std::vector<double>* y) {
  for (const auto& ex : examples) {
    if (ex.features.size() != ex.candidate_ids.size()) {
      throw InvalidArgument("example " + ex.comment_id + " lacks features");
    }
    const Vec t = ex.Targets();
    for (size_t i = 0; i < t.size(); ++i) {
      x->push_back(ex.features[i]);
      y->push_back(t[i] > 0 ? 1.0 : 0.0);
    }
  }
}

}  // namespace xref
