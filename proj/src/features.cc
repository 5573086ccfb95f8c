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

#include "xref/features.h"

#include <algorithm>
#include <cmath>

#include "xref/error.h"
#include "xref/io.h"

namespace xref {
namespace {

bool StartsWith(std::u32string_view s, std::u32string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool EndsWith(std::u32string_view s, std::u32string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::u32string Norm32(std::u32string_view s) {
  return Utf8ToU32(NormalizeSurface(U32ToUtf8(s)));
}

double Jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  int inter = 0;
  for (const auto& x : a) inter += b.count(x) ? 1 : 0;
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace

const std::array<std::string_view, kNumFeatures>& FeatureNames() {
  static const std::array<std::string_view, kNumFeatures> kNames = {
      "CanonMatch",    "NicknMatch",   "CharJaccard",  "PinyJaccard",
      "GendMatch",     "EntArtFreq",   "CommentDist",  "PriorProb",
      "Special",       "EditDist",     "StartWithMent", "EndWithMent",
      "StartInMent",   "EndInMent",    "EqualWordCnt", "MissWordCnt",
      "ContxtSim",     "ContxtSimRank", "AllInSrc",    "MatchedNE"};
  return kNames;
}

int EditDistance(std::u32string_view a, std::u32string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double CharJaccard(std::u32string_view a, std::u32string_view b) {
  std::set<std::string> sa, sb;
  for (char32_t c : a) sa.insert(U32ToUtf8(c));
  for (char32_t c : b) sb.insert(U32ToUtf8(c));
  return Jaccard(sa, sb);
}

PriorTable PriorTable::Build(std::span<const Comment* const> train_comments) {
  std::map<std::string, std::map<std::string, double>> counts;
  for (const Comment* c : train_comments) {
    for (const Mention& m : c->mentions) {
      auto& row = counts[NormalizeSurface(U32ToUtf8(c->Surface(m)))];
      if (m.is_nil()) {
        row[std::string(kNilId)] += 1;
      } else {
        for (const auto& g : m.gold) row[g] += 1;
      }
    }
  }
  PriorTable t;
  for (auto& [surface, row] : counts) {
    double total = 0;
    for (const auto& [id, n] : row) total += n;
    for (auto& [id, n] : row) n /= total;
    t.rows_.emplace(surface, std::move(row));
  }
  return t;
}

double PriorTable::Prob(std::string_view surface, std::string_view entity_id) const {
  auto it = rows_.find(NormalizeSurface(surface));
  if (it == rows_.end()) return 0.0;
  auto jt = it->second.find(std::string(entity_id));
  return jt == it->second.end() ? 0.0 : jt->second;
}

PronounLexicon PronounLexicon::Parse(std::string_view jsonl) {
  PronounLexicon lex;
  ForEachJsonLine(jsonl, [&](int line, const Json& obj) {
    if (!obj.contains("surface") || !obj["surface"].is_string()) {
      throw LoadError("pronoun lexicon line " + std::to_string(line) + ": missing surface");
    }
    PronounInfo info;
    if (obj.contains("gender")) info.gender = ParseGender(obj["gender"].get<std::string>());
    info.plural = obj.value("plural", false);
    lex.Add(obj["surface"].get<std::string>(), info);
  });
  return lex;
}

void PronounLexicon::Add(std::string_view surface, PronounInfo info) {
  entries_[NormalizeSurface(surface)] = info;
}

const PronounInfo* PronounLexicon::Find(std::string_view surface) const {
  auto it = entries_.find(NormalizeSurface(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<std::string> PronounLexicon::Surfaces() const {
  std::set<std::string> out;
  for (const auto& [s, info] : entries_) out.insert(s);
  return out;
}

Transliterator Transliterator::Parse(std::string_view jsonl) {
  Transliterator t;
  ForEachJsonLine(jsonl, [&](int line, const Json& obj) {
    const std::u32string c = Utf8ToU32(obj.value("char", std::string()));
    if (c.size() != 1 || !obj.contains("roman")) {
      throw LoadError("transliteration line " + std::to_string(line) +
                      ": need one 'char' and a 'roman'");
    }
    t.table_[c[0]] = obj["roman"].get<std::string>();
  });
  return t;
}

std::vector<std::string> Transliterator::Apply(std::u32string_view text) const {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (char32_t c : text) {
    auto it = table_.find(c);
    out.push_back(it == table_.end() ? U32ToUtf8(c) : it->second);
  }
  return out;
}

TfIdfModel TfIdfModel::Build(const std::vector<std::vector<std::string>>& docs) {
  TfIdfModel m;
  m.num_docs_ = static_cast<int>(docs.size());
  for (const auto& doc : docs) {
    const std::set<std::string> terms(doc.begin(), doc.end());
    for (const auto& t : terms) ++m.df_[t];
  }
  return m;
}

double TfIdfModel::Idf(const std::string& term) const {
  auto it = df_.find(term);
  const int df = it == df_.end() ? 0 : it->second;
  return std::log((1.0 + num_docs_) / (1.0 + df)) + 1.0;
}

SparseVec TfIdfModel::Vectorize(std::span<const std::string> tokens) const {
  SparseVec v;
  for (const auto& t : tokens) v[t] += 1;
  for (auto& [t, x] : v) x *= Idf(t);
  return v;
}

double TfIdfModel::Cosine(const SparseVec& a, const SparseVec& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, x] : a) {
    na += x * x;
    auto it = b.find(t);
    if (it != b.end()) dot += x * it->second;
  }
  for (const auto& [t, x] : b) nb += x * x;
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double TfIdfModel::Similarity(std::span<const std::string> a,
                              std::span<const std::string> b) const {
  return Cosine(Vectorize(a), Vectorize(b));
}

std::vector<std::string> TokenStrings(const Tokenizer& tokenizer,
                                      std::u32string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : tokenizer.Tokenize(text)) {
    std::string s = NormalizeSurface(U32ToUtf8(tok));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

FeatureExtractor::FeatureExtractor(const KnowledgeBase& kb, const PriorTable& priors,
                                   std::span<const Comment* const> train_comments,
                                   FeatureConfig config)
    : kb_(&kb),
      priors_(&priors),
      config_(std::move(config)),
      tokenizer_(MakeCanonicalTokenizer(kb)) {
  for (const auto& [surface, ids] : kb.canonical_index()) canonical_names_.Add(surface);

  std::vector<std::vector<std::string>> docs;
  for (const Comment* c : train_comments) docs.push_back(TokenStrings(*tokenizer_, c->chars));
  std::map<std::string, std::vector<std::string>> description_tokens;
  for (const auto& [id, e] : kb.entities()) {
    if (!e.description) continue;
    description_tokens[id] = TokenStrings(*tokenizer_, Utf8ToU32(*e.description));
    docs.push_back(description_tokens[id]);
  }
  tfidf_ = TfIdfModel::Build(docs);

  for (const auto& [id, e] : kb.entities()) {
    EntityInfo info;
    info.canonical = Norm32(Utf8ToU32(e.canonical_name));
    info.canonical_matcher.Add(e.canonical_name);
    info.all_names_matcher.Add(e.canonical_name);
    auto words_of = [&](std::u32string_view name) {
      const auto toks = TokenStrings(*tokenizer_, name);
      return std::set<std::string>(toks.begin(), toks.end());
    };
    info.name_words.push_back(words_of(info.canonical));
    info.canonical_words = TokenStrings(*tokenizer_, info.canonical);
    for (const auto& n : e.nicknames) {
      info.nicknames.push_back(Norm32(Utf8ToU32(n)));
      info.all_names_matcher.Add(n);
      info.name_words.push_back(words_of(info.nicknames.back()));
    }
    if (e.description) {
      info.description_vec = tfidf_.Vectorize(description_tokens[id]);
      for (const auto& m : canonical_names_.FindAll(Utf8ToU32(*e.description))) {
        info.description_names.insert(m.key);
      }
    }
    info_.emplace(id, std::move(info));
  }
}

const FeatureExtractor::EntityInfo& FeatureExtractor::Info(std::string_view id) const {
  auto it = info_.find(id);
  if (it == info_.end()) throw NotFoundError("unknown candidate entity '" + std::string(id) + "'");
  return it->second;
}

FeatureVector FeatureExtractor::Extract(const Comment& comment, const Mention& mention,
                                        const Article& article,
                                        std::string_view candidate) const {
  FeatureVector f{};
  const std::string raw_surface = U32ToUtf8(comment.Surface(mention));
  const std::u32string surface = Norm32(comment.Surface(mention));
  f[kSpecial] = config_.special_surfaces.count(NormalizeSurface(raw_surface)) ? 1 : 0;

  if (candidate == kNilId) {
    f[kEditDist] = config_.edit_dist_max;
    f[kCommentDist] = config_.comment_dist_absent;
    f[kPriorProb] = priors_->Prob(raw_surface, kNilId);
    return f;
  }

  const EntityInfo& info = Info(candidate);
  const Entity& entity = kb_->Get(std::string(candidate));

  f[kCanonMatch] = surface == info.canonical ? 1 : 0;
  f[kNicknMatch] = std::find(info.nicknames.begin(), info.nicknames.end(), surface) !=
                           info.nicknames.end()
                       ? 1
                       : 0;
  f[kCharJaccard] = CharJaccard(surface, info.canonical);
  {
    const auto a = config_.transliterator.Apply(surface);
    const auto b = config_.transliterator.Apply(info.canonical);
    f[kPinyJaccard] = Jaccard(std::set<std::string>(a.begin(), a.end()),
                              std::set<std::string>(b.begin(), b.end()));
  }
  if (const PronounInfo* p = config_.pronouns.Find(raw_surface)) {
    f[kGendMatch] = !p->plural && p->gender != Gender::kUnknown &&
                            entity.gender != Gender::kUnknown && p->gender == entity.gender
                        ? 1
                        : 0;
  }

  int freq = 0;
  for (std::u32string_view seg : ArticleSegments(article)) {
    freq += static_cast<int>(info.all_names_matcher.FindAll(seg).size());
  }
  f[kEntArtFreq] = freq;

  double dist = config_.comment_dist_absent;
  bool found = false;
  for (const SurfaceMatch& m : info.canonical_matcher.FindEvery(comment.chars)) {
    int gap = 0;
    if (m.end <= mention.start) {
      gap = mention.start - m.end;
    } else if (mention.end <= m.start) {
      gap = m.start - mention.end;
    }
    if (!found || gap < dist) dist = gap;
    found = true;
  }
  f[kCommentDist] = dist;

  f[kPriorProb] = priors_->Prob(raw_surface, candidate);
  f[kEditDist] = EditDistance(surface, info.canonical);

  std::vector<std::u32string_view> names = {info.canonical};
  for (const auto& n : info.nicknames) names.push_back(n);
  for (std::u32string_view name : names) {
    if (StartsWith(name, surface)) f[kStartWithMent] = 1;
    if (EndsWith(name, surface)) f[kEndWithMent] = 1;
    if (StartsWith(surface, name)) f[kStartInMent] = 1;
    if (EndsWith(surface, name)) f[kEndInMent] = 1;
  }

  const auto mention_tokens = TokenStrings(*tokenizer_, surface);
  const std::set<std::string> mention_words(mention_tokens.begin(), mention_tokens.end());
  int best_equal = 0;
  int best_miss = -1;
  for (const auto& words : info.name_words) {
    int equal = 0;
    for (const auto& w : words) equal += mention_words.count(w) ? 1 : 0;
    const int miss = static_cast<int>(words.size() + mention_words.size()) - 2 * equal;
    best_equal = std::max(best_equal, equal);
    best_miss = best_miss < 0 ? miss : std::min(best_miss, miss);
  }
  f[kEqualWordCnt] = best_equal;
  f[kMissWordCnt] = std::max(best_miss, 0);

  const auto comment_tokens = TokenStrings(*tokenizer_, comment.chars);
  f[kContxtSim] = TfIdfModel::Cosine(info.description_vec, tfidf_.Vectorize(comment_tokens));

  const std::set<std::string> comment_words(comment_tokens.begin(), comment_tokens.end());
  f[kAllInSrc] = !info.canonical_words.empty() &&
                         std::all_of(info.canonical_words.begin(), info.canonical_words.end(),
                                     [&](const std::string& w) { return comment_words.count(w) > 0; })
                     ? 1
                     : 0;

  std::set<int> comment_names;
  for (const auto& m : canonical_names_.FindAll(comment.chars)) comment_names.insert(m.key);
  int matched = 0;
  for (int k : info.description_names) matched += comment_names.count(k) ? 1 : 0;
  f[kMatchedNE] = matched;
  return f;
}

std::vector<FeatureVector> FeatureExtractor::ExtractAll(const Comment& comment,
                                                        const Mention& mention,
                                                        const Article& article,
                                                        const CandidateSet& candidates) const {
  std::vector<FeatureVector> out;
  out.reserve(candidates.candidates.size());
  for (const Candidate& c : candidates.candidates) {
    out.push_back(Extract(comment, mention, article, c.entity_id));
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (candidates.candidates[i].is_nil()) continue;
    int better = 0;
    for (size_t j = 0; j < out.size(); ++j) {
      if (!candidates.candidates[j].is_nil() && out[j][kContxtSim] > out[i][kContxtSim]) {
        ++better;
      }
    }
    out[i][kContxtSimRank] = 1.0 / (better + 1);
  }
  return out;
}

}  // namespace xref
