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

#include "xref/corpus.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xref/error.h"
#include "xref/io.h"
#include "xref/rng.h"

namespace xref {

std::string_view MentionTypeName(MentionType t) {
  switch (t) {
    case MentionType::kCanonical:
      return "canonical";
    case MentionType::kNickname:
      return "nickname";
    case MentionType::kPronominal:
      return "pronominal";
    case MentionType::kPlural:
      return "plural";
    case MentionType::kOther:
      return "other";
    case MentionType::kNil:
      return "nil";
  }
  return "other";
}

MentionType ParseMentionType(std::string_view s) {
  for (MentionType t : kAllMentionTypes) {
    if (MentionTypeName(t) == s) return t;
  }
  throw InvalidArgument("unknown mention type '" + std::string(s) + "'");
}

void ValidateMention(const Comment& comment, const Mention& m) {
  const int len = static_cast<int>(comment.chars.size());
  if (m.start < 0 || m.start >= m.end || m.end > len) {
    throw LoadError("comment " + comment.id + ": mention span [" +
                    std::to_string(m.start) + ", " + std::to_string(m.end) +
                    ") out of bounds for length " + std::to_string(len));
  }
  if (m.type == MentionType::kPlural && m.gold.size() < 2) {
    throw LoadError("comment " + comment.id +
                    ": plural mention needs at least two gold entities");
  }
  if (m.type == MentionType::kNil && !m.gold.empty()) {
    throw LoadError("comment " + comment.id + ": nil mention has gold links");
  }
}

void Corpus::AddArticle(Article article) {
  if (article.id.empty()) throw LoadError("article with empty id");
  if (article_index_.count(article.id)) {
    throw LoadError("duplicate article id " + article.id);
  }
  if (article.sentences.empty()) {
    throw LoadError("article " + article.id + " has no sentences");
  }
  article_index_.emplace(article.id, articles_.size());
  articles_.push_back(std::move(article));
}

void Corpus::AddComment(Comment comment) {
  if (comment.id.empty()) throw LoadError("comment with empty id");
  if (comment_ids_.count(comment.id)) {
    throw LoadError("duplicate comment id " + comment.id);
  }
  if (!HasArticle(comment.article_id)) {
    throw LoadError("comment " + comment.id + " references unknown article " +
                    comment.article_id);
  }
  std::set<std::pair<int, int>> spans;
  for (const Mention& m : comment.mentions) {
    ValidateMention(comment, m);
    if (!spans.emplace(m.start, m.end).second) {
      throw LoadError("comment " + comment.id + ": duplicate mention span");
    }
  }
  comment_ids_.insert(comment.id);
  comments_.push_back(std::move(comment));
}

bool Corpus::HasArticle(std::string_view id) const {
  return article_index_.find(id) != article_index_.end();
}

const Article& Corpus::article(std::string_view id) const {
  auto it = article_index_.find(id);
  if (it == article_index_.end()) {
    throw NotFoundError("unknown article " + std::string(id));
  }
  return articles_[it->second];
}

std::vector<const Comment*> Corpus::CommentsIn(
    const std::set<std::string>& ids) const {
  std::vector<const Comment*> out;
  for (const Comment& c : comments_) {
    if (ids.count(c.article_id)) out.push_back(&c);
  }
  return out;
}

int Corpus::num_mentions() const {
  int n = 0;
  for (const Comment& c : comments_) n += static_cast<int>(c.mentions.size());
  return n;
}

void ValidateAgainstKb(const Corpus& corpus, const KnowledgeBase& kb) {
  for (const Comment& c : corpus.comments()) {
    for (const Mention& m : c.mentions) {
      for (const auto& g : m.gold) {
        if (!kb.Contains(g)) {
          throw LoadError("comment " + c.id + ": gold entity " + g +
                          " not in knowledge base");
        }
      }
    }
  }
}

namespace {

std::u32string CheckedText(const std::string& utf8, const std::string& where) {
  if (!IsNfc(utf8)) throw LoadError(where + ": text is not NFC normalized");
  try {
    return Utf8ToU32(utf8);
  } catch (const InvalidArgument& e) {
    throw LoadError(where + ": " + e.what());
  }
}

Comment CommentFromJson(const Json& j) {
  Comment c;
  c.id = j.at("id").get<std::string>();
  c.article_id = j.at("article_id").get<std::string>();
  c.chars = CheckedText(j.at("text").get<std::string>(), "comment " + c.id);
  if (j.contains("mentions")) {
    for (const Json& jm : j["mentions"]) {
      Mention m;
      m.start = jm.at("start").get<int>();
      m.end = jm.at("end").get<int>();
      if (jm.contains("type") && !jm["type"].is_null()) {
        try {
          m.type = ParseMentionType(jm["type"].get<std::string>());
        } catch (const InvalidArgument& e) {
          throw LoadError("comment " + c.id + ": " + e.what());
        }
      }
      m.gold = jm.at("gold").get<std::vector<std::string>>();
      c.mentions.push_back(std::move(m));
    }
  }
  return c;
}

Json CommentToJson(const Comment& c) {
  Json j;
  j["id"] = c.id;
  j["article_id"] = c.article_id;
  j["text"] = U32ToUtf8(c.chars);
  Json ms = Json::array();
  for (const Mention& m : c.mentions) {
    Json jm;
    jm["start"] = m.start;
    jm["end"] = m.end;
    if (m.type) jm["type"] = std::string(MentionTypeName(*m.type));
    jm["gold"] = m.gold;
    ms.push_back(std::move(jm));
  }
  j["mentions"] = std::move(ms);
  return j;
}

}  // namespace

std::vector<Comment> ParseComments(std::string_view jsonl) {
  std::vector<Comment> out;
  ForEachJsonLine(jsonl, [&](int line, const Json& j) {
    try {
      out.push_back(CommentFromJson(j));
    } catch (const LoadError& e) {
      throw LoadError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

Corpus ParseCorpus(std::string_view articles_jsonl,
                   std::string_view comments_jsonl) {
  Corpus corpus;
  ForEachJsonLine(articles_jsonl, [&](int, const Json& j) {
    Article a;
    a.id = j.at("id").get<std::string>();
    a.title = CheckedText(j.value("title", ""), "article " + a.id);
    for (const auto& s : j.at("sentences")) {
      a.sentences.push_back(CheckedText(s.get<std::string>(), "article " + a.id));
    }
    corpus.AddArticle(std::move(a));
  });
  ForEachJsonLine(comments_jsonl, [&](int line, const Json& j) {
    Comment c;
    try {
      c = CommentFromJson(j);
    } catch (const LoadError& e) {
      throw LoadError("line " + std::to_string(line) + ": " + e.what());
    }
    corpus.AddComment(std::move(c));
  });
  return corpus;
}

Corpus LoadCorpus(const std::string& articles_path,
                  const std::string& comments_path) {
  return ParseCorpus(ReadFile(articles_path), ReadFile(comments_path));
}

std::string SerializeArticles(const Corpus& corpus) {
  std::ostringstream out;
  for (const Article& a : corpus.articles()) {
    Json j;
    j["id"] = a.id;
    j["title"] = U32ToUtf8(a.title);
    Json s = Json::array();
    for (const auto& sent : a.sentences) s.push_back(U32ToUtf8(sent));
    j["sentences"] = std::move(s);
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string SerializeComments(std::span<const Comment> comments) {
  std::ostringstream out;
  for (const Comment& c : comments) out << CommentToJson(c).dump() << '\n';
  return out.str();
}

void SaveCorpus(const Corpus& corpus, const std::string& articles_path,
                const std::string& comments_path) {
  WriteFile(articles_path, SerializeArticles(corpus));
  WriteFile(comments_path, SerializeComments(corpus.comments()));
}

std::unique_ptr<Tokenizer> MakeCanonicalTokenizer(const KnowledgeBase& kb) {
  std::vector<std::string> names;
  names.reserve(kb.canonical_index().size());
  for (const auto& [surface, ids] : kb.canonical_index()) names.push_back(surface);
  return std::make_unique<LongestMatchTokenizer>(std::move(names));
}

std::vector<std::u32string_view> ArticleSegments(const Article& article) {
  std::vector<std::u32string_view> out;
  out.push_back(article.title);
  for (const auto& s : article.sentences) out.push_back(s);
  return out;
}

std::vector<std::string> ArticleEntitySet(const Article& article,
                                          const KnowledgeBase& kb,
                                          const Tokenizer& tokenizer) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::u32string_view segment : ArticleSegments(article)) {
    for (const auto& token : tokenizer.Tokenize(segment)) {
      const std::string surface = U32ToUtf8(token);
      if (surface.empty()) continue;
      const std::string key = NormalizeSurface(surface);
      auto it = kb.canonical_index().find(key);
      if (it == kb.canonical_index().end()) continue;
      const IdSet holders = kb.LookupSurface(surface, /*use_nicknames=*/true);
      if (holders.size() != 1) continue;
      const std::string& id = *holders.begin();
      if (seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

std::vector<std::string> ArticleEntitySet(const Article& article,
                                          const KnowledgeBase& kb) {
  return ArticleEntitySet(article, kb, *MakeCanonicalTokenizer(kb));
}

std::vector<Comment> WeakLabel(std::span<const Comment> comments,
                               const KnowledgeBase& kb) {
  SurfaceMatcher matcher;
  std::map<std::string, IdSet> holders_by_surface;
  for (const auto& [surface, ids] : kb.canonical_index()) {
    matcher.Add(surface);
    holders_by_surface[surface].insert(ids.begin(), ids.end());
  }
  for (const auto& [id, e] : kb.entities()) {
    for (const auto& n : e.nicknames) {
      matcher.Add(n);
      holders_by_surface[NormalizeSurface(n)].insert(id);
    }
  }
  std::vector<Comment> out;
  for (const Comment& c : comments) {
    Comment labeled = c;
    labeled.mentions.clear();
    for (const SurfaceMatch& m : matcher.FindAll(c.chars)) {
      const std::string& surface = matcher.surface(m.key);
      const IdSet& holders = holders_by_surface.at(surface);
      if (holders.size() != 1 || kb.IsAmbiguous(surface)) continue;
      const Entity& e = kb.Get(*holders.begin());
      Mention mention;
      mention.start = m.start;
      mention.end = m.end;
      mention.type = NormalizeSurface(e.canonical_name) == surface
                         ? MentionType::kCanonical
                         : MentionType::kNickname;
      mention.gold = {e.id};
      labeled.mentions.push_back(std::move(mention));
    }
    if (!labeled.mentions.empty()) out.push_back(std::move(labeled));
  }
  return out;
}

DatasetSplit SplitByArticle(const Corpus& corpus, std::array<double, 3> ratios,
                            uint64_t seed) {
  double sum = 0;
  for (double r : ratios) {
    if (r < 0) throw InvalidArgument("split ratios must be nonnegative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("split ratios must sum to 1");
  }
  std::vector<std::string> ids;
  for (const Article& a : corpus.articles()) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  Rng rng(seed);
  rng.Shuffle(std::span<std::string>(ids));
  const size_t n = ids.size();
  const auto n_valid = static_cast<size_t>(std::floor(ratios[1] * n + 1e-9));
  const auto n_test = static_cast<size_t>(std::floor(ratios[2] * n + 1e-9));
  DatasetSplit split;
  for (size_t i = 0; i < n; ++i) {
    if (i < n_valid) {
      split.valid.insert(ids[i]);
    } else if (i < n_valid + n_test) {
      split.test.insert(ids[i]);
    } else {
      split.train.insert(ids[i]);
    }
  }
  return split;
}

void ValidateSplit(const DatasetSplit& split) {
  for (const auto& id : split.train) {
    if (split.valid.count(id) || split.test.count(id)) {
      throw LoadError("article " + id + " appears in two splits");
    }
  }
  for (const auto& id : split.valid) {
    if (split.test.count(id)) {
      throw LoadError("article " + id + " appears in two splits");
    }
  }
}

std::string SerializeSplit(const DatasetSplit& split) {
  Json j;
  j["train"] = split.train;
  j["valid"] = split.valid;
  j["test"] = split.test;
  return j.dump() + "\n";
}

DatasetSplit ParseSplit(std::string_view json) {
  DatasetSplit split;
  try {
    const Json j = Json::parse(json);
    split.train = j.at("train").get<std::set<std::string>>();
    split.valid = j.at("valid").get<std::set<std::string>>();
    split.test = j.at("test").get<std::set<std::string>>();
  } catch (const Json::exception& e) {
    throw LoadError(std::string("split file: ") + e.what());
  }
  ValidateSplit(split);
  return split;
}

}  // namespace xref
