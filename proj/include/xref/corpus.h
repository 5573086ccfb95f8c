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

#ifndef XREF_CORPUS_H_
#define XREF_CORPUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xref/kb.h"
#include "xref/text.h"

namespace xref {

enum class MentionType { kCanonical, kNickname, kPronominal, kPlural, kOther, kNil };

inline constexpr std::array<MentionType, 6> kAllMentionTypes = {
    MentionType::kCanonical, MentionType::kNickname, MentionType::kPronominal,
    MentionType::kPlural,    MentionType::kOther,    MentionType::kNil};

std::string_view MentionTypeName(MentionType t);
MentionType ParseMentionType(std::string_view s);  // throws InvalidArgument

// Half-open code point span [start, end) into the comment. An empty gold
// list means NIL.
struct Mention {
  int start = 0;
  int end = 0;
  std::optional<MentionType> type;
  std::vector<std::string> gold;

  bool is_nil() const { return gold.empty(); }
  int length() const { return end - start; }
};

struct Comment {
  std::string id;
  std::string article_id;
  std::u32string chars;
  std::vector<Mention> mentions;

  std::u32string Surface(const Mention& m) const {
    return chars.substr(m.start, m.end - m.start);
  }
};

struct Article {
  std::string id;
  std::u32string title;
  std::vector<std::u32string> sentences;
};

class Corpus {
 public:
  // Both validate: duplicate ids, dangling article ids and mention
  // invariants raise LoadError.
  void AddArticle(Article article);
  void AddComment(Comment comment);

  const std::vector<Article>& articles() const { return articles_; }
  const std::vector<Comment>& comments() const { return comments_; }
  bool HasArticle(std::string_view id) const;
  const Article& article(std::string_view id) const;  // throws NotFoundError

  // Comments whose article is in ids, in corpus order.
  std::vector<const Comment*> CommentsIn(const std::set<std::string>& ids) const;
  int num_mentions() const;

 private:
  std::vector<Article> articles_;
  std::vector<Comment> comments_;
  std::map<std::string, size_t, std::less<>> article_index_;
  std::set<std::string, std::less<>> comment_ids_;
};

void ValidateMention(const Comment& comment, const Mention& m);

// Checks that every gold id resolves in the KB.
void ValidateAgainstKb(const Corpus& corpus, const KnowledgeBase& kb);

Corpus LoadCorpus(const std::string& articles_path,
                  const std::string& comments_path);
Corpus ParseCorpus(std::string_view articles_jsonl,
                   std::string_view comments_jsonl);
std::string SerializeArticles(const Corpus& corpus);
std::string SerializeComments(std::span<const Comment> comments);
std::vector<Comment> ParseComments(std::string_view jsonl);
void SaveCorpus(const Corpus& corpus, const std::string& articles_path,
                const std::string& comments_path);

// Default article segmenter: longest match against KB canonical names,
// whitespace fallback elsewhere.
std::unique_ptr<Tokenizer> MakeCanonicalTokenizer(const KnowledgeBase& kb);

// Title then sentences.
std::vector<std::u32string_view> ArticleSegments(const Article& article);

// E_a: ids whose canonical name equals a token and is unambiguous in the KB
// (exactly one holder across canonical names and nicknames), deduplicated,
// first-occurrence order.
std::vector<std::string> ArticleEntitySet(const Article& article,
                                          const KnowledgeBase& kb,
                                          const Tokenizer& tokenizer);
std::vector<std::string> ArticleEntitySet(const Article& article,
                                          const KnowledgeBase& kb);

// Distant supervision. Existing mentions are discarded; every longest,
// left-to-right, non-overlapping match of a canonical name or nickname that
// has exactly one holder becomes a mention. Comments without any are dropped.
std::vector<Comment> WeakLabel(std::span<const Comment> comments,
                               const KnowledgeBase& kb);

struct DatasetSplit {
  std::set<std::string> train;
  std::set<std::string> valid;
  std::set<std::string> test;
};

// ratios = {train, valid, test}, summing to 1. valid and test get
// floor(ratio * n) articles; the remainder goes to train.
DatasetSplit SplitByArticle(const Corpus& corpus, std::array<double, 3> ratios,
                            uint64_t seed);
void ValidateSplit(const DatasetSplit& split);
std::string SerializeSplit(const DatasetSplit& split);
DatasetSplit ParseSplit(std::string_view json);

}  // namespace xref

#endif  // XREF_CORPUS_H_
