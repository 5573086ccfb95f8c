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

#include "xref/synthetic.h"

#include <algorithm>
#include <set>

#include "xref/error.h"
#include "xref/rng.h"
#include "xref/text.h"

namespace xref {
namespace {

constexpr const char* kFillerWords[] = {
    "the",   "a",     "really", "think", "news",  "today", "show",  "new",
    "great", "about", "this",   "what",  "wow",   "so",    "good",  "not",
    "very",  "again", "best",   "like",  "movie", "story", "week",  "still",
    "never", "always", "maybe", "true",  "post",  "look",  "fans",  "love"};
constexpr const char* kConsonants = "bdfgklmnprstvz";
constexpr const char* kVowels = "aeiou";

class NameFactory {
 public:
  explicit NameFactory(Rng& rng) : rng_(rng) {
    for (const char* w : kFillerWords) used_.insert(w);
    for (const char* w : {"he", "she", "they", "and", "actor", "actress",
                          "is", "known", "for", "in"}) {
      used_.insert(w);
    }
  }

  std::string Make(int syllables, const std::string& suffix = "") {
    for (;;) {
      std::string s;
      for (int i = 0; i < syllables; ++i) {
        s += kConsonants[rng_.UniformInt(14)];
        s += kVowels[rng_.UniformInt(5)];
      }
      s += suffix;
      if (used_.insert(s).second) return s;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = s[0] - 'a' + 'A';
  return s;
}

std::string Filler(Rng& rng) {
  return kFillerWords[rng.UniformInt(std::size(kFillerWords))];
}

struct EntitySpec {
  std::string id;
  std::string name;
  int cluster = 0;
  Gender gender = Gender::kUnknown;
  std::vector<std::string> nicknames;  // unique to this entity
  std::string shared_nickname;         // empty unless paired
  int partner = -1;
  std::vector<std::string> aliases;    // unlisted in the KB
  std::vector<std::string> signature;
};

// Builds comment text piece by piece while recording mention spans.
class CommentBuilder {
 public:
  void Word(const std::string& w) {
    if (!text_.empty()) text_ += U' ';
    text_ += Utf8ToU32(w);
  }
  Mention AddMention(const std::string& surface) {
    if (!text_.empty()) text_ += U' ';
    Mention m;
    m.start = static_cast<int>(text_.size());
    text_ += Utf8ToU32(surface);
    m.end = static_cast<int>(text_.size());
    return m;
  }
  std::u32string Take() { return std::move(text_); }

 private:
  std::u32string text_;
};

class Generator {
 public:
  Generator(const SyntheticConfig& config, uint64_t seed)
      : config_(config), rng_(seed), names_(rng_) {}

  SyntheticData Run() {
    SyntheticData out;
    MakeEntities();
    out.kb = MakeKb();
    kb_cache_ = &out.kb;
    out.titles = MakeTitles();
    for (int a = 0; a < config_.num_articles; ++a) {
      MakeAnnotatedArticle(out.corpus, "A" + Pad(a, 4));
    }
    for (int a = 0; a < config_.unlabeled_articles; ++a) {
      MakeUnlabeledArticle(out.unlabeled, "U" + Pad(a, 4));
    }
    out.split = SplitByArticle(out.corpus, config_.split_ratios,
                               Rng::Derive(rng_.NextU64(), 7));
    for (const auto& e : entities_) {
      if (!e.aliases.empty()) out.unlisted_aliases[e.id] = e.aliases;
    }
    out.pronouns = {"he", "she", "they"};
    return out;
  }

 private:
  static std::string Pad(int v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s = "0" + s;
    return s;
  }

  void MakeEntities() {
    const int n = config_.num_entities;
    entities_.resize(n);
    for (int i = 0; i < n; ++i) {
      EntitySpec& e = entities_[i];
      e.id = "E" + Pad(i, 3);
      e.name = Capitalize(names_.Make(3));
      e.cluster = i % config_.num_clusters;
      e.gender = rng_.Bernoulli(0.5) ? Gender::kMale : Gender::kFemale;
      for (int k = 0; k < config_.nicknames_per_entity; ++k) {
        e.nicknames.push_back(names_.Make(2, "y"));
      }
      for (int k = 0; k < config_.aliases_per_entity; ++k) {
        e.aliases.push_back(names_.Make(2, "o"));
      }
      e.signature = {names_.Make(2, "x"), names_.Make(2, "x")};
    }
    cluster_words_.resize(config_.num_clusters);
    for (auto& words : cluster_words_) {
      words = {names_.Make(2, "q"), names_.Make(2, "q")};
    }
    // Shared nicknames pair entities from different clusters where possible.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng_.Shuffle(std::span<int>(order));
    int paired = static_cast<int>(config_.ambiguous_entity_fraction * n) / 2 * 2;
    std::vector<int> pool(order.begin(), order.begin() + paired);
    while (pool.size() >= 2) {
      const int a = pool[0];
      size_t pick = 1;
      for (size_t j = 1; j < pool.size(); ++j) {
        if (entities_[pool[j]].cluster != entities_[a].cluster) {
          pick = j;
          break;
        }
      }
      const int b = pool[pick];
      pool.erase(pool.begin() + pick);
      pool.erase(pool.begin());
      const std::string shared = names_.Make(2, "y");
      entities_[a].shared_nickname = shared;
      entities_[b].shared_nickname = shared;
      entities_[a].partner = b;
      entities_[b].partner = a;
    }
    for (int i = 0; i < config_.num_nil_names; ++i) {
      nil_names_.push_back(Capitalize(names_.Make(3)));
    }
    clusters_.assign(config_.num_clusters, {});
    for (int i = 0; i < n; ++i) clusters_[entities_[i].cluster].push_back(i);
  }

  KnowledgeBase MakeKb() {
    std::vector<Entity> out;
    for (int i = 0; i < static_cast<int>(entities_.size()); ++i) {
      const EntitySpec& s = entities_[i];
      Entity e;
      e.id = s.id;
      e.canonical_name = s.name;
      e.nicknames = s.nicknames;
      if (!s.shared_nickname.empty()) e.nicknames.push_back(s.shared_nickname);
      e.gender = s.gender;
      e.entity_type = "person";
      // Ring over cluster members.
      const auto& members = clusters_[s.cluster];
      if (members.size() > 1) {
        auto pos = std::find(members.begin(), members.end(), i) - members.begin();
        const int next = members[(pos + 1) % members.size()];
        if (next != i) AddRelation(e, entities_[next].id);
      }
      if (s.partner > i) AddRelation(e, entities_[s.partner].id);
      e.description = s.name + " is " + GenderWord(s.gender) + " known for " +
                      s.signature[0] + " and " + s.signature[1] + " in " +
                      cluster_words_[s.cluster][0];
      out.push_back(std::move(e));
    }
    return KnowledgeBase::FromEntities(std::move(out));
  }

  static void AddRelation(Entity& e, const std::string& id) {
    if (std::find(e.relations.begin(), e.relations.end(), id) ==
        e.relations.end()) {
      e.relations.push_back(id);
    }
  }

  static std::string GenderWord(Gender g) {
    return g == Gender::kFemale ? "actress" : "actor";
  }

  std::vector<std::string> MakeTitles() {
    std::vector<std::string> titles;
    for (int t = 0; t < config_.num_titles; ++t) {
      const int c = static_cast<int>(rng_.UniformInt(config_.num_clusters));
      const auto& members = clusters_[c];
      std::vector<int> picked = members;
      rng_.Shuffle(std::span<int>(picked));
      const int k = std::min<int>(picked.size(), 1 + rng_.UniformInt(3));
      std::vector<std::string> words;
      for (int j = 0; j < k; ++j) {
        const EntitySpec& e = entities_[picked[j]];
        words.push_back(e.name);
        if (rng_.Bernoulli(0.8)) words.push_back(GenderWord(e.gender));
        words.push_back(e.signature[rng_.UniformInt(2)]);
      }
      words.push_back(cluster_words_[c][rng_.UniformInt(2)]);
      words.push_back(Filler(rng_));
      std::string title;
      for (const auto& w : words) {
        if (!title.empty()) title += ' ';
        title += w;
      }
      titles.push_back(std::move(title));
    }
    return titles;
  }

  // Featured entities of one article: mostly from one cluster, never both
  // members of a shared-nickname pair.
  std::vector<int> PickFeatured() {
    const int k = config_.min_featured +
                  static_cast<int>(rng_.UniformInt(
                      config_.max_featured - config_.min_featured + 1));
    const int c = static_cast<int>(rng_.UniformInt(config_.num_clusters));
    std::vector<int> featured;
    int guard = 0;
    while (static_cast<int>(featured.size()) < k && guard++ < 1000) {
      int cand;
      if (rng_.Bernoulli(0.8) && !clusters_[c].empty()) {
        cand = clusters_[c][rng_.UniformInt(clusters_[c].size())];
      } else {
        cand = static_cast<int>(rng_.UniformInt(entities_.size()));
      }
      if (std::find(featured.begin(), featured.end(), cand) != featured.end()) {
        continue;
      }
      const int partner = entities_[cand].partner;
      if (partner >= 0 && std::find(featured.begin(), featured.end(),
                                    partner) != featured.end()) {
        continue;
      }
      featured.push_back(cand);
    }
    return featured;
  }

  Article MakeArticleText(const std::string& id, const std::vector<int>& featured) {
    Article a;
    a.id = id;
    a.title = Utf8ToU32(Filler(rng_) + " " + entities_[featured[0]].name + " " +
                        Filler(rng_));
    for (int f : featured) {
      const EntitySpec& e = entities_[f];
      std::string s = Filler(rng_) + " " + Filler(rng_) + " " + e.name + " " +
                      Filler(rng_) + " " + e.signature[rng_.UniformInt(2)] + " " +
                      cluster_words_[e.cluster][rng_.UniformInt(2)];
      a.sentences.push_back(Utf8ToU32(s));
    }
    a.sentences.push_back(Utf8ToU32(Filler(rng_) + " " + Filler(rng_) + " " +
                                    Filler(rng_)));
    return a;
  }

  // Entities that are neither featured nor related to a featured entity.
  std::vector<int> Unreachable(const std::vector<int>& featured,
                               const KnowledgeBase& kb) {
    std::set<std::string> blocked;
    for (int f : featured) {
      blocked.insert(entities_[f].id);
      for (const auto& n : kb.Neighbors(entities_[f].id)) blocked.insert(n);
    }
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(entities_.size()); ++i) {
      if (!blocked.count(entities_[i].id) && !entities_[i].aliases.empty()) {
        out.push_back(i);
      }
    }
    return out;
  }

  void MakeAnnotatedArticle(Corpus& corpus, const std::string& id) {
    const std::vector<int> featured = PickFeatured();
    corpus.AddArticle(MakeArticleText(id, featured));
    for (int c = 0; c < config_.comments_per_article; ++c) {
      Comment comment;
      comment.id = id + "-C" + Pad(c, 2);
      comment.article_id = id;
      CommentBuilder text;
      const int n_mentions =
          1 + static_cast<int>(rng_.UniformInt(config_.max_mentions_per_comment));
      std::set<std::string> used_surfaces;
      for (int k = 0; k < n_mentions; ++k) {
        if (k > 0) text.Word("and");
        const int prefix = 1 + static_cast<int>(rng_.UniformInt(3));
        for (int w = 0; w < prefix; ++w) text.Word(Filler(rng_));
        auto [surface, type, gold] = DrawMention(featured, kb_cache_);
        if (!used_surfaces.insert(surface).second) {
          // Keep spans distinct and surfaces unique within a comment.
          const int e = featured[0];
          surface = entities_[e].name;
          type = MentionType::kCanonical;
          gold = {entities_[e].id};
          if (!used_surfaces.insert(surface).second) continue;
        }
        Mention m = text.AddMention(surface);
        m.type = type;
        m.gold = std::move(gold);
        comment.mentions.push_back(std::move(m));
      }
      const int suffix = 1 + static_cast<int>(rng_.UniformInt(3));
      for (int w = 0; w < suffix; ++w) text.Word(Filler(rng_));
      comment.chars = text.Take();
      corpus.AddComment(std::move(comment));
    }
  }

  struct Drawn {
    std::string surface;
    MentionType type;
    std::vector<std::string> gold;
  };

  Drawn Canonical(int e) {
    return {entities_[e].name, MentionType::kCanonical, {entities_[e].id}};
  }

  Drawn DrawMention(const std::vector<int>& featured, const KnowledgeBase* kb) {
    const double r = rng_.Uniform();
    double acc = 0;
    auto pick_featured = [&]() {
      return featured[rng_.UniformInt(featured.size())];
    };
    if (r < (acc += config_.frac_nil)) {
      return {nil_names_[rng_.UniformInt(nil_names_.size())], MentionType::kNil, {}};
    }
    if (r < (acc += config_.frac_nickname)) {
      const int e = pick_featured();
      const auto& nicks = entities_[e].nicknames;
      if (nicks.empty()) return Canonical(e);
      return {nicks[rng_.UniformInt(nicks.size())], MentionType::kNickname,
              {entities_[e].id}};
    }
    if (r < (acc += config_.frac_ambiguous)) {
      std::vector<int> paired;
      for (int f : featured) {
        if (entities_[f].partner >= 0) paired.push_back(f);
      }
      if (paired.empty()) return Canonical(pick_featured());
      const int e = paired[rng_.UniformInt(paired.size())];
      return {entities_[e].shared_nickname, MentionType::kNickname,
              {entities_[e].id}};
    }
    if (r < (acc += config_.frac_pronominal)) {
      std::vector<int> unique_gender;
      for (int f : featured) {
        int same = 0;
        for (int g : featured) same += entities_[g].gender == entities_[f].gender;
        if (same == 1) unique_gender.push_back(f);
      }
      if (unique_gender.empty()) return Canonical(pick_featured());
      const int e = unique_gender[rng_.UniformInt(unique_gender.size())];
      return {entities_[e].gender == Gender::kFemale ? "she" : "he",
              MentionType::kPronominal, {entities_[e].id}};
    }
    if (r < (acc += config_.frac_plural)) {
      if (featured.size() < 2) return Canonical(pick_featured());
      Drawn d{"they", MentionType::kPlural, {}};
      for (int f : featured) d.gold.push_back(entities_[f].id);
      return d;
    }
    if (r < (acc += config_.frac_other)) {
      const int e = pick_featured();
      const auto& aliases = entities_[e].aliases;
      if (aliases.empty()) return Canonical(e);
      return {aliases[rng_.UniformInt(aliases.size())], MentionType::kOther,
              {entities_[e].id}};
    }
    if (r < (acc += config_.frac_offarticle_alias)) {
      const std::vector<int> pool = Unreachable(featured, *kb);
      if (pool.empty()) return Canonical(pick_featured());
      const int e = pool[rng_.UniformInt(pool.size())];
      const auto& aliases = entities_[e].aliases;
      return {aliases[rng_.UniformInt(aliases.size())], MentionType::kOther,
              {entities_[e].id}};
    }
    const int e = rng_.Bernoulli(0.7)
                      ? pick_featured()
                      : static_cast<int>(rng_.UniformInt(entities_.size()));
    return Canonical(e);
  }

  void MakeUnlabeledArticle(Corpus& corpus, const std::string& id) {
    const std::vector<int> featured = PickFeatured();
    corpus.AddArticle(MakeArticleText(id, featured));
    for (int c = 0; c < config_.unlabeled_comments_per_article; ++c) {
      Comment comment;
      comment.id = id + "-C" + Pad(c, 2);
      comment.article_id = id;
      CommentBuilder text;
      const int prefix = 1 + static_cast<int>(rng_.UniformInt(3));
      for (int w = 0; w < prefix; ++w) text.Word(Filler(rng_));
      const double r = rng_.Uniform();
      const int f = featured[rng_.UniformInt(featured.size())];
      if (r < 0.5) {
        const int e = rng_.Bernoulli(0.5)
                          ? f
                          : static_cast<int>(rng_.UniformInt(entities_.size()));
        text.AddMention(entities_[e].name);
      } else if (r < 0.75 && !entities_[f].nicknames.empty()) {
        text.AddMention(entities_[f].nicknames[0]);
      } else if (!entities_[f].shared_nickname.empty()) {
        text.AddMention(entities_[f].shared_nickname);
      } else {
        text.AddMention(entities_[f].name);
      }
      const int suffix = 1 + static_cast<int>(rng_.UniformInt(3));
      for (int w = 0; w < suffix; ++w) text.Word(Filler(rng_));
      comment.chars = text.Take();
      corpus.AddComment(std::move(comment));
    }
  }

  const SyntheticConfig& config_;
  Rng rng_;
  NameFactory names_;
  std::vector<EntitySpec> entities_;
  std::vector<std::vector<int>> clusters_;
  std::vector<std::vector<std::string>> cluster_words_;
  std::vector<std::string> nil_names_;
  const KnowledgeBase* kb_cache_ = nullptr;
};

}  // namespace

void SyntheticConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw InvalidArgument("infeasible synthetic config: " + why);
  };
  if (num_entities < 1) fail("num_entities must be positive");
  if (num_clusters < 1 || num_clusters > num_entities) {
    fail("num_clusters must be in [1, num_entities]");
  }
  if (num_articles < 0 || comments_per_article < 0) fail("negative sizes");
  if (max_mentions_per_comment < 1) fail("max_mentions_per_comment < 1");
  if (min_featured < 1 || max_featured < min_featured) {
    fail("featured range must satisfy 1 <= min <= max");
  }
  if (max_featured > num_entities) fail("max_featured exceeds num_entities");
  const double fracs[] = {frac_nickname, frac_ambiguous, frac_pronominal,
                          frac_plural,   frac_other,     frac_offarticle_alias,
                          frac_nil};
  double sum = 0;
  for (double f : fracs) {
    if (f < 0 || f > 1) fail("mention fractions must lie in [0, 1]");
    sum += f;
  }
  if (sum > 1 + 1e-12) fail("mention fractions sum above 1");
  if (ambiguous_entity_fraction < 0 || ambiguous_entity_fraction > 1) {
    fail("ambiguous_entity_fraction must lie in [0, 1]");
  }
  const int paired = static_cast<int>(ambiguous_entity_fraction * num_entities) / 2 * 2;
  if (frac_ambiguous > 0 && paired < 2) {
    fail("ambiguous mentions need at least two paired entities");
  }
  if (frac_plural > 0 && max_featured < 2) {
    fail("plural mentions need at least two featured entities");
  }
  if ((frac_other > 0 || frac_offarticle_alias > 0) && aliases_per_entity < 1) {
    fail("alias mentions need aliases_per_entity >= 1");
  }
  if (frac_nil > 0 && num_nil_names < 1) fail("nil mentions need nil names");
  if (nicknames_per_entity < 0 || aliases_per_entity < 0) fail("negative counts");
  if (num_titles < 0) fail("negative title count");
  if (unlabeled_articles < 0 || unlabeled_comments_per_article < 0) {
    fail("negative unlabeled sizes");
  }
}

SyntheticData GenSynthetic(const SyntheticConfig& config, uint64_t seed) {
  config.Validate();
  return Generator(config, seed).Run();
}

std::string SyntheticPronounLexicon() {
  return "{\"surface\":\"he\",\"gender\":\"male\",\"plural\":false}\n"
         "{\"surface\":\"she\",\"gender\":\"female\",\"plural\":false}\n"
         "{\"surface\":\"they\",\"gender\":\"unknown\",\"plural\":true}\n";
}

SyntheticConfig SyntheticConfigFromJson(const Json& j) {
  SyntheticConfig c;
#define XREF_FIELD(name) c.name = j.value(#name, c.name)
  XREF_FIELD(num_entities);
  XREF_FIELD(num_clusters);
  XREF_FIELD(num_articles);
  XREF_FIELD(comments_per_article);
  XREF_FIELD(max_mentions_per_comment);
  XREF_FIELD(min_featured);
  XREF_FIELD(max_featured);
  XREF_FIELD(frac_nickname);
  XREF_FIELD(frac_ambiguous);
  XREF_FIELD(frac_pronominal);
  XREF_FIELD(frac_plural);
  XREF_FIELD(frac_other);
  XREF_FIELD(frac_offarticle_alias);
  XREF_FIELD(frac_nil);
  XREF_FIELD(ambiguous_entity_fraction);
  XREF_FIELD(nicknames_per_entity);
  XREF_FIELD(aliases_per_entity);
  XREF_FIELD(num_nil_names);
  XREF_FIELD(num_titles);
  XREF_FIELD(unlabeled_articles);
  XREF_FIELD(unlabeled_comments_per_article);
  XREF_FIELD(split_ratios);
#undef XREF_FIELD
  return c;
}

Json SyntheticConfigToJson(const SyntheticConfig& c) {
  Json j;
#define XREF_FIELD(name) j[#name] = c.name
  XREF_FIELD(num_entities);
  XREF_FIELD(num_clusters);
  XREF_FIELD(num_articles);
  XREF_FIELD(comments_per_article);
  XREF_FIELD(max_mentions_per_comment);
  XREF_FIELD(min_featured);
  XREF_FIELD(max_featured);
  XREF_FIELD(frac_nickname);
  XREF_FIELD(frac_ambiguous);
  XREF_FIELD(frac_pronominal);
  XREF_FIELD(frac_plural);
  XREF_FIELD(frac_other);
  XREF_FIELD(frac_offarticle_alias);
  XREF_FIELD(frac_nil);
  XREF_FIELD(ambiguous_entity_fraction);
  XREF_FIELD(nicknames_per_entity);
  XREF_FIELD(aliases_per_entity);
  XREF_FIELD(num_nil_names);
  XREF_FIELD(num_titles);
  XREF_FIELD(unlabeled_articles);
  XREF_FIELD(unlabeled_comments_per_article);
  XREF_FIELD(split_ratios);
#undef XREF_FIELD
  return j;
}

}  // namespace xref
