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

#include "xref/candidates.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "xref/error.h"
#include "xref/io.h"

namespace xref {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kCommentMatch:
      return "comment_match";
    case Provenance::kArticleMatch:
      return "article_match";
    case Provenance::kRelationExpansion:
      return "relation_expansion";
    case Provenance::kAliasMatch:
      return "alias_match";
    case Provenance::kNil:
      return "nil";
  }
  return "nil";
}

bool CandidateSet::Contains(std::string_view id) const {
  return IndexOf(id) >= 0;
}

int CandidateSet::IndexOf(std::string_view id) const {
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].entity_id == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<AliasAddition> HarvestAliases(
    std::span<const Comment* const> train_comments, const KnowledgeBase& kb,
    const std::set<std::string>& pronouns) {
  std::set<std::string> pronoun_keys;
  for (const auto& p : pronouns) pronoun_keys.insert(NormalizeSurface(p));
  // Normalized surface -> linked entities, plus first raw spelling.
  std::map<std::string, std::set<std::string>> links;
  std::map<std::string, std::string> spelling;
  std::vector<std::string> order;
  for (const Comment* c : train_comments) {
    for (const Mention& m : c->mentions) {
      if (m.gold.size() != 1) continue;
      if (m.type == MentionType::kPronominal || m.type == MentionType::kPlural) {
        continue;
      }
      const std::string raw = U32ToUtf8(c->Surface(m));
      const std::string key = NormalizeSurface(raw);
      if (pronoun_keys.count(key)) continue;
      if (!links.count(key)) {
        order.push_back(key);
        spelling[key] = raw;
      }
      links[key].insert(m.gold[0]);
    }
  }
  std::vector<AliasAddition> out;
  for (const auto& key : order) {
    const auto& ids = links[key];
    if (ids.size() != 1) continue;
    const std::string& id = *ids.begin();
    const IdSet holders = kb.LookupSurface(key, /*use_nicknames=*/true);
    if (!holders.empty()) continue;  // already a KB surface
    out.push_back({id, spelling[key]});
  }
  return out;
}

void ApplyAliases(KnowledgeBase& kb, std::span<const AliasAddition> additions) {
  for (const auto& a : additions) kb.AddAlias(a.entity_id, a.alias);
}

CandidateBuilder::CandidateBuilder(const KnowledgeBase& kb, bool use_aliases)
    : kb_(kb) {
  for (const auto& [surface, ids] : kb.canonical_index()) {
    canonical_matcher_.Add(surface);
    canonical_holders_.push_back(ids);
  }
  if (use_aliases) {
    for (const auto& [surface, ids] : kb.harvested_index()) {
      alias_matcher_.Add(surface);
      alias_holders_.push_back(ids);
    }
  }
}

CandidateSet CandidateBuilder::Build(const Comment& comment,
                                     const Mention& mention,
                                     const Article& article) const {
  CandidateSet out;
  out.comment_id = comment.id;
  out.start = mention.start;
  out.end = mention.end;
  std::set<std::string> seen;
  auto push = [&](const std::string& id, Provenance p) {
    if (seen.insert(id).second) out.candidates.push_back({id, p});
  };
  // Canonical and alias surfaces are segmented independently so that
  // enabling aliases can only add candidates.
  auto scan = [&](std::u32string_view text, Provenance canonical) {
    std::vector<std::pair<int, std::pair<const IdSet*, Provenance>>> hits;
    for (const SurfaceMatch& m : canonical_matcher_.FindAll(text)) {
      hits.push_back({m.start, {&canonical_holders_[m.key], canonical}});
    }
    for (const SurfaceMatch& m : alias_matcher_.FindAll(text)) {
      hits.push_back({m.start, {&alias_holders_[m.key], Provenance::kAliasMatch}});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
      return a.first < b.first;
    });
    for (const auto& [pos, hit] : hits) {
      for (const auto& id : *hit.first) push(id, hit.second);
    }
  };
  scan(comment.chars, Provenance::kCommentMatch);
  for (std::u32string_view segment : ArticleSegments(article)) {
    scan(segment, Provenance::kArticleMatch);
  }
  std::set<std::string> expansion;
  for (const Candidate& c : out.candidates) {
    for (const auto& n : kb_.Neighbors(c.entity_id)) {
      if (!seen.count(n)) expansion.insert(n);
    }
  }
  for (const auto& id : expansion) push(id, Provenance::kRelationExpansion);
  out.candidates.push_back({std::string(kNilId), Provenance::kNil});
  return out;
}

CandidateSet BuildCandidates(const Comment& comment, const Mention& mention,
                             const Article& article, const KnowledgeBase& kb,
                             bool use_aliases) {
  return CandidateBuilder(kb, use_aliases).Build(comment, mention, article);
}

CoverageCounts CountCoverage(std::span<const Comment* const> comments,
                             const Corpus& corpus, const KnowledgeBase& kb,
                             bool use_aliases) {
  CandidateBuilder builder(kb, use_aliases);
  CoverageCounts counts;
  for (const Comment* c : comments) {
    const Article& article = corpus.article(c->article_id);
    for (const Mention& m : c->mentions) {
      if (m.is_nil()) continue;
      const CandidateSet set = builder.Build(*c, m, article);
      for (const auto& g : m.gold) {
        ++counts.total;
        if (set.Contains(g)) ++counts.reachable;
      }
    }
  }
  return counts;
}

double GoldCoverage(std::span<const Comment* const> comments,
                    const Corpus& corpus, const KnowledgeBase& kb,
                    bool use_aliases) {
  return CountCoverage(comments, corpus, kb, use_aliases).fraction();
}

std::string SerializeCandidateSets(std::span<const CandidateSet> sets) {
  std::ostringstream out;
  for (const CandidateSet& s : sets) {
    Json j;
    j["comment_id"] = s.comment_id;
    j["span"] = {s.start, s.end};
    Json cands = Json::array();
    for (const Candidate& c : s.candidates) {
      cands.push_back({{"id", c.entity_id},
                       {"provenance", std::string(ProvenanceName(c.provenance))}});
    }
    j["candidates"] = std::move(cands);
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace xref
