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

#ifndef XREF_CANDIDATES_H_
#define XREF_CANDIDATES_H_

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xref/corpus.h"
#include "xref/kb.h"

namespace xref {

inline constexpr std::string_view kNilId = "NIL";

enum class Provenance {
  kCommentMatch,
  kArticleMatch,
  kRelationExpansion,
  kAliasMatch,
  kNil
};

std::string_view ProvenanceName(Provenance p);

struct Candidate {
  std::string entity_id;  // kNilId for NIL
  Provenance provenance = Provenance::kNil;

  bool is_nil() const { return provenance == Provenance::kNil; }
};

// Candidates of one mention: comment matches, article matches (first
// occurrence), relation expansions (sorted by id), then NIL exactly once.
struct CandidateSet {
  std::string comment_id;
  int start = 0;
  int end = 0;
  std::vector<Candidate> candidates;

  bool Contains(std::string_view id) const;
  // Position of id, or -1.
  int IndexOf(std::string_view id) const;
};

struct AliasAddition {
  std::string entity_id;
  std::string alias;

  bool operator==(const AliasAddition&) const = default;
};

// Aliases from training gold links: a surface qualifies when every training
// occurrence links to the same single entity, no other KB entity already
// holds it, and it is not in the pronoun list. NIL and plural mentions are
// skipped. Callers must pass training comments only.
std::vector<AliasAddition> HarvestAliases(
    std::span<const Comment* const> train_comments, const KnowledgeBase& kb,
    const std::set<std::string>& pronouns);

void ApplyAliases(KnowledgeBase& kb, std::span<const AliasAddition> additions);

// Step 1 matches canonical names (and, when use_aliases is set, harvested
// aliases) in the comment and the article; step 2 adds one-hop neighbours of
// the step 1 entities, relations taken as undirected.
CandidateSet BuildCandidates(const Comment& comment, const Mention& mention,
                             const Article& article, const KnowledgeBase& kb,
                             bool use_aliases = true);

// Reusable form that caches the surface matchers of one KB.
class CandidateBuilder {
 public:
  CandidateBuilder(const KnowledgeBase& kb, bool use_aliases);
  CandidateSet Build(const Comment& comment, const Mention& mention,
                     const Article& article) const;

 private:
  const KnowledgeBase& kb_;
  SurfaceMatcher canonical_matcher_;
  SurfaceMatcher alias_matcher_;
  std::vector<IdSet> canonical_holders_;  // by matcher key
  std::vector<IdSet> alias_holders_;
};

struct CoverageCounts {
  int reachable = 0;
  int total = 0;
  // Empty denominator is vacuously covered.
  double fraction() const {
    return total == 0 ? 1.0 : static_cast<double>(reachable) / total;
  }
};

// Each gold entity occurrence counts separately; NIL mentions are skipped.
CoverageCounts CountCoverage(std::span<const Comment* const> comments,
                             const Corpus& corpus, const KnowledgeBase& kb,
                             bool use_aliases);
double GoldCoverage(std::span<const Comment* const> comments,
                    const Corpus& corpus, const KnowledgeBase& kb,
                    bool use_aliases);

// {"comment_id", "span", "candidates": [{"id", "provenance"}]} per line.
std::string SerializeCandidateSets(std::span<const CandidateSet> sets);

}  // namespace xref

#endif  // XREF_CANDIDATES_H_
