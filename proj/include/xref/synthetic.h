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

#ifndef XREF_SYNTHETIC_H_
#define XREF_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xref/corpus.h"
#include "xref/io.h"
#include "xref/kb.h"

namespace xref {

// Sizes and mention-type mix of a generated corpus. Mention fractions are
// per mention; canonical mentions take whatever remains. A mention type that
// cannot be realized in a given article (e.g. no featured entity with a
// shared nickname) falls back to a canonical mention.
struct SyntheticConfig {
  int num_entities = 60;
  int num_clusters = 6;
  int num_articles = 80;
  int comments_per_article = 6;
  int max_mentions_per_comment = 1;
  int min_featured = 2;
  int max_featured = 3;

  double frac_nickname = 0.15;
  double frac_ambiguous = 0.2;
  double frac_pronominal = 0.15;
  double frac_plural = 0.05;
  double frac_other = 0.1;
  // Unlisted alias of an entity that is neither in the article nor related
  // to it; unreachable by candidate construction unless aliases are
  // harvested. Zero keeps gold coverage at 1.
  double frac_offarticle_alias = 0.0;
  double frac_nil = 0.1;

  // Share of entities paired up under a shared nickname.
  double ambiguous_entity_fraction = 0.5;
  int nicknames_per_entity = 1;
  int aliases_per_entity = 1;
  int num_nil_names = 12;
  int num_titles = 1500;

  int unlabeled_articles = 0;
  int unlabeled_comments_per_article = 0;

  std::array<double, 3> split_ratios = {0.7, 0.15, 0.15};

  void Validate() const;  // throws InvalidArgument on infeasible configs
};

SyntheticConfig SyntheticConfigFromJson(const Json& j);
Json SyntheticConfigToJson(const SyntheticConfig& c);

struct SyntheticData {
  KnowledgeBase kb;
  Corpus corpus;
  DatasetSplit split;
  // News-title stream for co-occurrence embeddings.
  std::vector<std::string> titles;
  // Articles and comments without annotations, for distant supervision.
  Corpus unlabeled;
  // Aliases used in comments that the KB does not list.
  std::map<std::string, std::vector<std::string>> unlisted_aliases;
  std::vector<std::string> pronouns;  // "he", "she", "they"
};

SyntheticData GenSynthetic(const SyntheticConfig& config, uint64_t seed);

// Pronoun lexicon used by the generator, as JSONL lines
// {"surface", "gender", "plural"}.
std::string SyntheticPronounLexicon();

}  // namespace xref

#endif  // XREF_SYNTHETIC_H_
