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

#ifndef XREF_KB_H_
#define XREF_KB_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xref/text.h"

namespace xref {

enum class Gender { kMale, kFemale, kNeutral, kUnknown };

std::string_view GenderName(Gender g);
Gender ParseGender(std::string_view s);  // throws InvalidArgument

struct Entity {
  std::string id;
  std::string canonical_name;
  std::vector<std::string> nicknames;
  Gender gender = Gender::kUnknown;
  std::string entity_type;
  std::vector<std::string> relations;  // directed, as stored
  std::optional<std::string> description;
};

using IdSet = std::set<std::string>;

// Entity inventory with surface-form indices. Index keys are normalized with
// NormalizeSurface. Immutable after construction except for AddAlias, which
// is applied before training.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  // Validates ids, names and relations and builds the indices.
  static KnowledgeBase FromEntities(std::vector<Entity> entities);

  int size() const { return static_cast<int>(entities_.size()); }
  bool Contains(std::string_view id) const;
  const Entity& Get(std::string_view id) const;  // throws NotFoundError
  const std::map<std::string, Entity, std::less<>>& entities() const {
    return entities_;
  }

  // Exact match of the normalized surface against canonical names, plus
  // nicknames and harvested aliases when use_nicknames is set.
  IdSet LookupSurface(std::string_view surface, bool use_nicknames) const;

  // Canonical names plus harvested aliases; nicknames excluded. This is the
  // surface set used by candidate construction.
  IdSet LookupCanonicalOrHarvested(std::string_view surface) const;

  // Declared out-edges of id.
  IdSet RelatedEntities(std::string_view id) const;
  // Out-edges and in-edges of id.
  IdSet Neighbors(std::string_view id) const;

  bool IsAmbiguous(std::string_view surface) const;

  // Registers a harvested alias; alias_index only grows.
  void AddAlias(const std::string& id, const std::string& alias);
  const std::vector<std::string>& HarvestedAliases(std::string_view id) const;

  using Index = std::map<std::string, IdSet, std::less<>>;
  const Index& canonical_index() const { return canonical_index_; }
  // Nicknames plus harvested aliases.
  const Index& alias_index() const { return alias_index_; }
  const Index& harvested_index() const { return harvested_index_; }

 private:
  std::map<std::string, Entity, std::less<>> entities_;
  std::map<std::string, std::vector<std::string>, std::less<>> harvested_;
  std::map<std::string, std::set<std::string>, std::less<>> in_edges_;
  Index canonical_index_;
  Index alias_index_;
  Index harvested_index_;
};

// JSONL, one entity per line. Harvested aliases round-trip through an
// optional "aliases" field.
KnowledgeBase LoadKb(const std::string& path);
KnowledgeBase ParseKb(std::string_view jsonl);
void SaveKb(const KnowledgeBase& kb, const std::string& path);
std::string SerializeKb(const KnowledgeBase& kb);

}  // namespace xref

#endif  // XREF_KB_H_
