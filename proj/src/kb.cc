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

#include "xref/kb.h"

#include <sstream>

#include "xref/error.h"
#include "xref/io.h"

namespace xref {

std::string_view GenderName(Gender g) {
  switch (g) {
    case Gender::kMale:
      return "male";
    case Gender::kFemale:
      return "female";
    case Gender::kNeutral:
      return "neutral";
    case Gender::kUnknown:
      return "unknown";
  }
  return "unknown";
}

Gender ParseGender(std::string_view s) {
  if (s == "male") return Gender::kMale;
  if (s == "female") return Gender::kFemale;
  if (s == "neutral") return Gender::kNeutral;
  if (s == "unknown") return Gender::kUnknown;
  throw InvalidArgument("unknown gender '" + std::string(s) + "'");
}

KnowledgeBase KnowledgeBase::FromEntities(std::vector<Entity> entities) {
  KnowledgeBase kb;
  for (auto& e : entities) {
    if (e.id.empty()) throw LoadError("entity with empty id");
    if (e.canonical_name.empty()) {
      throw LoadError("entity " + e.id + " has an empty canonical_name");
    }
    const std::string id = e.id;
    if (!kb.entities_.emplace(id, std::move(e)).second) {
      throw LoadError("duplicate entity id " + id);
    }
  }
  for (const auto& [id, e] : kb.entities_) {
    for (const auto& r : e.relations) {
      if (r == id) throw LoadError("entity " + id + " relates to itself");
      if (!kb.entities_.count(r)) {
        throw LoadError("entity " + id + " relates to unknown id " + r);
      }
      kb.in_edges_[r].insert(id);
    }
    kb.canonical_index_[NormalizeSurface(e.canonical_name)].insert(id);
    for (const auto& n : e.nicknames) {
      if (n.empty()) throw LoadError("entity " + id + " has an empty nickname");
      kb.alias_index_[NormalizeSurface(n)].insert(id);
    }
  }
  return kb;
}

bool KnowledgeBase::Contains(std::string_view id) const {
  return entities_.find(id) != entities_.end();
}

const Entity& KnowledgeBase::Get(std::string_view id) const {
  auto it = entities_.find(id);
  if (it == entities_.end()) {
    throw NotFoundError("unknown entity " + std::string(id));
  }
  return it->second;
}

IdSet KnowledgeBase::LookupSurface(std::string_view surface,
                                   bool use_nicknames) const {
  if (surface.empty()) throw InvalidArgument("empty surface");
  const std::string key = NormalizeSurface(surface);
  IdSet out;
  if (auto it = canonical_index_.find(key); it != canonical_index_.end()) {
    out = it->second;
  }
  if (use_nicknames) {
    if (auto it = alias_index_.find(key); it != alias_index_.end()) {
      out.insert(it->second.begin(), it->second.end());
    }
  }
  return out;
}

IdSet KnowledgeBase::LookupCanonicalOrHarvested(std::string_view surface) const {
  const std::string key = NormalizeSurface(surface);
  IdSet out;
  if (auto it = canonical_index_.find(key); it != canonical_index_.end()) {
    out = it->second;
  }
  if (auto it = harvested_index_.find(key); it != harvested_index_.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

IdSet KnowledgeBase::RelatedEntities(std::string_view id) const {
  const Entity& e = Get(id);
  return IdSet(e.relations.begin(), e.relations.end());
}

IdSet KnowledgeBase::Neighbors(std::string_view id) const {
  IdSet out = RelatedEntities(id);
  if (auto it = in_edges_.find(id); it != in_edges_.end()) {
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

bool KnowledgeBase::IsAmbiguous(std::string_view surface) const {
  if (surface.empty()) return false;
  return LookupSurface(surface, /*use_nicknames=*/true).size() >= 2;
}

void KnowledgeBase::AddAlias(const std::string& id, const std::string& alias) {
  if (!Contains(id)) throw NotFoundError("unknown entity " + id);
  if (alias.empty()) throw InvalidArgument("empty alias");
  const std::string key = NormalizeSurface(alias);
  auto& list = harvested_[id];
  for (const auto& a : list) {
    if (NormalizeSurface(a) == key) return;
  }
  list.push_back(alias);
  alias_index_[key].insert(id);
  harvested_index_[key].insert(id);
}

const std::vector<std::string>& KnowledgeBase::HarvestedAliases(
    std::string_view id) const {
  static const std::vector<std::string> kEmpty;
  auto it = harvested_.find(id);
  return it == harvested_.end() ? kEmpty : it->second;
}

KnowledgeBase ParseKb(std::string_view jsonl) {
  std::vector<Entity> entities;
  std::vector<std::pair<std::string, std::vector<std::string>>> aliases;
  ForEachJsonLine(jsonl, [&](int line, const Json& j) {
    Entity e;
    e.id = j.at("id").get<std::string>();
    e.canonical_name = j.at("canonical_name").get<std::string>();
    if (j.contains("nicknames")) {
      e.nicknames = j["nicknames"].get<std::vector<std::string>>();
    }
    try {
      e.gender = ParseGender(j.value("gender", "unknown"));
    } catch (const InvalidArgument& err) {
      throw LoadError("line " + std::to_string(line) + ": " + err.what());
    }
    e.entity_type = j.value("entity_type", "");
    if (j.contains("relations")) {
      e.relations = j["relations"].get<std::vector<std::string>>();
    }
    if (j.contains("description") && !j["description"].is_null()) {
      e.description = j["description"].get<std::string>();
    }
    if (j.contains("aliases")) {
      aliases.emplace_back(e.id, j["aliases"].get<std::vector<std::string>>());
    }
    entities.push_back(std::move(e));
  });
  KnowledgeBase kb = KnowledgeBase::FromEntities(std::move(entities));
  for (const auto& [id, list] : aliases) {
    for (const auto& a : list) kb.AddAlias(id, a);
  }
  return kb;
}

KnowledgeBase LoadKb(const std::string& path) {
  try {
    return ParseKb(ReadFile(path));
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

std::string SerializeKb(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const auto& [id, e] : kb.entities()) {
    Json j;
    j["id"] = e.id;
    j["canonical_name"] = e.canonical_name;
    j["nicknames"] = e.nicknames;
    j["gender"] = std::string(GenderName(e.gender));
    j["entity_type"] = e.entity_type;
    j["relations"] = e.relations;
    if (e.description) j["description"] = *e.description;
    const auto& harvested = kb.HarvestedAliases(id);
    if (!harvested.empty()) j["aliases"] = harvested;
    out << j.dump() << '\n';
  }
  return out.str();
}

void SaveKb(const KnowledgeBase& kb, const std::string& path) {
  WriteFile(path, SerializeKb(kb));
}

}  // namespace xref
