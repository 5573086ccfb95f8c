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

#ifndef XREF_TESTS_FIXTURES_H_
#define XREF_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "xref/corpus.h"
#include "xref/kb.h"
#include "xref/text.h"

namespace xref::testing {

inline Entity MakeEntity(std::string id, std::string name,
                         std::vector<std::string> nicknames = {},
                         std::vector<std::string> relations = {},
                         Gender gender = Gender::kUnknown) {
  Entity e;
  e.id = std::move(id);
  e.canonical_name = std::move(name);
  e.nicknames = std::move(nicknames);
  e.relations = std::move(relations);
  e.gender = gender;
  e.entity_type = "person";
  return e;
}

// E1 Ann (male, related to E2), E2 Bob, E3 Cat; E2 and E3 share "Bing".
inline KnowledgeBase SmallKb() {
  return KnowledgeBase::FromEntities({
      MakeEntity("E1", "Ann", {}, {"E2"}, Gender::kMale),
      MakeEntity("E2", "Bob", {"Bing"}, {}, Gender::kMale),
      MakeEntity("E3", "Cat", {"Bing"}, {}, Gender::kFemale),
  });
}

inline Article MakeArticle(std::string id, std::string title,
                           std::vector<std::string> sentences) {
  Article a;
  a.id = std::move(id);
  a.title = Utf8ToU32(title);
  for (auto& s : sentences) a.sentences.push_back(Utf8ToU32(s));
  return a;
}

inline Comment MakeComment(std::string id, std::string article_id, std::string text) {
  Comment c;
  c.id = std::move(id);
  c.article_id = std::move(article_id);
  c.chars = Utf8ToU32(text);
  return c;
}

// Mention over the first occurrence of `surface` in the comment.
inline Mention MentionOf(const Comment& c, const std::string& surface,
                         std::vector<std::string> gold) {
  const std::u32string s = Utf8ToU32(surface);
  const size_t pos = c.chars.find(s);
  Mention m;
  m.start = static_cast<int>(pos);
  m.end = static_cast<int>(pos + s.size());
  m.gold = std::move(gold);
  return m;
}

}  // namespace xref::testing

#endif  // XREF_TESTS_FIXTURES_H_
