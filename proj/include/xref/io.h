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

#ifndef XREF_IO_H_
#define XREF_IO_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace xref {

using Json = nlohmann::json;

std::string ReadFile(const std::string& path);  // throws LoadError
void WriteFile(const std::string& path, std::string_view contents);

// Calls fn(line_number, parsed_object) for every non-blank line. Parse errors
// raise LoadError naming the 1-based line number.
void ForEachJsonLine(std::string_view jsonl,
                     const std::function<void(int, const Json&)>& fn);

// 64-bit FNV-1a; stable across platforms, used for config provenance.
uint64_t Fnv1a64(std::string_view data);
std::string HexU64(uint64_t v);

}  // namespace xref

#endif  // XREF_IO_H_
