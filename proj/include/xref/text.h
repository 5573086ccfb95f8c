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

#ifndef XREF_TEXT_H_
#define XREF_TEXT_H_

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xref {

// UTF-8 <-> code point conversion. Invalid UTF-8 raises InvalidArgument.
std::u32string Utf8ToU32(std::string_view utf8);
std::string U32ToUtf8(std::u32string_view text);
std::string U32ToUtf8(char32_t c);

// Surface normalization used for every KB index key and lookup: Unicode NFC,
// then ASCII-only case folding. CJK text is not case folded.
std::string NormalizeSurface(std::string_view utf8);
bool IsNfc(std::string_view utf8);

// Per-code-point ASCII lowercase; length preserving.
std::u32string FoldAscii(std::u32string_view text);

bool IsAsciiAlnum(char32_t c);

struct SurfaceMatch {
  int start = 0;  // code point offsets, half-open
  int end = 0;
  int key = 0;    // index of the matched surface in the matcher
};

// Finds occurrences of a fixed set of surfaces in text. Matching is
// longest-first, left-to-right and non-overlapping. A surface that begins
// (ends) with an ASCII letter or digit only matches where the preceding
// (following) character is not one, so Latin names match whole words while
// CJK names match anywhere.
class SurfaceMatcher {
 public:
  SurfaceMatcher() = default;

  // Surfaces are normalized with NormalizeSurface. Returns the key of the
  // surface; adding an existing surface returns its existing key.
  int Add(std::string_view surface);

  const std::string& surface(int key) const { return surfaces_[key]; }
  int size() const { return static_cast<int>(surfaces_.size()); }

  std::vector<SurfaceMatch> FindAll(std::u32string_view text) const;

  // Every valid occurrence, overlapping ones included.
  std::vector<SurfaceMatch> FindEvery(std::u32string_view text) const;

 private:
  bool BoundaryOk(std::u32string_view text, int start, int end) const;

  std::vector<std::string> surfaces_;
  std::unordered_map<std::u32string, int> keys_;
  int max_len_ = 0;
};

// Word segmenter used for article entity extraction, title processing and
// word-level features.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::u32string> Tokenize(std::u32string_view text) const = 0;
};

// Splits on whitespace and ASCII punctuation; tokens are ASCII case folded.
class WhitespaceTokenizer : public Tokenizer {
 public:
  std::vector<std::u32string> Tokenize(std::u32string_view text) const override;
};

// Emits every longest match of a surface vocabulary as one token and falls
// back to whitespace splitting for the text between matches.
class LongestMatchTokenizer : public Tokenizer {
 public:
  explicit LongestMatchTokenizer(std::vector<std::string> vocabulary);
  std::vector<std::u32string> Tokenize(std::u32string_view text) const override;

 private:
  SurfaceMatcher matcher_;
  WhitespaceTokenizer fallback_;
};

}  // namespace xref

#endif  // XREF_TEXT_H_
