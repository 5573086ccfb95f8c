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

#include "xref/text.h"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "xref/error.h"

namespace xref {
namespace {

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *nfc;
}

bool IsSeparator(char32_t c) {
  if (c == U' ' || c == U'\t' || c == U'\n' || c == U'\r') return true;
  if (c < 128 && !IsAsciiAlnum(c) && c != U'_' && c != U'-') return true;
  // Ideographic space and common CJK punctuation.
  return c == 0x3000 || c == 0x3001 || c == 0x3002 || c == 0xFF0C ||
         c == 0xFF01 || c == 0xFF1F;
}

}  // namespace

std::u32string Utf8ToU32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  size_t i = 0;
  while (i < utf8.size()) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    int len;
    char32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw InvalidArgument("invalid UTF-8 lead byte at offset " +
                            std::to_string(i));
    }
    if (i + len > utf8.size()) {
      throw InvalidArgument("truncated UTF-8 sequence at offset " +
                            std::to_string(i));
    }
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw InvalidArgument("invalid UTF-8 continuation at offset " +
                              std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string U32ToUtf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string U32ToUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) out += U32ToUtf8(c);
  return out;
}

bool IsAsciiAlnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9');
}

std::u32string FoldAscii(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& c : out) {
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
  }
  return out;
}

std::string NormalizeSurface(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const icu::UnicodeString nfc = Nfc().normalize(src, status);
  if (U_FAILURE(status)) throw InvalidArgument("NFC normalization failed");
  std::string out;
  nfc.toUTF8String(out);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool IsNfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const bool ok = Nfc().isNormalized(src, status);
  return U_SUCCESS(status) && ok;
}

int SurfaceMatcher::Add(std::string_view surface) {
  std::u32string key = Utf8ToU32(NormalizeSurface(surface));
  if (key.empty()) throw InvalidArgument("empty surface");
  auto it = keys_.find(key);
  if (it != keys_.end()) return it->second;
  const int id = static_cast<int>(surfaces_.size());
  surfaces_.push_back(U32ToUtf8(key));
  max_len_ = std::max(max_len_, static_cast<int>(key.size()));
  keys_.emplace(std::move(key), id);
  return id;
}

bool SurfaceMatcher::BoundaryOk(std::u32string_view text, int start,
                                int end) const {
  if (IsAsciiAlnum(text[start]) && start > 0 && IsAsciiAlnum(text[start - 1])) {
    return false;
  }
  if (IsAsciiAlnum(text[end - 1]) && end < static_cast<int>(text.size()) &&
      IsAsciiAlnum(text[end])) {
    return false;
  }
  return true;
}

std::vector<SurfaceMatch> SurfaceMatcher::FindAll(
    std::u32string_view text) const {
  std::vector<SurfaceMatch> out;
  if (keys_.empty()) return out;
  const std::u32string folded = FoldAscii(text);
  const int n = static_cast<int>(folded.size());
  int i = 0;
  while (i < n) {
    bool found = false;
    for (int len = std::min(max_len_, n - i); len >= 1; --len) {
      auto it = keys_.find(folded.substr(i, len));
      if (it != keys_.end() && BoundaryOk(folded, i, i + len)) {
        out.push_back({i, i + len, it->second});
        i += len;
        found = true;
        break;
      }
    }
    if (!found) ++i;
  }
  return out;
}

std::vector<SurfaceMatch> SurfaceMatcher::FindEvery(
    std::u32string_view text) const {
  std::vector<SurfaceMatch> out;
  const std::u32string folded = FoldAscii(text);
  const int n = static_cast<int>(folded.size());
  for (int i = 0; i < n; ++i) {
    for (int len = 1; len <= std::min(max_len_, n - i); ++len) {
      auto it = keys_.find(folded.substr(i, len));
      if (it != keys_.end() && BoundaryOk(folded, i, i + len)) {
        out.push_back({i, i + len, it->second});
      }
    }
  }
  return out;
}

std::vector<std::u32string> WhitespaceTokenizer::Tokenize(
    std::u32string_view text) const {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : text) {
    if (IsSeparator(c)) {
      if (!cur.empty()) out.push_back(FoldAscii(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(FoldAscii(cur));
  return out;
}

LongestMatchTokenizer::LongestMatchTokenizer(
    std::vector<std::string> vocabulary) {
  for (const auto& v : vocabulary) {
    if (!v.empty()) matcher_.Add(v);
  }
}

std::vector<std::u32string> LongestMatchTokenizer::Tokenize(
    std::u32string_view text) const {
  std::vector<std::u32string> out;
  int pos = 0;
  auto flush = [&](int until) {
    for (auto& t : fallback_.Tokenize(text.substr(pos, until - pos))) {
      out.push_back(std::move(t));
    }
  };
  for (const SurfaceMatch& m : matcher_.FindAll(text)) {
    flush(m.start);
    out.push_back(Utf8ToU32(matcher_.surface(m.key)));
    pos = m.end;
  }
  flush(static_cast<int>(text.size()));
  return out;
}

}  // namespace xref
