// Copyright 2026 The weaklearn Authors
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

#include "weaklearn/textpipe.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "weaklearn/error.hpp"

namespace weaklearn {

namespace {

constexpr std::string_view kDictMagic = "#weaklearn-dict v1";

bool is_separator(UChar32 c) { return c == '-' || c == '/' || c == '_'; }

const icu::Normalizer2& nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorKind::kIo, "ICU NFD normalizer unavailable");
  }
  return *n;
}

// Appends the folded form of one code point to `out`: ASCII letters,
// or a single space for whitespace and separators.
void fold_code_point(const icu::Normalizer2& norm, UChar32 c, std::string& out) {
  if (c < 0x80) {
    if ((c >= 'a' && c <= 'z')) {
      out.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (u_isUWhiteSpace(c) || is_separator(c)) {
      out.push_back(' ');
    }
    return;
  }
  if (u_isUWhiteSpace(c)) {
    out.push_back(' ');
    return;
  }
  const UChar32 lower = u_tolower(c);
  icu::UnicodeString decomposed;
  if (!norm.getDecomposition(lower, decomposed)) decomposed = icu::UnicodeString(lower);
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 d = decomposed.char32At(i);
    i += U16_LENGTH(d);
    if (d >= 'a' && d <= 'z') {
      out.push_back(static_cast<char>(d));
    } else if (d >= 'A' && d <= 'Z') {
      out.push_back(static_cast<char>(d - 'A' + 'a'));
    }
  }
}

}  // namespace

TokenizedDoc normalize_text(std::string_view raw) {
  const icu::Normalizer2& norm = nfd();
  std::string folded;
  folded.reserve(raw.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
  const int32_t length = static_cast<int32_t>(raw.size());
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) continue;  // invalid UTF-8 byte
    fold_code_point(norm, c, folded);
  }
  TokenizedDoc doc;
  std::istringstream ss(folded);
  for (std::string tok; ss >> tok;) doc.tokens.push_back(std::move(tok));
  return doc;
}

int32_t Dictionary::find(std::string_view word) const {
  auto it = lookup_.find(word);
  return it == lookup_.end() ? -1 : it->second;
}

void Dictionary::rebuild_lookup() {
  lookup_.clear();
  for (size_t i = 0; i < words.size(); ++i) lookup_.emplace(words[i], static_cast<int32_t>(i));
}

void TokenCounter::add(const TokenizedDoc& doc) {
  for (const auto& t : doc.tokens) ++counts_[t];
}

void TokenCounter::merge(const TokenCounter& other) {
  for (const auto& [w, c] : other.counts_) counts_[w] += c;
}

Dictionary TokenCounter::finalize(int64_t K, int64_t stop_count) const {
  if (K < 1) throw Error(ErrorKind::kInvalidArgument, "K must be positive");
  if (stop_count < 0) throw Error(ErrorKind::kInvalidArgument, "stop_count must be non-negative");
  std::vector<std::pair<std::string, uint64_t>> ranked(counts_.begin(), counts_.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  // counts_ is ordered by word, so the stable sort leaves ties ascending.
  const size_t first = std::min(ranked.size(), static_cast<size_t>(stop_count));
  if (first >= ranked.size()) throw Error(ErrorKind::kEmptyVocabulary, "empty vocabulary");
  const size_t last = std::min(ranked.size(), first + static_cast<size_t>(K));
  Dictionary dict;
  dict.K = K;
  dict.stop_count = stop_count;
  for (size_t i = first; i < last; ++i) {
    dict.words.push_back(ranked[i].first);
    dict.counts.push_back(ranked[i].second);
  }
  dict.rebuild_lookup();
  return dict;
}

Dictionary build_dictionary(const std::vector<TokenizedDoc>& docs, int64_t K, int64_t stop_count) {
  TokenCounter counter;
  for (const auto& d : docs) counter.add(d);
  return counter.finalize(K, stop_count);
}

LabelSet encode_targets(const TokenizedDoc& doc, const Dictionary& dict) {
  LabelSet labels;
  for (const auto& t : doc.tokens) {
    const int32_t idx = dict.find(t);
    if (idx >= 0) labels.push_back(idx);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

void write_dictionary(std::ostream& out, const Dictionary& dict) {
  out << kDictMagic << " K=" << dict.K << " stop=" << dict.stop_count << '\n';
  for (size_t i = 0; i < dict.words.size(); ++i) out << dict.words[i] << '\t' << dict.counts[i] << '\n';
}

Dictionary read_dictionary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind(kDictMagic, 0) != 0) {
    throw Error(ErrorKind::kMalformedHeader, "malformed header");
  }
  Dictionary dict;
  long long k = 0, stop = 0;
  if (std::sscanf(header.c_str() + kDictMagic.size(), " K=%lld stop=%lld", &k, &stop) != 2) {
    throw Error(ErrorKind::kMalformedHeader, "malformed header");
  }
  dict.K = k;
  dict.stop_count = stop;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::kMalformedHeader, "bad dictionary line: " + line);
    dict.words.push_back(line.substr(0, tab));
    dict.counts.push_back(std::stoull(line.substr(tab + 1)));
  }
  dict.rebuild_lookup();
  return dict;
}

void save_dictionary(const std::string& path, const Dictionary& dict) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  write_dictionary(out, dict);
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  return read_dictionary(in);
}

}  // namespace weaklearn
