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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace weaklearn {

using LabelSet = std::vector<int32_t>;  // sorted, unique dictionary indices

struct TokenizedDoc {
  std::vector<std::string> tokens;
};

/// Lowercase, strip accents (canonical decomposition, drop combining marks),
/// delete everything that is not an ASCII letter or whitespace, and split on
/// whitespace. Hyphen, slash and underscore act as separators; all other
/// punctuation and digits are deleted in place ("A1B2" -> "ab").
TokenizedDoc normalize_text(std::string_view raw);

struct Dictionary {
  std::vector<std::string> words;
  std::vector<uint64_t> counts;
  int64_t K = 0;           // requested size; words.size() <= K
  int64_t stop_count = 0;

  int64_t size() const { return static_cast<int64_t>(words.size()); }
  /// Index of `word`, or -1.
  int32_t find(std::string_view word) const;
  void rebuild_lookup();

 private:
  std::map<std::string, int32_t, std::less<>> lookup_;
};

/// Token counts from a shard of documents. Shards merge associatively, so
/// counting may be split across workers without changing the dictionary.
class TokenCounter {
 public:
  void add(const TokenizedDoc& doc);
  void merge(const TokenCounter& other);
  const std::map<std::string, uint64_t>& counts() const { return counts_; }

  /// Drops the stop_count most frequent tokens, keeps the next K in
  /// (count desc, word asc) order. Throws kEmptyVocabulary if nothing is left.
  Dictionary finalize(int64_t K, int64_t stop_count) const;

 private:
  std::map<std::string, uint64_t> counts_;
};

Dictionary build_dictionary(const std::vector<TokenizedDoc>& docs, int64_t K, int64_t stop_count);

LabelSet encode_targets(const TokenizedDoc& doc, const Dictionary& dict);

void write_dictionary(std::ostream& out, const Dictionary& dict);
Dictionary read_dictionary(std::istream& in);
void save_dictionary(const std::string& path, const Dictionary& dict);
Dictionary load_dictionary(const std::string& path);

}  // namespace weaklearn
