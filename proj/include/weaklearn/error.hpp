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

#include <stdexcept>
#include <string>

namespace weaklearn {

enum class ErrorKind {
  kInvalidArgument,
  kEmptyVocabulary,
  kEmptyImage,
  kMalformedHeader,
  kMissingId,
  kDimensionMismatch,
  kShapeMismatch,
  kOutOfRange,
  kDegenerateClassBalance,
  kNoPositives,
  kPositiveNotInSubset,
  kEmptySplit,
  kZeroNormColumn,
  kTooFewPairs,
  kEmptyCandidates,
  kSingleClass,
  kIo,
  kConfigNotFound,
  kConfig,
};

/// Library-wide exception. `kind()` lets callers distinguish the named
/// failure modes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace weaklearn
