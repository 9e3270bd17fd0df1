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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "weaklearn/data.hpp"
#include "weaklearn/model.hpp"
#include "weaklearn/textpipe.hpp"

namespace weaklearn {

struct EvalReport {
  std::string metric;
  double value = 0.0;
  int64_t k = 0;  // 0 when not applicable
  int64_t n_items = 0;
  int64_t n_skipped = 0;
  std::map<std::string, double> extra;

  std::string to_json() const;
};

/// Indices of the k largest scores, ties broken by ascending index.
template <typename Real>
std::vector<int32_t> top_k(std::span<const Real> scores, size_t k);

/// Mean over rows of |top-k(scores_i) ∩ labels_i| / k.
template <typename Real>
EvalReport precision_at_k(const Matrix<Real>& scores, const std::vector<LabelSet>& labels, int64_t k);

template <typename Real>
EvalReport precision_at_k(const ModelParams<Real>& params, const Dataset& dataset, int64_t k);

/// Rows are f(x_i; theta), the penultimate representation.
template <typename Real>
Matrix<Real> extract_features(const ModelParams<Real>& params, const Dataset& dataset);

/// Word vectors w_k as rows of a K x E matrix.
template <typename Real>
Matrix<double> word_vectors(const ModelParams<Real>& params);

struct ProbeOptions {
  std::vector<double> lambda_grid{1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2};
  int64_t max_iterations = 10000;
  double gradient_tolerance = 1e-6;
  uint64_t seed = 0;
};

struct ProbeResult {
  std::vector<int32_t> classes;  // probe class c -> original label
  Matrix<double> weights;        // |classes| x (dim + 1), last column is the bias
  std::vector<double> feature_mean, feature_scale;
  double lambda = 0.0;
  EvalReport report;             // held-out test accuracy
};

/// L2-regularized multinomial logistic regression on frozen features.
/// Rows are split by a stable hash of `ids`: 20% test, the rest 80/20 into
/// train / validation. The lambda with the best validation accuracy is refit
/// on train + validation and scored on test.
ProbeResult linear_probe(const Matrix<double>& features, std::span<const int32_t> labels,
                         std::span<const std::string> ids, const ProbeOptions& options = {});

struct AnalogyQuestion {
  std::string a, b, c, d;
};

struct SimilarityPair {
  std::string word1, word2;
  double rating = 0.0;
};

struct TranslationPair {
  std::string source, target;
};

enum class Direction { kSourceToTarget, kTargetToSource };

/// Predict D as argmax_k cos(w_B - w_A + w_C, w_k) over unit-normalized word
/// vectors, k not in {A, B, C}. Questions with out-of-dictionary words are
/// counted in n_skipped.
EvalReport analogy_accuracy(const Matrix<double>& vectors, const std::vector<AnalogyQuestion>& questions,
                            const Dictionary& dict);

/// Spearman rank correlation (average ranks for ties) between cosine
/// similarities and ratings.
EvalReport spearman_similarity(const Matrix<double>& vectors, const std::vector<SimilarityPair>& pairs,
                               const Dictionary& dict);

/// Fraction of queries whose counterpart is among the k candidates with the
/// highest cosine. Candidates are the other-language words of the scorable
/// pairs; pairs with identical words are skipped.
EvalReport translation_precision(const Matrix<double>& vectors, const std::vector<TranslationPair>& pairs,
                                 const Dictionary& dict, Direction direction, int64_t k);

/// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);
double pearson(std::span<const double> x, std::span<const double> y);

/// Cosine top-n neighbours of every word, excluding the word itself.
std::vector<std::vector<std::pair<int32_t, double>>> nearest_neighbors(const Matrix<double>& vectors, size_t n);

/// CSV (word, then E values per row, dictionary order) plus a JSON file of
/// the 10 nearest cosine neighbours per word.
void dump_embeddings(const Matrix<double>& vectors, const Dictionary& dict, const std::string& csv_path,
                     const std::string& neighbors_path);
Matrix<double> read_embeddings_csv(const std::string& path, std::vector<std::string>* words = nullptr);

std::vector<AnalogyQuestion> read_analogy_questions(const std::string& path);
std::vector<SimilarityPair> read_similarity_pairs(const std::string& path);
std::vector<TranslationPair> read_translation_pairs(const std::string& path);

}  // namespace weaklearn
