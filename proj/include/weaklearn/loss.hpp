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
#include <span>
#include <string>
#include <vector>

#include "weaklearn/model.hpp"
#include "weaklearn/textpipe.hpp"

namespace weaklearn {

template <typename Real>
struct LossGrad {
  double loss = 0.0;
  Matrix<Real> d_logits;
};

/// Max-shifted softmax.
template <typename Real>
std::vector<Real> softmax(std::span<const Real> logits);

/// Multi-class logistic loss averaged over rows:
///   -(1/B) sum_rows sum_{k in positives} log softmax(row)_k
/// d_logits(i, :) = (|P_i| softmax(row_i) - y_i) / B.
template <typename Real>
LossGrad<Real> multiclass_loss(const Matrix<Real>& logits, const std::vector<LabelSet>& positives);

/// Multi-class loss over a class subset C with one positive per row, given
/// as its column position in C. Identical to multiclass_loss on those columns.
template <typename Real>
LossGrad<Real> sampled_multiclass_loss(const Matrix<Real>& subset_logits, std::span<const int32_t> positive_position);

/// Class-rebalanced one-vs-all logistic loss (negated log-likelihood), summed
/// over rows and columns:
///   -sum_n sum_k [ y_nk / N_k log s(l_nk) + (1 - y_nk) / (N - N_k) log(1 - s(l_nk)) ]
/// `positives` index columns of `logits`; `class_counts[j]` is N_k for column j.
template <typename Real>
LossGrad<Real> ova_loss(const Matrix<Real>& logits, const std::vector<LabelSet>& positives, int64_t num_examples,
                        std::span<const int64_t> class_counts);

struct BoundReport {
  int64_t K = 0;
  int64_t subset_size = 0;
  int64_t trials = 0;
  int32_t positive = 0;
  double shift = 0.0;
  double mc_mean = 0.0;     // E[log sum_{c in C} s_c]
  double mc_stderr = 0.0;
  double log_z = 0.0;
  double event_prob = 0.0;  // P(mean_C s_c >= Z / K), estimated from the same trials
  double lower_bound = 0.0; // event_prob * (log(|C| / K) + log Z)
  bool upper_holds = false;
  bool lower_holds = false;

  std::string to_json() const;
};

/// Monte-Carlo check of E[log sum_C s_c] <= log Z and of the Markov lower
/// bound, with s_k = exp(l_k + shift), shift = -min(l). C has `subset_size`
/// classes drawn uniformly without replacement, `positive` always included.
/// Trials run on 64 fixed rng streams merged in order, so the report does not
/// depend on the thread count. Both checks allow 3 standard errors plus a
/// rounding margin of 1e-12 * max(1, |log Z|).
BoundReport check_bounds(std::span<const double> logits, int64_t subset_size, int64_t trials, uint64_t seed,
                         int32_t positive = 0);

}  // namespace weaklearn
