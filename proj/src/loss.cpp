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

#include "weaklearn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "weaklearn/error.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

template <typename Real>
std::vector<Real> softmax(std::span<const Real> logits) {
  std::vector<Real> p(logits.size());
  if (logits.empty()) return p;
  const Real mx = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    const double e = std::exp(double(logits[i]) - double(mx));
    p[i] = static_cast<Real>(e);
    total += e;
  }
  for (auto& v : p) v = static_cast<Real>(double(v) / total);
  return p;
}

template <typename Real>
LossGrad<Real> multiclass_loss(const Matrix<Real>& logits, const std::vector<LabelSet>& positives) {
  if (positives.size() != logits.rows) throw Error(ErrorKind::kShapeMismatch, "positives/logits row mismatch");
  LossGrad<Real> out{0.0, Matrix<Real>(logits.rows, logits.cols)};
  const double inv_b = logits.rows ? 1.0 / double(logits.rows) : 0.0;
  double total = 0.0;
  for (size_t i = 0; i < logits.rows; ++i) {
    const auto& pos = positives[i];
    if (pos.empty()) throw Error(ErrorKind::kNoPositives, "row " + std::to_string(i) + " has zero positives");
    const auto row = logits.row(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (Real v : row) mx = std::max(mx, double(v));
    double z = 0.0;
    for (Real v : row) z += std::exp(double(v) - mx);
    const double log_z = mx + std::log(z);
    for (int32_t k : pos) {
      if (k < 0 || size_t(k) >= logits.cols) throw Error(ErrorKind::kOutOfRange, "positive out of range");
      total -= double(row[size_t(k)]) - log_z;
    }
    const double n_pos = double(pos.size());
    auto d = out.d_logits.row(i);
    for (size_t j = 0; j < logits.cols; ++j) d[j] = static_cast<Real>(n_pos * std::exp(double(row[j]) - log_z) * inv_b);
    for (int32_t k : pos) d[size_t(k)] = static_cast<Real>(double(d[size_t(k)]) - inv_b);
  }
  out.loss = total * inv_b;
  return out;
}

template <typename Real>
LossGrad<Real> sampled_multiclass_loss(const Matrix<Real>& subset_logits, std::span<const int32_t> positive_position) {
  if (positive_position.size() != subset_logits.rows) {
    throw Error(ErrorKind::kShapeMismatch, "positive_position/logits row mismatch");
  }
  std::vector<LabelSet> positives(subset_logits.rows);
  for (size_t i = 0; i < subset_logits.rows; ++i) {
    const int32_t p = positive_position[i];
    if (p < 0 || size_t(p) >= subset_logits.cols) {
      throw Error(ErrorKind::kPositiveNotInSubset, "row " + std::to_string(i) + ": positive not in class subset");
    }
    positives[i] = {p};
  }
  return multiclass_loss(subset_logits, positives);
}

template <typename Real>
LossGrad<Real> ova_loss(const Matrix<Real>& logits, const std::vector<LabelSet>& positives, int64_t num_examples,
                        std::span<const int64_t> class_counts) {
  if (positives.size() != logits.rows || class_counts.size() != logits.cols) {
    throw Error(ErrorKind::kShapeMismatch, "ova_loss: shape mismatch");
  }
  for (int64_t nk : class_counts) {
    if (nk <= 0 || nk >= num_examples) throw Error(ErrorKind::kDegenerateClassBalance, "degenerate class balance");
  }
  LossGrad<Real> out{0.0, Matrix<Real>(logits.rows, logits.cols)};
  std::vector<char> is_pos(logits.cols);
  double total = 0.0;
  for (size_t i = 0; i < logits.rows; ++i) {
    std::fill(is_pos.begin(), is_pos.end(), 0);
    for (int32_t k : positives[i]) {
      if (k < 0 || size_t(k) >= logits.cols) throw Error(ErrorKind::kOutOfRange, "positive out of range");
      is_pos[size_t(k)] = 1;
    }
    for (size_t j = 0; j < logits.cols; ++j) {
      const double l = logits(i, j);
      const double nk = double(class_counts[j]);
      if (is_pos[j]) {
        const double w = 1.0 / nk;
        total += w * softplus(-l);  // -log s(l)
        out.d_logits(i, j) = static_cast<Real>(w * (sigmoid(l) - 1.0));
      } else {
        const double w = 1.0 / (double(num_examples) - nk);
        total += w * softplus(l);  // -log(1 - s(l))
        out.d_logits(i, j) = static_cast<Real>(w * sigmoid(l));
      }
    }
  }
  out.loss = total;
  return out;
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["K"] = K;
  j["subset_size"] = subset_size;
  j["trials"] = trials;
  j["positive"] = positive;
  j["shift"] = shift;
  j["mc_mean"] = mc_mean;
  j["mc_stderr"] = mc_stderr;
  j["log_Z"] = log_z;
  j["event_prob"] = event_prob;
  j["lower_bound"] = lower_bound;
  j["upper_holds"] = upper_holds;
  j["lower_holds"] = lower_holds;
  return j.dump();
}

BoundReport check_bounds(std::span<const double> logits, int64_t subset_size, int64_t trials, uint64_t seed,
                         int32_t positive) {
  const auto K = static_cast<int64_t>(logits.size());
  if (K < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one logit");
  if (subset_size > K) throw Error(ErrorKind::kInvalidArgument, "subset_size > K");
  if (subset_size < 1) throw Error(ErrorKind::kInvalidArgument, "subset_size must be >= 1");
  if (trials < 100) throw Error(ErrorKind::kInvalidArgument, "trials must be >= 100");
  if (positive < 0 || positive >= K) throw Error(ErrorKind::kOutOfRange, "positive out of range");

  BoundReport r;
  r.K = K;
  r.subset_size = subset_size;
  r.trials = trials;
  r.positive = positive;
  const double lo = *std::min_element(logits.begin(), logits.end());
  const double hi = *std::max_element(logits.begin(), logits.end());
  r.shift = -lo;
  // s_k = exp(l_k + shift) = exp(hi + shift) * scaled_k, scaled_k in (0, 1].
  const double log_scale = hi + r.shift;
  std::vector<double> scaled(static_cast<size_t>(K));
  for (int64_t k = 0; k < K; ++k) scaled[size_t(k)] = std::exp(logits[size_t(k)] - hi);
  double z_scaled = 0.0;
  for (double s : scaled) z_scaled += s;
  r.log_z = log_scale + std::log(z_scaled);
  const double threshold = z_scaled / double(K);

  constexpr int kStreams = 64;
  struct Partial {
    double sum = 0.0, sum_sq = 0.0;
    int64_t hits = 0;
  };
  std::vector<Partial> partial(kStreams);
  const Rng root(seed);
#pragma omp parallel for schedule(static)
  for (int stream = 0; stream < kStreams; ++stream) {
    Rng rng = root.split(uint64_t(stream));
    const int64_t begin = trials * stream / kStreams;
    const int64_t end = trials * (stream + 1) / kStreams;
    std::vector<int32_t> others;
    others.reserve(size_t(K - 1));
    for (int32_t k = 0; k < K; ++k)
      if (k != positive) others.push_back(k);
    std::vector<int32_t> subset(static_cast<size_t>(subset_size));
    Partial& p = partial[size_t(stream)];
    for (int64_t t = begin; t < end; ++t) {
      // Partial Fisher-Yates for the subset_size - 1 non-forced members.
      for (int64_t i = 0; i + 1 < subset_size; ++i) {
        const auto j = i + static_cast<int64_t>(rng.uniform_below(uint64_t(K - 1 - i)));
        std::swap(others[size_t(i)], others[size_t(j)]);
        subset[size_t(i)] = others[size_t(i)];
      }
      subset[size_t(subset_size - 1)] = positive;
      std::sort(subset.begin(), subset.end());
      double s = 0.0;
      for (int32_t c : subset) s += scaled[size_t(c)];
      // Accumulate deviations from log Z so that |C| = K reproduces it exactly.
      const double d = (log_scale + std::log(s)) - r.log_z;
      p.sum += d;
      p.sum_sq += d * d;
      if (s / double(subset_size) >= threshold) ++p.hits;
    }
  }
  double sum = 0.0, sum_sq = 0.0;
  int64_t hits = 0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    hits += p.hits;
  }
  const double n = double(trials);
  r.mc_mean = r.log_z + sum / n;
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  r.mc_stderr = std::sqrt(var / n);
  r.event_prob = double(hits) / n;
  r.lower_bound = r.event_prob * (std::log(double(subset_size) / double(K)) + r.log_z);
  // Slack: 3 standard errors plus rounding of the shifted logs, which matters
  // when every trial scores the same subset (stderr 0).
  const double rounding = 1e-12 * std::max(1.0, std::fabs(r.log_z));
  r.upper_holds = r.mc_mean <= r.log_z + 3.0 * r.mc_stderr + rounding;
  r.lower_holds = r.mc_mean >= r.lower_bound - 3.0 * r.mc_stderr - rounding;
  return r;
}

template std::vector<float> softmax<float>(std::span<const float>);
template std::vector<double> softmax<double>(std::span<const double>);
template LossGrad<float> multiclass_loss<float>(const Matrix<float>&, const std::vector<LabelSet>&);
template LossGrad<double> multiclass_loss<double>(const Matrix<double>&, const std::vector<LabelSet>&);
template LossGrad<float> sampled_multiclass_loss<float>(const Matrix<float>&, std::span<const int32_t>);
template LossGrad<double> sampled_multiclass_loss<double>(const Matrix<double>&, std::span<const int32_t>);
template LossGrad<float> ova_loss<float>(const Matrix<float>&, const std::vector<LabelSet>&, int64_t,
                                         std::span<const int64_t>);
template LossGrad<double> ova_loss<double>(const Matrix<double>&, const std::vector<LabelSet>&, int64_t,
                                           std::span<const int64_t>);

}  // namespace weaklearn
