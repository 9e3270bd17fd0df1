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

#include "weaklearn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "weaklearn/error.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

namespace {

constexpr size_t kEvalChunk = 256;

int32_t lookup(const Dictionary& dict, const std::string& word) {
  const int32_t idx = dict.find(word);
  if (idx >= 0) return idx;
  const auto doc = normalize_text(word);
  return doc.tokens.size() == 1 ? dict.find(doc.tokens[0]) : -1;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Rows scaled to unit L2 norm; zero rows stay zero and are flagged.
Matrix<double> normalize_rows(const Matrix<double>& v, std::vector<char>& zero) {
  Matrix<double> out = v;
  zero.assign(v.rows, 0);
  for (size_t r = 0; r < v.rows; ++r) {
    const double n = std::sqrt(dot(v.row(r), v.row(r)));
    if (n == 0.0) {
      zero[r] = 1;
      continue;
    }
    for (double& x : out.row(r)) x /= n;
  }
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

template <typename Real>
Matrix<Real> gather_images(const Dataset& dataset, size_t begin, size_t end) {
  const size_t dim = dataset.input_dim();
  Matrix<Real> batch(end - begin, dim);
  for (size_t i = begin; i < end; ++i) {
    const auto& px = dataset.examples[i].image.pixels;
    if (px.size() != dim) throw Error(ErrorKind::kShapeMismatch, "image size differs from dataset dims");
    std::copy(px.begin(), px.end(), batch.data.begin() + static_cast<ptrdiff_t>((i - begin) * dim));
  }
  return batch;
}

}  // namespace

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["metric"] = metric;
  j["value"] = value;
  if (k > 0) j["k"] = k;
  j["n_items"] = n_items;
  j["n_skipped"] = n_skipped;
  for (const auto& [key, v] : extra) j[key] = v;
  return j.dump();
}

template <typename Real>
std::vector<int32_t> top_k(std::span<const Real> scores, size_t k) {
  std::vector<int32_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(k), idx.end(), [&](int32_t a, int32_t b) {
    return scores[size_t(a)] > scores[size_t(b)] || (scores[size_t(a)] == scores[size_t(b)] && a < b);
  });
  idx.resize(k);
  return idx;
}

template <typename Real>
EvalReport precision_at_k(const Matrix<Real>& scores, const std::vector<LabelSet>& labels, int64_t k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  if (labels.size() != scores.rows) throw Error(ErrorKind::kShapeMismatch, "labels/scores row mismatch");
  EvalReport r{"precision_at_k", 0.0, k, static_cast<int64_t>(scores.rows), 0, {}};
  double total = 0.0;
  for (size_t i = 0; i < scores.rows; ++i) {
    const auto top = top_k<Real>(scores.row(i), size_t(k));
    int64_t hits = 0;
    for (int32_t c : top) hits += std::binary_search(labels[i].begin(), labels[i].end(), c) ? 1 : 0;
    total += double(hits) / double(k);
  }
  r.value = scores.rows ? total / double(scores.rows) : 0.0;
  return r;
}

template <typename Real>
EvalReport precision_at_k(const ModelParams<Real>& params, const Dataset& dataset, int64_t k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  EvalReport r{"precision_at_k", 0.0, k, static_cast<int64_t>(dataset.size()), 0, {}};
  double total = 0.0;
  for (size_t begin = 0; begin < dataset.size(); begin += kEvalChunk) {
    const size_t end = std::min(dataset.size(), begin + kEvalChunk);
    const auto images = gather_images<Real>(dataset, begin, end);
    const auto fwd = forward(params, std::span<const Real>(images.data), end - begin);
    const auto scores = score_all(params, fwd.embeddings);
    std::vector<LabelSet> labels;
    labels.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) labels.push_back(dataset.examples[i].labels);
    total += precision_at_k(scores, labels, k).value * double(end - begin);
  }
  r.value = dataset.empty() ? 0.0 : total / double(dataset.size());
  return r;
}

template <typename Real>
Matrix<Real> extract_features(const ModelParams<Real>& params, const Dataset& dataset) {
  Matrix<Real> features(dataset.size(), params.embed_dim());
  for (size_t begin = 0; begin < dataset.size(); begin += kEvalChunk) {
    const size_t end = std::min(dataset.size(), begin + kEvalChunk);
    const auto images = gather_images<Real>(dataset, begin, end);
    const auto fwd = forward(params, std::span<const Real>(images.data), end - begin);
    std::copy(fwd.embeddings.data.begin(), fwd.embeddings.data.end(),
              features.data.begin() + static_cast<ptrdiff_t>(begin * features.cols));
  }
  return features;
}

template <typename Real>
Matrix<double> word_vectors(const ModelParams<Real>& params) {
  Matrix<double> v(size_t(params.num_classes), params.embed_dim());
  std::copy(params.output.values.begin(), params.output.values.end(), v.data.begin());
  return v;
}

namespace {

struct ProbeData {
  Matrix<double> x;  // standardized, with trailing 1 for the bias
  std::vector<int32_t> y;
};

// Multinomial logistic regression objective (mean cross-entropy plus
// lambda/2 ||W||^2 excluding bias) and its gradient.
double probe_objective(const ProbeData& d, const Matrix<double>& w, double lambda, Matrix<double>& grad) {
  const size_t n = d.x.rows, dim = d.x.cols, n_cls = w.rows;
  std::fill(grad.data.begin(), grad.data.end(), 0.0);
  Matrix<double> resid(n, n_cls);
  double loss = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : loss)
  for (int64_t i = 0; i < int64_t(n); ++i) {
    const auto xi = d.x.row(size_t(i));
    auto r = resid.row(size_t(i));
    double mx = -INFINITY;
    for (size_t c = 0; c < n_cls; ++c) {
      r[c] = dot(xi, w.row(c));
      mx = std::max(mx, r[c]);
    }
    double z = 0.0;
    for (size_t c = 0; c < n_cls; ++c) z += std::exp(r[c] - mx);
    const double log_z = mx + std::log(z);
    loss += log_z - r[size_t(d.y[size_t(i)])];
    for (size_t c = 0; c < n_cls; ++c) r[c] = std::exp(r[c] - log_z);
    r[size_t(d.y[size_t(i)])] -= 1.0;
  }
  const double inv_n = 1.0 / double(n);
#pragma omp parallel for schedule(static)
  for (int64_t c = 0; c < int64_t(n_cls); ++c) {
    auto g = grad.row(size_t(c));
    for (size_t i = 0; i < n; ++i) {
      const double r = resid(i, size_t(c)) * inv_n;
      const auto xi = d.x.row(i);
      for (size_t j = 0; j < dim; ++j) g[j] += r * xi[j];
    }
    for (size_t j = 0; j + 1 < dim; ++j) g[j] += lambda * w(size_t(c), j);
  }
  double reg = 0.0;
  for (size_t c = 0; c < n_cls; ++c)
    for (size_t j = 0; j + 1 < dim; ++j) reg += w(c, j) * w(c, j);
  return loss * inv_n + 0.5 * lambda * reg;
}

// Accelerated full-batch gradient descent (Nesterov momentum with gradient
// restart) from zero, step 1/L with L an upper bound on the Hessian norm.
Matrix<double> fit_probe(const ProbeData& d, size_t n_cls, double lambda, const ProbeOptions& opt,
                         int64_t* iterations) {
  const size_t dim = d.x.cols;
  double trace = 0.0;
  for (size_t i = 0; i < d.x.rows; ++i) trace += dot(d.x.row(i), d.x.row(i));
  const double lipschitz = 0.5 * trace / double(d.x.rows) + lambda;
  const double step = 1.0 / lipschitz;

  Matrix<double> x(n_cls, dim), y(n_cls, dim), x_next(n_cls, dim), grad(n_cls, dim);
  double t = 1.0;
  int64_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    probe_objective(d, y, lambda, grad);
    const double gnorm = std::sqrt(dot(grad.data, grad.data));
    if (gnorm < opt.gradient_tolerance) {
      x = y;
      break;
    }
    for (size_t i = 0; i < x.data.size(); ++i) x_next.data[i] = y.data[i] - step * grad.data[i];
    double restart = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) restart += grad.data[i] * (x_next.data[i] - x.data[i]);
    const double t_next = restart > 0.0 ? 1.0 : 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = restart > 0.0 ? 0.0 : (t - 1.0) / t_next;
    for (size_t i = 0; i < x.data.size(); ++i) y.data[i] = x_next.data[i] + momentum * (x_next.data[i] - x.data[i]);
    std::swap(x, x_next);
    t = t_next;
  }
  if (iterations) *iterations = it;
  return x;
}

double probe_accuracy(const ProbeData& d, const Matrix<double>& w) {
  if (d.x.rows == 0) return 0.0;
  int64_t correct = 0;
  for (size_t i = 0; i < d.x.rows; ++i) {
    std::vector<double> s(w.rows);
    for (size_t c = 0; c < w.rows; ++c) s[c] = dot(d.x.row(i), w.row(c));
    if (top_k<double>(s, 1)[0] == d.y[i]) ++correct;
  }
  return double(correct) / double(d.x.rows);
}

}  // namespace

ProbeResult linear_probe(const Matrix<double>& features, std::span<const int32_t> labels,
                         std::span<const std::string> ids, const ProbeOptions& options) {
  if (labels.size() != features.rows || ids.size() != features.rows) {
    throw Error(ErrorKind::kShapeMismatch, "linear_probe: features, labels and ids differ in length");
  }
  if (options.lambda_grid.empty()) throw Error(ErrorKind::kInvalidArgument, "empty lambda grid");
  ProbeResult result;
  result.classes.assign(labels.begin(), labels.end());
  std::sort(result.classes.begin(), result.classes.end());
  result.classes.erase(std::unique(result.classes.begin(), result.classes.end()), result.classes.end());
  if (result.classes.size() < 2) throw Error(ErrorKind::kSingleClass, "linear probe needs at least two classes");
  const size_t n_cls = result.classes.size();
  const size_t dim = features.cols;

  enum Split { kTrain, kVal, kTest };
  std::vector<Split> split(features.rows);
  for (size_t i = 0; i < features.rows; ++i) {
    uint64_t h = stable_hash(ids[i]) ^ options.seed;
    h = splitmix64(h);
    split[i] = h % 5 == 0 ? kTest : ((h / 5) % 5 == 0 ? kVal : kTrain);
  }

  auto build = [&](auto keep, const std::vector<double>& mean, const std::vector<double>& scale) {
    ProbeData d;
    size_t n = 0;
    for (size_t i = 0; i < features.rows; ++i) n += keep(split[i]) ? 1 : 0;
    d.x = Matrix<double>(n, dim + 1);
    size_t r = 0;
    for (size_t i = 0; i < features.rows; ++i) {
      if (!keep(split[i])) continue;
      for (size_t j = 0; j < dim; ++j) d.x(r, j) = (features(i, j) - mean[j]) / scale[j];
      d.x(r, dim) = 1.0;
      d.y.push_back(static_cast<int32_t>(
          std::lower_bound(result.classes.begin(), result.classes.end(), labels[i]) - result.classes.begin()));
      ++r;
    }
    return d;
  };
  auto moments = [&](auto keep) {
    std::vector<double> mean(dim, 0.0), scale(dim, 0.0);
    size_t n = 0;
    for (size_t i = 0; i < features.rows; ++i) {
      if (!keep(split[i])) continue;
      ++n;
      for (size_t j = 0; j < dim; ++j) mean[j] += features(i, j);
    }
    for (auto& m : mean) m /= double(std::max<size_t>(n, 1));
    for (size_t i = 0; i < features.rows; ++i) {
      if (!keep(split[i])) continue;
      for (size_t j = 0; j < dim; ++j) scale[j] += (features(i, j) - mean[j]) * (features(i, j) - mean[j]);
    }
    for (auto& s : scale) {
      s = std::sqrt(s / double(std::max<size_t>(n, 1)));
      if (s < 1e-12) s = 1.0;
    }
    return std::pair{mean, scale};
  };

  const auto is_train = [](Split s) { return s == kTrain; };
  const auto is_val = [](Split s) { return s == kVal; };
  const auto is_fit = [](Split s) { return s != kTest; };
  const auto is_test = [](Split s) { return s == kTest; };

  const auto [train_mean, train_scale] = moments(is_train);
  const ProbeData train = build(is_train, train_mean, train_scale);
  const ProbeData val = build(is_val, train_mean, train_scale);
  if (train.x.rows == 0 || val.x.rows == 0) throw Error(ErrorKind::kEmptySplit, "probe train or validation split empty");

  double best_acc = -1.0;
  for (double lambda : options.lambda_grid) {
    const auto w = fit_probe(train, n_cls, lambda, options, nullptr);
    const double acc = probe_accuracy(val, w);
    if (acc >= best_acc) {  // ties prefer the stronger regularizer (grid is ascending)
      best_acc = acc;
      result.lambda = lambda;
    }
  }

  const auto [fit_mean, fit_scale] = moments(is_fit);
  const ProbeData fit = build(is_fit, fit_mean, fit_scale);
  const ProbeData test = build(is_test, fit_mean, fit_scale);
  if (test.x.rows == 0) throw Error(ErrorKind::kEmptySplit, "probe test split empty");
  int64_t iterations = 0;
  result.weights = fit_probe(fit, n_cls, result.lambda, options, &iterations);
  result.feature_mean = fit_mean;
  result.feature_scale = fit_scale;
  result.report = EvalReport{"probe_accuracy", probe_accuracy(test, result.weights), 0,
                             static_cast<int64_t>(test.x.rows), 0, {}};
  result.report.extra["lambda"] = result.lambda;
  result.report.extra["val_accuracy"] = best_acc;
  result.report.extra["chance"] = 1.0 / double(n_cls);
  result.report.extra["iterations"] = double(iterations);
  return result;
}

EvalReport analogy_accuracy(const Matrix<double>& vectors, const std::vector<AnalogyQuestion>& questions,
                            const Dictionary& dict) {
  std::vector<char> zero;
  const Matrix<double> unit = normalize_rows(vectors, zero);
  EvalReport r{"analogy_accuracy", 0.0, 0, 0, 0, {}};
  int64_t correct = 0;
  std::vector<double> target(vectors.cols);
  for (const auto& q : questions) {
    const int32_t a = lookup(dict, q.a), b = lookup(dict, q.b), c = lookup(dict, q.c), d = lookup(dict, q.d);
    if (a < 0 || b < 0 || c < 0 || d < 0 || a >= int32_t(vectors.rows) || b >= int32_t(vectors.rows) ||
        c >= int32_t(vectors.rows) || d >= int32_t(vectors.rows)) {
      ++r.n_skipped;
      continue;
    }
    if (zero[size_t(a)] || zero[size_t(b)] || zero[size_t(c)]) {
      throw Error(ErrorKind::kZeroNormColumn, "zero-norm embedding in analogy question " + q.a + " " + q.b + " " + q.c);
    }
    for (size_t e = 0; e < vectors.cols; ++e) target[e] = unit(size_t(b), e) - unit(size_t(a), e) + unit(size_t(c), e);
    int32_t best = -1;
    double best_score = 0.0;
    for (int32_t k = 0; k < int32_t(vectors.rows); ++k) {
      if (k == a || k == b || k == c || zero[size_t(k)]) continue;
      const double s = dot(target, unit.row(size_t(k)));
      if (best < 0 || s > best_score) {
        best = k;
        best_score = s;
      }
    }
    ++r.n_items;
    if (best == d) ++correct;
  }
  r.value = r.n_items ? double(correct) / double(r.n_items) : 0.0;
  return r;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * double(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;  // a constant sequence has no rank order
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EvalReport spearman_similarity(const Matrix<double>& vectors, const std::vector<SimilarityPair>& pairs,
                               const Dictionary& dict) {
  EvalReport r{"spearman_rho", 0.0, 0, 0, 0, {}};
  std::vector<double> model, human;
  for (const auto& p : pairs) {
    const int32_t a = lookup(dict, p.word1), b = lookup(dict, p.word2);
    if (a < 0 || b < 0 || a >= int32_t(vectors.rows) || b >= int32_t(vectors.rows)) {
      ++r.n_skipped;
      continue;
    }
    model.push_back(cosine(vectors.row(size_t(a)), vectors.row(size_t(b))));
    human.push_back(p.rating);
  }
  if (model.size() < 2) throw Error(ErrorKind::kTooFewPairs, "need at least 2 scorable pairs");
  r.n_items = static_cast<int64_t>(model.size());
  const auto rm = average_ranks(model);
  const auto rh = average_ranks(human);
  r.value = pearson(rm, rh);
  return r;
}

EvalReport translation_precision(const Matrix<double>& vectors, const std::vector<TranslationPair>& pairs,
                                 const Dictionary& dict, Direction direction, int64_t k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  EvalReport r{direction == Direction::kSourceToTarget ? "translation_precision_src2tgt"
                                                       : "translation_precision_tgt2src",
               0.0, k, 0, 0, {}};
  std::vector<std::pair<int32_t, int32_t>> queries;  // (query, answer)
  std::set<int32_t> candidate_set;
  for (const auto& p : pairs) {
    const int32_t s = lookup(dict, p.source), t = lookup(dict, p.target);
    if (p.source == p.target || s < 0 || t < 0 || s >= int32_t(vectors.rows) || t >= int32_t(vectors.rows) ||
        s == t) {
      ++r.n_skipped;
      continue;
    }
    if (direction == Direction::kSourceToTarget) {
      queries.emplace_back(s, t);
      candidate_set.insert(t);
    } else {
      queries.emplace_back(t, s);
      candidate_set.insert(s);
    }
  }
  if (candidate_set.empty()) throw Error(ErrorKind::kEmptyCandidates, "empty candidate set");
  const std::vector<int32_t> candidates(candidate_set.begin(), candidate_set.end());
  int64_t hits = 0;
  std::vector<double> sims(candidates.size());
  for (const auto& [query, answer] : queries) {
    for (size_t j = 0; j < candidates.size(); ++j) {
      sims[j] = cosine(vectors.row(size_t(query)), vectors.row(size_t(candidates[j])));
    }
    for (int32_t j : top_k<double>(sims, size_t(k))) hits += candidates[size_t(j)] == answer ? 1 : 0;
  }
  r.n_items = static_cast<int64_t>(queries.size());
  r.value = queries.empty() ? 0.0 : double(hits) / double(queries.size());
  r.extra["candidates"] = double(candidates.size());
  return r;
}

std::vector<std::vector<std::pair<int32_t, double>>> nearest_neighbors(const Matrix<double>& vectors, size_t n) {
  std::vector<std::vector<std::pair<int32_t, double>>> out(vectors.rows);
  const auto rows = static_cast<int64_t>(vectors.rows);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < rows; ++i) {
    std::vector<double> sims(vectors.rows);
    for (size_t j = 0; j < vectors.rows; ++j) {
      sims[j] = int64_t(j) == i ? -INFINITY : cosine(vectors.row(size_t(i)), vectors.row(j));
    }
    for (int32_t j : top_k<double>(sims, std::min(n, vectors.rows - 1))) out[size_t(i)].emplace_back(j, sims[size_t(j)]);
  }
  return out;
}

void dump_embeddings(const Matrix<double>& vectors, const Dictionary& dict, const std::string& csv_path,
                     const std::string& neighbors_path) {
  if (size_t(dict.size()) != vectors.rows) throw Error(ErrorKind::kShapeMismatch, "dictionary/embedding size mismatch");
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error(ErrorKind::kIo, "cannot write " + csv_path);
  char buf[32];
  for (size_t k = 0; k < vectors.rows; ++k) {
    csv << dict.words[k];
    for (double v : vectors.row(k)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      csv << buf;
    }
    csv << '\n';
  }
  if (!csv) throw Error(ErrorKind::kIo, "write failed: " + csv_path);

  const auto nn = nearest_neighbors(vectors, 10);
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (size_t k = 0; k < vectors.rows; ++k) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& [idx, sim] : nn[k]) list.push_back({{"word", dict.words[size_t(idx)]}, {"cosine", sim}});
    j[dict.words[k]] = list;
  }
  std::ofstream js(neighbors_path, std::ios::binary);
  if (!js) throw Error(ErrorKind::kIo, "cannot write " + neighbors_path);
  js << j.dump(1) << '\n';
}

Matrix<double> read_embeddings_csv(const std::string& path, std::vector<std::string>* words) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (words) words->push_back(cell);
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  Matrix<double> m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw Error(ErrorKind::kDimensionMismatch, "ragged embedding CSV");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

namespace {

std::vector<std::vector<std::string>> read_word_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::vector<std::vector<std::string>> lines;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line[0] == ':') continue;  // ':' starts a section header
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    if (!words.empty()) lines.push_back(std::move(words));
  }
  return lines;
}

}  // namespace

std::vector<AnalogyQuestion> read_analogy_questions(const std::string& path) {
  std::vector<AnalogyQuestion> out;
  for (auto& w : read_word_lines(path)) {
    if (w.size() != 4) throw Error(ErrorKind::kInvalidArgument, "analogy lines need 4 words");
    out.push_back({w[0], w[1], w[2], w[3]});
  }
  return out;
}

std::vector<SimilarityPair> read_similarity_pairs(const std::string& path) {
  std::vector<SimilarityPair> out;
  for (auto& w : read_word_lines(path)) {
    if (w.size() != 3) throw Error(ErrorKind::kInvalidArgument, "similarity lines need: word1 word2 rating");
    out.push_back({w[0], w[1], std::stod(w[2])});
  }
  return out;
}

std::vector<TranslationPair> read_translation_pairs(const std::string& path) {
  std::vector<TranslationPair> out;
  for (auto& w : read_word_lines(path)) {
    if (w.size() != 2) throw Error(ErrorKind::kInvalidArgument, "translation lines need: source target");
    out.push_back({w[0], w[1]});
  }
  return out;
}

template std::vector<int32_t> top_k<float>(std::span<const float>, size_t);
template std::vector<int32_t> top_k<double>(std::span<const double>, size_t);
template EvalReport precision_at_k<float>(const Matrix<float>&, const std::vector<LabelSet>&, int64_t);
template EvalReport precision_at_k<double>(const Matrix<double>&, const std::vector<LabelSet>&, int64_t);
template EvalReport precision_at_k<float>(const ModelParams<float>&, const Dataset&, int64_t);
template EvalReport precision_at_k<double>(const ModelParams<double>&, const Dataset&, int64_t);
template Matrix<float> extract_features<float>(const ModelParams<float>&, const Dataset&);
template Matrix<double> extract_features<double>(const ModelParams<double>&, const Dataset&);
template Matrix<double> word_vectors<float>(const ModelParams<float>&);
template Matrix<double> word_vectors<double>(const ModelParams<double>&);

}  // namespace weaklearn
