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

#include "weaklearn/kernels.hpp"

namespace weaklearn {

using kernels::Exec;

template <typename Real>
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<Real> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c) {}
  Real& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  Real operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  std::span<Real> row(size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const Real> row(size_t r) const { return {data.data() + r * cols, cols}; }
};

enum class LayerKind { kConv, kPool, kDense };

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int32_t size = 0;      // conv kernel side, pool window side
  int32_t channels = 0;  // conv output channels, dense width
};

enum class DType { kF32, kF64 };
std::string dtype_name(DType d);
DType parse_dtype(const std::string& s);

/// Generic backbone: each conv / dense layer is followed by a rectifier, pool
/// layers are 2-D max pooling. The last layer must be dense; its width is E.
struct ModelConfig {
  int32_t in_h = 0, in_w = 0, in_c = 0;
  std::vector<LayerSpec> layers;
  DType dtype = DType::kF32;

  size_t input_dim() const { return size_t(in_h) * in_w * in_c; }
  int32_t embed_dim() const;
  /// Throws kInvalidArgument if shapes do not chain.
  void validate() const;
  std::string layers_string() const;
};

/// "conv:3x8,pool:2,fc:64" -> layer list.
std::vector<LayerSpec> parse_layers(const std::string& spec);

template <typename Real>
struct ParamArray {
  std::string name;
  std::vector<int64_t> shape;
  std::vector<Real> values;
};

/// Parameters of one backbone layer; pool layers have empty arrays.
template <typename Real>
struct LayerParams {
  ParamArray<Real> weight;
  ParamArray<Real> bias;
};

template <typename Real>
struct ModelParams {
  ModelConfig config;
  int32_t num_classes = 0;
  std::vector<LayerParams<Real>> layers;  // theta
  ParamArray<Real> output;                // W, stored [K][E]

  size_t embed_dim() const { return size_t(config.embed_dim()); }
  std::span<Real> column(int32_t k) { return {output.values.data() + size_t(k) * embed_dim(), embed_dim()}; }
  std::span<const Real> column(int32_t k) const {
    return {output.values.data() + size_t(k) * embed_dim(), embed_dim()};
  }
  /// Pointers to every parameter array in declaration order.
  std::vector<ParamArray<Real>*> arrays();
  std::vector<const ParamArray<Real>*> arrays() const;
  size_t parameter_count() const;
};

template <typename Real>
struct ForwardTrace {
  size_t batch = 0;
  std::vector<std::vector<Real>> inputs;       // input to layer l
  std::vector<std::vector<Real>> pre;          // pre-activation of conv / dense layers
  std::vector<std::vector<int32_t>> argmax;    // pool layers
};

template <typename Real>
struct ForwardResult {
  Matrix<Real> embeddings;  // batch x E
  ForwardTrace<Real> trace;
};

/// Weights ~ U(-a, a), a = sqrt(6 / (fan_in + fan_out)); biases zero.
template <typename Real>
ModelParams<Real> init_params(const ModelConfig& cfg, int32_t num_classes, uint64_t seed);

template <typename Real>
ForwardResult<Real> forward(const ModelParams<Real>& params, std::span<const Real> images, size_t batch,
                            Exec exec = Exec::kParallel);

/// logits(i, j) = <w_{classes[j]}, e_i>.
template <typename Real>
Matrix<Real> score_subset(const ModelParams<Real>& params, const Matrix<Real>& embeddings,
                          std::span<const int32_t> classes, Exec exec = Exec::kParallel);

template <typename Real>
Matrix<Real> score_all(const ModelParams<Real>& params, const Matrix<Real>& embeddings, Exec exec = Exec::kParallel);

template <typename Real>
struct OutputGrad {
  Matrix<Real> columns;       // |C| x E, gradient of w_c for c in classes
  Matrix<Real> d_embeddings;  // batch x E
};

template <typename Real>
OutputGrad<Real> output_backward(const ModelParams<Real>& params, const Matrix<Real>& embeddings,
                                 std::span<const int32_t> classes, const Matrix<Real>& d_logits,
                                 Exec exec = Exec::kParallel);

/// Gradients of theta given d loss / d embeddings. Same layout as params.layers.
template <typename Real>
std::vector<LayerParams<Real>> backward(const ModelParams<Real>& params, const ForwardTrace<Real>& trace,
                                        const Matrix<Real>& d_embeddings, Exec exec = Exec::kParallel);

/// Full gradient: theta plus the W columns of `classes` only.
template <typename Real>
struct Gradients {
  std::vector<LayerParams<Real>> layers;
  std::vector<int32_t> classes;
  Matrix<Real> columns;
};

template <typename Real>
std::vector<Real> to_real(std::span<const float> v);

}  // namespace weaklearn
