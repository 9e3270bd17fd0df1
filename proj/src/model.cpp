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

#include "weaklearn/model.hpp"

#include <cmath>
#include <sstream>

#include "weaklearn/error.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

#define WL_KERNEL(name, ...)                                        \
  do {                                                              \
    if (exec == Exec::kSerial)                                      \
      kernels::serial::name<Real>(__VA_ARGS__);                     \
    else                                                            \
      kernels::omp::name<Real>(__VA_ARGS__);                        \
  } while (0)

namespace {

struct Shape3 {
  int32_t h, w, c;
  size_t size() const { return size_t(h) * w * c; }
};

// Input shape of every layer plus the final output shape.
std::vector<Shape3> layer_shapes(const ModelConfig& cfg) {
  std::vector<Shape3> shapes{{cfg.in_h, cfg.in_w, cfg.in_c}};
  for (const auto& l : cfg.layers) {
    const Shape3 in = shapes.back();
    switch (l.kind) {
      case LayerKind::kConv:
        shapes.push_back({in.h - l.size + 1, in.w - l.size + 1, l.channels});
        break;
      case LayerKind::kPool:
        shapes.push_back({l.size > 0 ? in.h / l.size : 0, l.size > 0 ? in.w / l.size : 0, in.c});
        break;
      case LayerKind::kDense:
        shapes.push_back({1, 1, l.channels});
        break;
    }
  }
  return shapes;
}

kernels::ConvShape conv_shape(const Shape3& in, const LayerSpec& l) {
  return {in.h, in.w, in.c, l.size, l.channels};
}

kernels::PoolShape pool_shape(const Shape3& in, const LayerSpec& l) { return {in.h, in.w, in.c, l.size}; }

}  // namespace

std::string dtype_name(DType d) { return d == DType::kF32 ? "f32" : "f64"; }

DType parse_dtype(const std::string& s) {
  if (s == "f32" || s == "float32") return DType::kF32;
  if (s == "f64" || s == "float64") return DType::kF64;
  throw Error(ErrorKind::kInvalidArgument, "unknown dtype: " + s);
}

int32_t ModelConfig::embed_dim() const {
  if (layers.empty() || layers.back().kind != LayerKind::kDense) return 0;
  return layers.back().channels;
}

void ModelConfig::validate() const {
  if (in_h <= 0 || in_w <= 0 || in_c <= 0) throw Error(ErrorKind::kInvalidArgument, "input dims must be positive");
  if (layers.empty()) throw Error(ErrorKind::kInvalidArgument, "model needs at least one layer");
  if (layers.back().kind != LayerKind::kDense) {
    throw Error(ErrorKind::kInvalidArgument, "last layer must be fully connected (its width is E)");
  }
  const auto shapes = layer_shapes(*this);
  for (size_t l = 0; l < layers.size(); ++l) {
    const auto& spec = layers[l];
    if (spec.kind != LayerKind::kPool && spec.channels <= 0) {
      throw Error(ErrorKind::kInvalidArgument, "layer " + std::to_string(l) + ": width must be positive");
    }
    if (spec.kind != LayerKind::kDense && spec.size <= 0) {
      throw Error(ErrorKind::kInvalidArgument, "layer " + std::to_string(l) + ": size must be positive");
    }
    const Shape3& out = shapes[l + 1];
    if (out.h <= 0 || out.w <= 0 || out.c <= 0) {
      throw Error(ErrorKind::kInvalidArgument, "layer " + std::to_string(l) + ": output shape is empty");
    }
  }
}

std::string ModelConfig::layers_string() const {
  std::ostringstream ss;
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i) ss << ',';
    const auto& l = layers[i];
    switch (l.kind) {
      case LayerKind::kConv: ss << "conv:" << l.size << 'x' << l.channels; break;
      case LayerKind::kPool: ss << "pool:" << l.size; break;
      case LayerKind::kDense: ss << "fc:" << l.channels; break;
    }
  }
  return ss.str();
}

std::vector<LayerSpec> parse_layers(const std::string& spec) {
  std::vector<LayerSpec> layers;
  std::istringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "bad layer spec: " + item);
    const std::string kind = item.substr(0, colon);
    const std::string arg = item.substr(colon + 1);
    LayerSpec l;
    try {
      if (kind == "fc") {
        l.kind = LayerKind::kDense;
        l.channels = std::stoi(arg);
      } else if (kind == "pool") {
        l.kind = LayerKind::kPool;
        l.size = std::stoi(arg);
      } else if (kind == "conv") {
        const auto x = arg.find('x');
        if (x == std::string::npos) throw Error(ErrorKind::kInvalidArgument, "conv spec is conv:<k>x<channels>");
        l.kind = LayerKind::kConv;
        l.size = std::stoi(arg.substr(0, x));
        l.channels = std::stoi(arg.substr(x + 1));
      } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown layer kind: " + kind);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "bad layer spec: " + item);
    }
    layers.push_back(l);
  }
  if (layers.empty()) throw Error(ErrorKind::kInvalidArgument, "empty layer spec");
  return layers;
}

template <typename Real>
std::vector<ParamArray<Real>*> ModelParams<Real>::arrays() {
  std::vector<ParamArray<Real>*> out;
  for (auto& l : layers) {
    if (l.weight.values.empty()) continue;
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  out.push_back(&output);
  return out;
}

template <typename Real>
std::vector<const ParamArray<Real>*> ModelParams<Real>::arrays() const {
  std::vector<const ParamArray<Real>*> out;
  for (const auto& l : layers) {
    if (l.weight.values.empty()) continue;
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  out.push_back(&output);
  return out;
}

template <typename Real>
size_t ModelParams<Real>::parameter_count() const {
  size_t n = 0;
  for (const auto* a : arrays()) n += a->values.size();
  return n;
}

template <typename Real>
ModelParams<Real> init_params(const ModelConfig& cfg, int32_t num_classes, uint64_t seed) {
  cfg.validate();
  if (num_classes < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one class");
  const Rng root(seed);
  uint64_t stream = 0;
  auto fill_uniform = [&](ParamArray<Real>& a, double fan_in, double fan_out) {
    Rng rng = root.split(stream++);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& v : a.values) v = static_cast<Real>(rng.uniform(-bound, bound));
  };

  ModelParams<Real> p;
  p.config = cfg;
  p.num_classes = num_classes;
  const auto shapes = layer_shapes(cfg);
  for (size_t l = 0; l < cfg.layers.size(); ++l) {
    const auto& spec = cfg.layers[l];
    const Shape3& in = shapes[l];
    LayerParams<Real> lp;
    const std::string prefix = "layer" + std::to_string(l);
    if (spec.kind == LayerKind::kConv) {
      lp.weight = {prefix + ".weight", {spec.size, spec.size, in.c, spec.channels}, {}};
      lp.weight.values.resize(size_t(spec.size) * spec.size * in.c * spec.channels);
      lp.bias = {prefix + ".bias", {spec.channels}, std::vector<Real>(size_t(spec.channels), Real(0))};
      fill_uniform(lp.weight, double(spec.size) * spec.size * in.c, double(spec.size) * spec.size * spec.channels);
    } else if (spec.kind == LayerKind::kDense) {
      lp.weight = {prefix + ".weight", {int64_t(in.size()), spec.channels}, {}};
      lp.weight.values.resize(in.size() * size_t(spec.channels));
      lp.bias = {prefix + ".bias", {spec.channels}, std::vector<Real>(size_t(spec.channels), Real(0))};
      fill_uniform(lp.weight, double(in.size()), double(spec.channels));
    }
    p.layers.push_back(std::move(lp));
  }
  const int32_t E = cfg.embed_dim();
  p.output = {"output.weight", {num_classes, E}, std::vector<Real>(size_t(num_classes) * E)};
  fill_uniform(p.output, double(E), double(num_classes));
  return p;
}

template <typename Real>
ForwardResult<Real> forward(const ModelParams<Real>& params, std::span<const Real> images, size_t batch, Exec exec) {
  const ModelConfig& cfg = params.config;
  if (images.size() != batch * cfg.input_dim()) {
    throw Error(ErrorKind::kShapeMismatch, "forward: expected " + std::to_string(batch * cfg.input_dim()) +
                                               " input values, got " + std::to_string(images.size()));
  }
  const auto shapes = layer_shapes(cfg);
  ForwardResult<Real> result;
  ForwardTrace<Real>& trace = result.trace;
  trace.batch = batch;
  trace.inputs.resize(cfg.layers.size());
  trace.pre.resize(cfg.layers.size());
  trace.argmax.resize(cfg.layers.size());

  std::vector<Real> cur(images.begin(), images.end());
  for (size_t l = 0; l < cfg.layers.size(); ++l) {
    const auto& spec = cfg.layers[l];
    const Shape3& in = shapes[l];
    const size_t out_size = shapes[l + 1].size();
    std::vector<Real> pre(batch * out_size);
    std::vector<Real> act(batch * out_size);
    const auto& lp = params.layers[l];
    switch (spec.kind) {
      case LayerKind::kConv:
        WL_KERNEL(conv_forward, cur, lp.weight.values, lp.bias.values, pre, batch, conv_shape(in, spec));
        WL_KERNEL(relu_forward, pre, act);
        trace.pre[l] = std::move(pre);
        break;
      case LayerKind::kDense:
        WL_KERNEL(dense_forward, cur, lp.weight.values, lp.bias.values, pre, batch, in.size(), out_size);
        WL_KERNEL(relu_forward, pre, act);
        trace.pre[l] = std::move(pre);
        break;
      case LayerKind::kPool:
        trace.argmax[l].resize(batch * out_size);
        WL_KERNEL(maxpool_forward, cur, act, trace.argmax[l], batch, pool_shape(in, spec));
        break;
    }
    trace.inputs[l] = std::move(cur);
    cur = std::move(act);
  }
  result.embeddings.rows = batch;
  result.embeddings.cols = params.embed_dim();
  result.embeddings.data = std::move(cur);
  return result;
}

template <typename Real>
Matrix<Real> score_subset(const ModelParams<Real>& params, const Matrix<Real>& embeddings,
                          std::span<const int32_t> classes, Exec exec) {
  if (embeddings.cols != params.embed_dim()) throw Error(ErrorKind::kShapeMismatch, "embedding width mismatch");
  for (int32_t c : classes) {
    if (c < 0 || c >= params.num_classes) {
      throw Error(ErrorKind::kOutOfRange, "class " + std::to_string(c) + " out of range");
    }
  }
  Matrix<Real> logits(embeddings.rows, classes.size());
  WL_KERNEL(score_columns, embeddings.data, params.output.values, classes, logits.data, embeddings.rows,
            embeddings.cols);
  return logits;
}

template <typename Real>
Matrix<Real> score_all(const ModelParams<Real>& params, const Matrix<Real>& embeddings, Exec exec) {
  std::vector<int32_t> all(size_t(params.num_classes));
  for (int32_t k = 0; k < params.num_classes; ++k) all[size_t(k)] = k;
  return score_subset(params, embeddings, all, exec);
}

template <typename Real>
OutputGrad<Real> output_backward(const ModelParams<Real>& params, const Matrix<Real>& embeddings,
                                 std::span<const int32_t> classes, const Matrix<Real>& d_logits, Exec exec) {
  if (d_logits.rows != embeddings.rows || d_logits.cols != classes.size()) {
    throw Error(ErrorKind::kShapeMismatch, "output_backward: d_logits shape mismatch");
  }
  for (int32_t c : classes) {
    if (c < 0 || c >= params.num_classes) throw Error(ErrorKind::kOutOfRange, "class out of range");
  }
  OutputGrad<Real> g{Matrix<Real>(classes.size(), embeddings.cols), Matrix<Real>(embeddings.rows, embeddings.cols)};
  WL_KERNEL(column_gradients, embeddings.data, d_logits.data, g.columns.data, embeddings.rows, classes.size(),
            embeddings.cols);
  WL_KERNEL(embedding_gradient, params.output.values, classes, d_logits.data, g.d_embeddings.data, embeddings.rows,
            embeddings.cols);
  return g;
}

template <typename Real>
std::vector<LayerParams<Real>> backward(const ModelParams<Real>& params, const ForwardTrace<Real>& trace,
                                        const Matrix<Real>& d_embeddings, Exec exec) {
  const ModelConfig& cfg = params.config;
  const size_t batch = trace.batch;
  if (d_embeddings.rows != batch || d_embeddings.cols != params.embed_dim() ||
      trace.inputs.size() != cfg.layers.size()) {
    throw Error(ErrorKind::kShapeMismatch, "backward: trace does not match gradient batch");
  }
  const auto shapes = layer_shapes(cfg);
  std::vector<LayerParams<Real>> grads(cfg.layers.size());
  std::vector<Real> g = d_embeddings.data;
  for (size_t li = cfg.layers.size(); li-- > 0;) {
    const auto& spec = cfg.layers[li];
    const Shape3& in = shapes[li];
    const size_t out_size = shapes[li + 1].size();
    const auto& lp = params.layers[li];
    auto& gp = grads[li];
    std::vector<Real> dx;
    if (spec.kind != LayerKind::kPool) {
      gp.weight = {lp.weight.name, lp.weight.shape, std::vector<Real>(lp.weight.values.size())};
      gp.bias = {lp.bias.name, lp.bias.shape, std::vector<Real>(lp.bias.values.size())};
      WL_KERNEL(relu_backward, trace.pre[li], g);
    }
    if (li > 0) dx.resize(batch * in.size());
    switch (spec.kind) {
      case LayerKind::kConv:
        WL_KERNEL(conv_backward_params, trace.inputs[li], g, gp.weight.values, gp.bias.values, batch,
                  conv_shape(in, spec));
        if (li > 0) WL_KERNEL(conv_backward_input, lp.weight.values, g, dx, batch, conv_shape(in, spec));
        break;
      case LayerKind::kDense:
        WL_KERNEL(dense_backward_params, trace.inputs[li], g, gp.weight.values, gp.bias.values, batch, in.size(),
                  out_size);
        if (li > 0) WL_KERNEL(dense_backward_input, lp.weight.values, g, dx, batch, in.size(), out_size);
        break;
      case LayerKind::kPool:
        if (li > 0) WL_KERNEL(maxpool_backward, g, trace.argmax[li], dx, batch, pool_shape(in, spec));
        break;
    }
    g = std::move(dx);
  }
  return grads;
}

template <typename Real>
std::vector<Real> to_real(std::span<const float> v) {
  return std::vector<Real>(v.begin(), v.end());
}

#define WL_MODEL_INSTANTIATE(Real)                                                                                \
  template struct ModelParams<Real>;                                                                              \
  template ModelParams<Real> init_params<Real>(const ModelConfig&, int32_t, uint64_t);                            \
  template ForwardResult<Real> forward<Real>(const ModelParams<Real>&, std::span<const Real>, size_t, Exec);      \
  template Matrix<Real> score_subset<Real>(const ModelParams<Real>&, const Matrix<Real>&,                         \
                                           std::span<const int32_t>, Exec);                                       \
  template Matrix<Real> score_all<Real>(const ModelParams<Real>&, const Matrix<Real>&, Exec);                     \
  template OutputGrad<Real> output_backward<Real>(const ModelParams<Real>&, const Matrix<Real>&,                  \
                                                  std::span<const int32_t>, const Matrix<Real>&, Exec);           \
  template std::vector<LayerParams<Real>> backward<Real>(const ModelParams<Real>&, const ForwardTrace<Real>&,     \
                                                         const Matrix<Real>&, Exec);                              \
  template std::vector<Real> to_real<Real>(std::span<const float>);

WL_MODEL_INSTANTIATE(float)
WL_MODEL_INSTANTIATE(double)

}  // namespace weaklearn
