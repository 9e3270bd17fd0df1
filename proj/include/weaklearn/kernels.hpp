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

// Batched dense kernels behind the model. Two implementations share one
// signature set: `serial` is the straight-line reference kept for testing and
// benchmarking; `omp` parallelizes over independent outputs (batch rows,
// weight rows, class columns). Every output element is accumulated in the
// same order by both, so they agree bitwise and the parallel result does not
// depend on the thread count.
//
// Layouts (all row-major, batch-major):
//   dense weights   [n_in][n_out]
//   conv weights    [k][k][c_in][c_out], images (H, W, C)
//   output matrix   [K][E] (column w_k of the E x K matrix is contiguous)

#include <cstddef>
#include <cstdint>
#include <span>

namespace weaklearn::kernels {

struct ConvShape {
  int32_t in_h = 0, in_w = 0, in_c = 0;
  int32_t ksize = 0, out_c = 0;
  int32_t out_h() const { return in_h - ksize + 1; }
  int32_t out_w() const { return in_w - ksize + 1; }
  size_t in_size() const { return size_t(in_h) * in_w * in_c; }
  size_t out_size() const { return size_t(out_h()) * out_w() * out_c; }
};

struct PoolShape {
  int32_t in_h = 0, in_w = 0, channels = 0, size = 2;
  int32_t out_h() const { return in_h / size; }
  int32_t out_w() const { return in_w / size; }
  size_t in_size() const { return size_t(in_h) * in_w * channels; }
  size_t out_size() const { return size_t(out_h()) * out_w() * channels; }
};

enum class Exec { kSerial, kParallel };

#define WEAKLEARN_KERNEL_DECLS                                                                                    \
  template <typename Real>                                                                                        \
  void dense_forward(std::span<const Real> x, std::span<const Real> w, std::span<const Real> bias,             \
                     std::span<Real> out, size_t batch, size_t n_in, size_t n_out);                               \
  template <typename Real>                                                                                        \
  void dense_backward_params(std::span<const Real> x, std::span<const Real> dy, std::span<Real> dw,            \
                             std::span<Real> dbias, size_t batch, size_t n_in, size_t n_out);                     \
  template <typename Real>                                                                                        \
  void dense_backward_input(std::span<const Real> w, std::span<const Real> dy, std::span<Real> dx, size_t batch, \
                            size_t n_in, size_t n_out);                                                           \
  template <typename Real>                                                                                        \
  void conv_forward(std::span<const Real> x, std::span<const Real> w, std::span<const Real> bias,              \
                    std::span<Real> out, size_t batch, const ConvShape& s);                                       \
  template <typename Real>                                                                                        \
  void conv_backward_params(std::span<const Real> x, std::span<const Real> dy, std::span<Real> dw,             \
                            std::span<Real> dbias, size_t batch, const ConvShape& s);                             \
  template <typename Real>                                                                                        \
  void conv_backward_input(std::span<const Real> w, std::span<const Real> dy, std::span<Real> dx, size_t batch, \
                           const ConvShape& s);                                                                   \
  template <typename Real>                                                                                        \
  void maxpool_forward(std::span<const Real> x, std::span<Real> out, std::span<int32_t> argmax, size_t batch,  \
                       const PoolShape& s);                                                                       \
  template <typename Real>                                                                                        \
  void maxpool_backward(std::span<const Real> dy, std::span<const int32_t> argmax, std::span<Real> dx,         \
                        size_t batch, const PoolShape& s);                                                        \
  template <typename Real>                                                                                        \
  void relu_forward(std::span<const Real> pre, std::span<Real> out);                                             \
  template <typename Real>                                                                                        \
  void relu_backward(std::span<const Real> pre, std::span<Real> grad);                                           \
  template <typename Real>                                                                                        \
  void score_columns(std::span<const Real> emb, std::span<const Real> out_w, std::span<const int32_t> classes,  \
                     std::span<Real> logits, size_t batch, size_t embed);                                         \
  template <typename Real>                                                                                        \
  void column_gradients(std::span<const Real> emb, std::span<const Real> dlogits, std::span<Real> dcols,       \
                        size_t batch, size_t n_cols, size_t embed);                                               \
  template <typename Real>                                                                                        \
  void embedding_gradient(std::span<const Real> out_w, std::span<const int32_t> classes,                        \
                          std::span<const Real> dlogits, std::span<Real> demb, size_t batch, size_t embed);

namespace serial {
WEAKLEARN_KERNEL_DECLS
}  // namespace serial

namespace omp {
WEAKLEARN_KERNEL_DECLS
}  // namespace omp

#undef WEAKLEARN_KERNEL_DECLS

/// Threads used by the omp kernels (0 = OpenMP default).
void set_workers(int workers);
int workers();

}  // namespace weaklearn::kernels
