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

// Explicit instantiations shared by the serial and omp kernel sets.
#define WEAKLEARN_INSTANTIATE(Real)                                                                             \
  template void dense_forward<Real>(std::span<const Real>, std::span<const Real>, std::span<const Real>,       \
                                    std::span<Real>, size_t, size_t, size_t);                                   \
  template void dense_backward_params<Real>(std::span<const Real>, std::span<const Real>, std::span<Real>,     \
                                            std::span<Real>, size_t, size_t, size_t);                           \
  template void dense_backward_input<Real>(std::span<const Real>, std::span<const Real>, std::span<Real>,      \
                                           size_t, size_t, size_t);                                             \
  template void conv_forward<Real>(std::span<const Real>, std::span<const Real>, std::span<const Real>,        \
                                   std::span<Real>, size_t, const ConvShape&);                                  \
  template void conv_backward_params<Real>(std::span<const Real>, std::span<const Real>, std::span<Real>,      \
                                           std::span<Real>, size_t, const ConvShape&);                          \
  template void conv_backward_input<Real>(std::span<const Real>, std::span<const Real>, std::span<Real>, size_t, \
                                          const ConvShape&);                                                    \
  template void maxpool_forward<Real>(std::span<const Real>, std::span<Real>, std::span<int32_t>, size_t,      \
                                      const PoolShape&);                                                        \
  template void maxpool_backward<Real>(std::span<const Real>, std::span<const int32_t>, std::span<Real>, size_t, \
                                       const PoolShape&);                                                       \
  template void relu_forward<Real>(std::span<const Real>, std::span<Real>);                                     \
  template void relu_backward<Real>(std::span<const Real>, std::span<Real>);                                    \
  template void score_columns<Real>(std::span<const Real>, std::span<const Real>, std::span<const int32_t>,    \
                                    std::span<Real>, size_t, size_t);                                           \
  template void column_gradients<Real>(std::span<const Real>, std::span<const Real>, std::span<Real>, size_t,  \
                                       size_t, size_t);                                                         \
  template void embedding_gradient<Real>(std::span<const Real>, std::span<const int32_t>, std::span<const Real>, \
                                         std::span<Real>, size_t, size_t);

