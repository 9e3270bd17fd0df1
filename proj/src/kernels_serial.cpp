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

#include <algorithm>

#include "kernel_instantiations.hpp"
#include "weaklearn/kernels.hpp"

namespace weaklearn::kernels::serial {

template <typename Real>
void dense_forward(std::span<const Real> x, std::span<const Real> w, std::span<const Real> bias, std::span<Real> out,
                   size_t batch, size_t n_in, size_t n_out) {
  for (size_t b = 0; b < batch; ++b) {
    Real* o = out.data() + b * n_out;
    for (size_t j = 0; j < n_out; ++j) o[j] = bias[j];
    for (size_t i = 0; i < n_in; ++i) {
      const Real xi = x[b * n_in + i];
      for (size_t j = 0; j < n_out; ++j) o[j] += xi * w[i * n_out + j];
    }
  }
}

template <typename Real>
void dense_backward_params(std::span<const Real> x, std::span<const Real> dy, std::span<Real> dw,
                           std::span<Real> dbias, size_t batch, size_t n_in, size_t n_out) {
  std::fill(dw.begin(), dw.end(), Real(0));
  std::fill(dbias.begin(), dbias.end(), Real(0));
  for (size_t b = 0; b < batch; ++b) {
    for (size_t i = 0; i < n_in; ++i) {
      const Real xi = x[b * n_in + i];
      for (size_t j = 0; j < n_out; ++j) dw[i * n_out + j] += xi * dy[b * n_out + j];
    }
    for (size_t j = 0; j < n_out; ++j) dbias[j] += dy[b * n_out + j];
  }
}

template <typename Real>
void dense_backward_input(std::span<const Real> w, std::span<const Real> dy, std::span<Real> dx, size_t batch,
                          size_t n_in, size_t n_out) {
  for (size_t b = 0; b < batch; ++b) {
    for (size_t i = 0; i < n_in; ++i) {
      Real acc = 0;
      for (size_t j = 0; j < n_out; ++j) acc += w[i * n_out + j] * dy[b * n_out + j];
      dx[b * n_in + i] = acc;
    }
  }
}

template <typename Real>
void conv_forward(std::span<const Real> x, std::span<const Real> w, std::span<const Real> bias, std::span<Real> out,
                  size_t batch, const ConvShape& s) {
  const int32_t oh = s.out_h(), ow = s.out_w(), f_n = s.out_c;
  for (size_t b = 0; b < batch; ++b) {
    const Real* xb = x.data() + b * s.in_size();
    Real* ob = out.data() + b * s.out_size();
    for (int32_t oy = 0; oy < oh; ++oy) {
      for (int32_t ox = 0; ox < ow; ++ox) {
        Real* o = ob + (size_t(oy) * ow + ox) * f_n;
        for (int32_t f = 0; f < f_n; ++f) o[f] = bias[size_t(f)];
        for (int32_t ky = 0; ky < s.ksize; ++ky) {
          for (int32_t kx = 0; kx < s.ksize; ++kx) {
            for (int32_t c = 0; c < s.in_c; ++c) {
              const Real xv = xb[(size_t(oy + ky) * s.in_w + (ox + kx)) * s.in_c + c];
              const Real* wr = w.data() + ((size_t(ky) * s.ksize + kx) * s.in_c + c) * f_n;
              for (int32_t f = 0; f < f_n; ++f) o[f] += xv * wr[f];
            }
          }
        }
      }
    }
  }
}

template <typename Real>
void conv_backward_params(std::span<const Real> x, std::span<const Real> dy, std::span<Real> dw,
                          std::span<Real> dbias, size_t batch, const ConvShape& s) {
  std::fill(dw.begin(), dw.end(), Real(0));
  std::fill(dbias.begin(), dbias.end(), Real(0));
  const int32_t oh = s.out_h(), ow = s.out_w(), f_n = s.out_c;
  for (size_t b = 0; b < batch; ++b) {
    const Real* xb = x.data() + b * s.in_size();
    const Real* gb = dy.data() + b * s.out_size();
    for (int32_t oy = 0; oy < oh; ++oy) {
      for (int32_t ox = 0; ox < ow; ++ox) {
        const Real* g = gb + (size_t(oy) * ow + ox) * f_n;
        for (int32_t ky = 0; ky < s.ksize; ++ky) {
          for (int32_t kx = 0; kx < s.ksize; ++kx) {
            for (int32_t c = 0; c < s.in_c; ++c) {
              const Real xv = xb[(size_t(oy + ky) * s.in_w + (ox + kx)) * s.in_c + c];
              Real* wr = dw.data() + ((size_t(ky) * s.ksize + kx) * s.in_c + c) * f_n;
              for (int32_t f = 0; f < f_n; ++f) wr[f] += xv * g[f];
            }
          }
        }
        for (int32_t f = 0; f < f_n; ++f) dbias[size_t(f)] += g[f];
      }
    }
  }
}

template <typename Real>
void conv_backward_input(std::span<const Real> w, std::span<const Real> dy, std::span<Real> dx, size_t batch,
                         const ConvShape& s) {
  std::fill(dx.begin(), dx.end(), Real(0));
  const int32_t oh = s.out_h(), ow = s.out_w(), f_n = s.out_c;
  for (size_t b = 0; b < batch; ++b) {
    Real* xb = dx.data() + b * s.in_size();
    const Real* gb = dy.data() + b * s.out_size();
    for (int32_t oy = 0; oy < oh; ++oy) {
      for (int32_t ox = 0; ox < ow; ++ox) {
        const Real* g = gb + (size_t(oy) * ow + ox) * f_n;
        for (int32_t ky = 0; ky < s.ksize; ++ky) {
          for (int32_t kx = 0; kx < s.ksize; ++kx) {
            for (int32_t c = 0; c < s.in_c; ++c) {
              const Real* wr = w.data() + ((size_t(ky) * s.ksize + kx) * s.in_c + c) * f_n;
              Real acc = 0;
              for (int32_t f = 0; f < f_n; ++f) acc += wr[f] * g[f];
              xb[(size_t(oy + ky) * s.in_w + (ox + kx)) * s.in_c + c] += acc;
            }
          }
        }
      }
    }
  }
}

template <typename Real>
void maxpool_forward(std::span<const Real> x, std::span<Real> out, std::span<int32_t> argmax, size_t batch,
                     const PoolShape& s) {
  const int32_t oh = s.out_h(), ow = s.out_w();
  for (size_t b = 0; b < batch; ++b) {
    const Real* xb = x.data() + b * s.in_size();
    for (int32_t oy = 0; oy < oh; ++oy) {
      for (int32_t ox = 0; ox < ow; ++ox) {
        for (int32_t c = 0; c < s.channels; ++c) {
          int32_t best = -1;
          Real best_v = 0;
          for (int32_t py = 0; py < s.size; ++py) {
            for (int32_t px = 0; px < s.size; ++px) {
              const int32_t idx = ((oy * s.size + py) * s.in_w + (ox * s.size + px)) * s.channels + c;
              if (best < 0 || xb[idx] > best_v) {
                best = idx;
                best_v = xb[idx];
              }
            }
          }
          const size_t o = b * s.out_size() + (size_t(oy) * ow + ox) * s.channels + c;
          out[o] = best_v;
          argmax[o] = best;
        }
      }
    }
  }
}

template <typename Real>
void maxpool_backward(std::span<const Real> dy, std::span<const int32_t> argmax, std::span<Real> dx, size_t batch,
                      const PoolShape& s) {
  std::fill(dx.begin(), dx.end(), Real(0));
  for (size_t b = 0; b < batch; ++b) {
    for (size_t o = 0; o < s.out_size(); ++o) {
      const size_t i = b * s.out_size() + o;
      dx[b * s.in_size() + size_t(argmax[i])] += dy[i];
    }
  }
}

template <typename Real>
void relu_forward(std::span<const Real> pre, std::span<Real> out) {
  for (size_t i = 0; i < pre.size(); ++i) out[i] = pre[i] > Real(0) ? pre[i] : Real(0);
}

template <typename Real>
void relu_backward(std::span<const Real> pre, std::span<Real> grad) {
  for (size_t i = 0; i < pre.size(); ++i)
    if (!(pre[i] > Real(0))) grad[i] = Real(0);
}

template <typename Real>
void score_columns(std::span<const Real> emb, std::span<const Real> out_w, std::span<const int32_t> classes,
                   std::span<Real> logits, size_t batch, size_t embed) {
  const size_t m = classes.size();
  for (size_t b = 0; b < batch; ++b) {
    for (size_t j = 0; j < m; ++j) {
      const Real* col = out_w.data() + size_t(classes[j]) * embed;
      Real acc = 0;
      for (size_t e = 0; e < embed; ++e) acc += col[e] * emb[b * embed + e];
      logits[b * m + j] = acc;
    }
  }
}

template <typename Real>
void column_gradients(std::span<const Real> emb, std::span<const Real> dlogits, std::span<Real> dcols, size_t batch,
                      size_t n_cols, size_t embed) {
  std::fill(dcols.begin(), dcols.end(), Real(0));
  for (size_t b = 0; b < batch; ++b) {
    for (size_t j = 0; j < n_cols; ++j) {
      const Real g = dlogits[b * n_cols + j];
      for (size_t e = 0; e < embed; ++e) dcols[j * embed + e] += g * emb[b * embed + e];
    }
  }
}

template <typename Real>
void embedding_gradient(std::span<const Real> out_w, std::span<const int32_t> classes, std::span<const Real> dlogits,
                        std::span<Real> demb, size_t batch, size_t embed) {
  const size_t m = classes.size();
  std::fill(demb.begin(), demb.end(), Real(0));
  for (size_t b = 0; b < batch; ++b) {
    for (size_t j = 0; j < m; ++j) {
      const Real g = dlogits[b * m + j];
      const Real* col = out_w.data() + size_t(classes[j]) * embed;
      for (size_t e = 0; e < embed; ++e) demb[b * embed + e] += g * col[e];
    }
  }
}

WEAKLEARN_INSTANTIATE(float)
WEAKLEARN_INSTANTIATE(double)

}  // namespace weaklearn::kernels::serial
