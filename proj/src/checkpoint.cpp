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

#include "weaklearn/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weaklearn/error.hpp"

namespace weaklearn {

namespace {

constexpr std::string_view kMagic = "WLCKPT1\n";

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");

std::string shape_string(const std::vector<int64_t>& shape) {
  std::string s;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(shape[i]);
  }
  return s;
}

std::string expect_line(std::istream& in, std::string_view key) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(std::string(key) + " ", 0) != 0) {
    throw Error(ErrorKind::kMalformedHeader, "malformed header: expected '" + std::string(key) + "'");
  }
  return line.substr(key.size() + 1);
}

std::string field(const std::string& line, const std::string& key) {
  std::istringstream ss(line);
  for (std::string tok; ss >> tok;) {
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  }
  throw Error(ErrorKind::kMalformedHeader, "malformed header: missing " + key);
}

struct Header {
  ModelConfig config;
  int32_t num_classes = 0;
  DType dtype = DType::kF32;
  CheckpointMeta meta;
  size_t n_arrays = 0;
};

Header read_header(std::istream& in) {
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kMagic) throw Error(ErrorKind::kMalformedHeader, "malformed header");
  Header h;
  const std::string cfg = expect_line(in, "config");
  const std::string input = field(cfg, "input");
  if (std::sscanf(input.c_str(), "%dx%dx%d", &h.config.in_h, &h.config.in_w, &h.config.in_c) != 3) {
    throw Error(ErrorKind::kMalformedHeader, "malformed header: input");
  }
  h.config.layers = parse_layers(field(cfg, "layers"));
  h.num_classes = std::stoi(expect_line(in, "K"));
  h.dtype = parse_dtype(expect_line(in, "dtype"));
  h.config.dtype = h.dtype;
  const std::string algo = expect_line(in, "rng");
  if (algo != Rng::kAlgorithmId) throw Error(ErrorKind::kMalformedHeader, "unknown rng algorithm: " + algo);
  h.meta.rng_state = expect_line(in, "rng_state");
  h.meta.step = std::stoll(expect_line(in, "step"));
  h.meta.learning_rate = std::stod(expect_line(in, "lr"));
  h.n_arrays = std::stoul(expect_line(in, "arrays"));
  h.config.validate();
  return h;
}

template <typename Stored, typename Real>
void read_values(std::istream& in, std::vector<Real>& out, size_t n) {
  std::vector<Stored> buf(n);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * sizeof(Stored)));
  if (!in) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: truncated parameter array");
  out.assign(buf.begin(), buf.end());
}

}  // namespace

template <typename Real>
void save_checkpoint(const std::string& path, const ModelParams<Real>& params, const CheckpointMeta& meta) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp);
    const auto& c = params.config;
    char lr[64];
    std::snprintf(lr, sizeof lr, "%.17g", meta.learning_rate);
    out << kMagic;
    out << "config input=" << c.in_h << 'x' << c.in_w << 'x' << c.in_c << " layers=" << c.layers_string()
        << " embed=" << c.embed_dim() << '\n';
    out << "K " << params.num_classes << '\n';
    out << "dtype " << (sizeof(Real) == 4 ? "f32" : "f64") << '\n';
    out << "rng " << Rng::kAlgorithmId << '\n';
    out << "rng_state " << meta.rng_state << '\n';
    out << "step " << meta.step << '\n';
    out << "lr " << lr << '\n';
    const auto arrays = params.arrays();
    out << "arrays " << arrays.size() << '\n';
    for (const auto* a : arrays) {
      out << "array " << a->name << ' ' << shape_string(a->shape) << '\n';
      out.write(reinterpret_cast<const char*>(a->values.data()),
                static_cast<std::streamsize>(a->values.size() * sizeof(Real)));
    }
    if (!out) throw Error(ErrorKind::kIo, "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

template <typename Real>
ModelParams<Real> load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  const Header h = read_header(in);
  ModelConfig cfg = h.config;
  cfg.dtype = sizeof(Real) == 4 ? DType::kF32 : DType::kF64;
  // Shapes come from a fresh init; values are overwritten below.
  ModelParams<Real> params = init_params<Real>(cfg, h.num_classes, 0);
  auto arrays = params.arrays();
  if (arrays.size() != h.n_arrays) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: array count");
  for (auto* a : arrays) {
    const std::string line = expect_line(in, "array");
    const std::string expected = a->name + ' ' + shape_string(a->shape);
    if (line != expected) {
      throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: got '" + line + "', expected '" + expected + "'");
    }
    if (h.dtype == DType::kF32)
      read_values<float>(in, a->values, a->values.size());
    else
      read_values<double>(in, a->values, a->values.size());
  }
  if (meta) *meta = h.meta;
  return params;
}

DType checkpoint_dtype(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  return read_header(in).dtype;
}

template void save_checkpoint<float>(const std::string&, const ModelParams<float>&, const CheckpointMeta&);
template void save_checkpoint<double>(const std::string&, const ModelParams<double>&, const CheckpointMeta&);
template ModelParams<float> load_checkpoint<float>(const std::string&, CheckpointMeta*);
template ModelParams<double> load_checkpoint<double>(const std::string&, CheckpointMeta*);

}  // namespace weaklearn
