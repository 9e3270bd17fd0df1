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
#include <string>
#include <vector>

#include "weaklearn/textpipe.hpp"

namespace weaklearn {

/// Row-major (H, W, C) image.
struct ImageTensor {
  int32_t height = 0;
  int32_t width = 0;
  int32_t channels = 0;
  std::vector<float> pixels;

  ImageTensor() = default;
  ImageTensor(int32_t h, int32_t w, int32_t c) : height(h), width(w), channels(c), pixels(size_t(h) * w * c) {}

  size_t size() const { return pixels.size(); }
  float& at(int32_t y, int32_t x, int32_t ch) { return pixels[(size_t(y) * width + x) * channels + ch]; }
  float at(int32_t y, int32_t x, int32_t ch) const { return pixels[(size_t(y) * width + x) * channels + ch]; }
};

struct Example {
  std::string id;
  ImageTensor image;
  LabelSet labels;
};

struct Dataset {
  int32_t height = 0;
  int32_t width = 0;
  int32_t channels = 0;
  std::vector<Example> examples;

  size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  size_t input_dim() const { return size_t(height) * width * channels; }
};

inline constexpr float kDegenerateStd = 1e-8f;

/// Subtract the per-image mean and divide by the per-image (global, population)
/// standard deviation; constant images are divided by 1 instead.
void standardize(ImageTensor& image);

/// Bilinear rescale of the short side to round(crop * 256 / 224), center crop
/// to crop x crop, then standardize.
ImageTensor preprocess_image(const ImageTensor& raw, int32_t crop);

struct SynthConfig {
  int32_t K = 20;
  int32_t image_size = 16;
  int32_t channels = 1;
  double zipf_exponent = 1.0;
  int32_t words_per_image = 2;
  double noise_sigma = 0.5;
  uint64_t seed = 7;
  int64_t num_examples = 10000;
  // Example ordinals are [first_example, first_example + num_examples). Each
  // ordinal has its own rng stream, so disjoint ranges of the same seed share
  // prototypes but never examples.
  int64_t first_example = 0;
  int32_t stop_count = 5;
};

struct SynthData {
  Dataset dataset;
  Dictionary dict;
  std::vector<ImageTensor> prototypes;  // indexed by dictionary index
  std::vector<std::string> captions;    // parallel to dataset.examples
};

/// Name of synthetic class `k`: pronounceable, letters only.
std::string synth_class_word(int32_t k);

/// Normalized Zipf class probabilities p_k ∝ (k+1)^(-exponent).
std::vector<double> zipf_probabilities(int32_t K, double exponent);

SynthData generate_synthetic(const SynthConfig& cfg);

/// Fraction of examples whose nearest prototype (Euclidean) is one of their
/// labels: the precision@1 of an oracle that knows the class images.
double nearest_prototype_accuracy(const Dataset& dataset, const std::vector<ImageTensor>& prototypes);

/// Encode already generated captions against `dict` (e.g. a dictionary built
/// from a different range of the same generator).
Dataset relabel(const SynthData& data, const Dictionary& dict);

// Tensor container ("WLTENS1").
struct TensorContainer {
  int32_t height = 0, width = 0, channels = 0;
  std::vector<std::string> ids;         // id-sorted
  std::vector<float> data;              // n * H * W * C
  std::map<std::string, int64_t> index; // id -> ordinal

  ImageTensor image(int64_t ordinal) const;
};

void write_tensor_container(const std::string& path, const Dataset& dataset);
TensorContainer read_tensor_container(const std::string& path);

struct CaptionRecord {
  std::string id;
  std::string caption;
  std::string image;
};

void write_captions(const std::string& path, const std::vector<CaptionRecord>& records);
std::vector<CaptionRecord> read_captions(const std::string& path);

struct LoadResult {
  Dataset dataset;
  int64_t dropped = 0;
};

/// Join captions with the tensor container by image key, encode labels, and
/// drop examples with no in-dictionary word.
LoadResult load_dataset(const std::string& captions_path, const std::string& tensor_path, const Dictionary& dict);

/// Write captions.jsonl + images.wlt (+ dict.txt) into `dir`.
void save_dataset_dir(const std::string& dir, const Dataset& dataset, const std::vector<std::string>& captions,
                      const Dictionary& dict);

}  // namespace weaklearn
