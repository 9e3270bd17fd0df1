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

#include "weaklearn/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "weaklearn/error.hpp"
#include "weaklearn/rng.hpp"

namespace weaklearn {

namespace {

constexpr std::string_view kTensorMagic = "WLTENS1\n";
constexpr std::string_view kIndexMarker = "#index\n";

static_assert(std::endian::native == std::endian::little, "tensor container assumes a little-endian host");

const char* const kFillers[] = {"the", "of", "and", "a", "in"};

}  // namespace

void standardize(ImageTensor& image) {
  if (image.pixels.empty()) throw Error(ErrorKind::kEmptyImage, "empty image");
  double mean = 0.0;
  for (float p : image.pixels) mean += p;
  mean /= static_cast<double>(image.size());
  double var = 0.0;
  for (float p : image.pixels) var += (p - mean) * (p - mean);
  var /= static_cast<double>(image.size());
  double sd = std::sqrt(var);
  if (sd < kDegenerateStd) sd = 1.0;
  for (float& p : image.pixels) p = static_cast<float>((p - mean) / sd);
}

ImageTensor preprocess_image(const ImageTensor& raw, int32_t crop) {
  if (raw.height <= 0 || raw.width <= 0 || raw.channels <= 0 || raw.pixels.empty()) {
    throw Error(ErrorKind::kEmptyImage, "empty image");
  }
  if (crop <= 0) throw Error(ErrorKind::kInvalidArgument, "crop must be positive");
  const int32_t short_side = static_cast<int32_t>(std::lround(crop * 256.0 / 224.0));
  int32_t out_h, out_w;
  if (raw.height <= raw.width) {
    out_h = short_side;
    out_w = std::max<int32_t>(short_side, static_cast<int32_t>(std::lround(double(raw.width) * short_side / raw.height)));
  } else {
    out_w = short_side;
    out_h = std::max<int32_t>(short_side, static_cast<int32_t>(std::lround(double(raw.height) * short_side / raw.width)));
  }

  // Half-pixel-centre bilinear resampling; identity when sizes match.
  ImageTensor scaled(out_h, out_w, raw.channels);
  const double sy = double(raw.height) / out_h;
  const double sx = double(raw.width) / out_w;
  for (int32_t y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(raw.height - 1));
    const int32_t y0 = static_cast<int32_t>(fy);
    const int32_t y1 = std::min(y0 + 1, raw.height - 1);
    const double wy = fy - y0;
    for (int32_t x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(raw.width - 1));
      const int32_t x0 = static_cast<int32_t>(fx);
      const int32_t x1 = std::min(x0 + 1, raw.width - 1);
      const double wx = fx - x0;
      for (int32_t c = 0; c < raw.channels; ++c) {
        const double top = raw.at(y0, x0, c) * (1 - wx) + raw.at(y0, x1, c) * wx;
        const double bot = raw.at(y1, x0, c) * (1 - wx) + raw.at(y1, x1, c) * wx;
        scaled.at(y, x, c) = static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }

  ImageTensor out(crop, crop, raw.channels);
  const int32_t oy = (out_h - crop) / 2;
  const int32_t ox = (out_w - crop) / 2;
  for (int32_t y = 0; y < crop; ++y)
    for (int32_t x = 0; x < crop; ++x)
      for (int32_t c = 0; c < raw.channels; ++c) out.at(y, x, c) = scaled.at(y + oy, x + ox, c);
  standardize(out);
  return out;
}

std::string synth_class_word(int32_t k) {
  static constexpr std::string_view consonants = "bdfgklmnprstvwz";
  static constexpr std::string_view vowels = "aeiou";
  constexpr int32_t base = 15 * 5;
  int32_t syllables = 2;
  for (int64_t cap = int64_t(base) * base; k >= cap; cap *= base) ++syllables;
  std::string word(size_t(syllables) * 2, ' ');
  int64_t rest = k;
  for (int32_t s = syllables - 1; s >= 0; --s) {
    const int64_t digit = rest % base;
    rest /= base;
    word[size_t(s) * 2] = consonants[size_t(digit / 5)];
    word[size_t(s) * 2 + 1] = vowels[size_t(digit % 5)];
  }
  return word;
}

std::vector<double> zipf_probabilities(int32_t K, double exponent) {
  std::vector<double> p(static_cast<size_t>(K));
  for (int32_t k = 0; k < K; ++k) p[size_t(k)] = std::pow(double(k + 1), -exponent);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

SynthData generate_synthetic(const SynthConfig& cfg) {
  if (cfg.K < 1 || cfg.image_size < 1 || cfg.channels < 1 || cfg.words_per_image < 1 ||
      cfg.words_per_image > cfg.K || cfg.zipf_exponent < 0 || cfg.noise_sigma < 0 || cfg.num_examples < 0 ||
      cfg.first_example < 0) {
    throw Error(ErrorKind::kInvalidArgument, "invalid synthetic config");
  }
  const Rng root(cfg.seed);
  const size_t dim = size_t(cfg.image_size) * cfg.image_size * cfg.channels;

  std::vector<ImageTensor> class_protos;
  class_protos.reserve(size_t(cfg.K));
  Rng proto_rng = root.split(0);
  for (int32_t k = 0; k < cfg.K; ++k) {
    ImageTensor p(cfg.image_size, cfg.image_size, cfg.channels);
    for (float& v : p.pixels) v = static_cast<float>(proto_rng.normal());
    standardize(p);
    class_protos.push_back(std::move(p));
  }

  std::vector<double> cdf = zipf_probabilities(cfg.K, cfg.zipf_exponent);
  std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());

  const Rng example_root = root.split(1);
  std::vector<std::string> captions;
  std::vector<ImageTensor> images;
  std::vector<std::string> ids;
  captions.reserve(size_t(cfg.num_examples));
  images.reserve(size_t(cfg.num_examples));
  for (int64_t n = 0; n < cfg.num_examples; ++n) {
    const int64_t ordinal = cfg.first_example + n;
    Rng rng = example_root.split(static_cast<uint64_t>(ordinal));
    std::vector<int32_t> chosen;
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    chosen.push_back(static_cast<int32_t>(std::min<ptrdiff_t>(it - cdf.begin(), cfg.K - 1)));
    while (static_cast<int32_t>(chosen.size()) < cfg.words_per_image) {
      const auto c = static_cast<int32_t>(rng.uniform_below(uint64_t(cfg.K)));
      if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
    }

    ImageTensor img(cfg.image_size, cfg.image_size, cfg.channels);
    for (size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int32_t c : chosen) acc += class_protos[size_t(c)].pixels[i];
      img.pixels[i] = static_cast<float>(acc / double(chosen.size()));
    }
    if (cfg.noise_sigma > 0) {
      for (float& v : img.pixels) v = static_cast<float>(v + cfg.noise_sigma * rng.normal());
    }
    standardize(img);

    std::string caption = "The of and a in";
    for (int32_t c : chosen) caption += " #" + synth_class_word(c);
    caption += " the, of; and a in.";
    captions.push_back(std::move(caption));
    images.push_back(std::move(img));
    char id[32];
    std::snprintf(id, sizeof id, "s%010lld", static_cast<long long>(ordinal));
    ids.emplace_back(id);
  }

  SynthData out;
  TokenCounter counter;
  for (const auto& c : captions) counter.add(normalize_text(c));
  out.dict = counter.finalize(cfg.K, cfg.stop_count);

  out.dataset.height = out.dataset.width = cfg.image_size;
  out.dataset.channels = cfg.channels;
  for (size_t n = 0; n < captions.size(); ++n) {
    LabelSet labels = encode_targets(normalize_text(captions[n]), out.dict);
    if (labels.empty()) continue;
    out.dataset.examples.push_back(Example{ids[n], std::move(images[n]), std::move(labels)});
    out.captions.push_back(captions[n]);
  }
  out.prototypes.resize(out.dict.words.size());
  for (int32_t k = 0; k < cfg.K; ++k) {
    const int32_t idx = out.dict.find(synth_class_word(k));
    if (idx >= 0) out.prototypes[size_t(idx)] = class_protos[size_t(k)];
  }
  return out;
}

double nearest_prototype_accuracy(const Dataset& dataset, const std::vector<ImageTensor>& prototypes) {
  if (dataset.empty()) return 0.0;
  int64_t hits = 0;
  for (const auto& ex : dataset.examples) {
    int32_t best = -1;
    double best_d = 0.0;
    for (size_t k = 0; k < prototypes.size(); ++k) {
      if (prototypes[k].pixels.size() != ex.image.pixels.size()) continue;
      double d = 0.0;
      for (size_t i = 0; i < ex.image.pixels.size(); ++i) {
        const double diff = double(ex.image.pixels[i]) - prototypes[k].pixels[i];
        d += diff * diff;
      }
      if (best < 0 || d < best_d) {
        best = static_cast<int32_t>(k);
        best_d = d;
      }
    }
    hits += std::binary_search(ex.labels.begin(), ex.labels.end(), best) ? 1 : 0;
  }
  return double(hits) / double(dataset.size());
}

Dataset relabel(const SynthData& data, const Dictionary& dict) {
  Dataset out;
  out.height = data.dataset.height;
  out.width = data.dataset.width;
  out.channels = data.dataset.channels;
  for (size_t n = 0; n < data.dataset.size(); ++n) {
    LabelSet labels = encode_targets(normalize_text(data.captions[n]), dict);
    if (labels.empty()) continue;
    const auto& ex = data.dataset.examples[n];
    out.examples.push_back(Example{ex.id, ex.image, std::move(labels)});
  }
  return out;
}

ImageTensor TensorContainer::image(int64_t ordinal) const {
  ImageTensor img(height, width, channels);
  const size_t dim = img.size();
  if (ordinal < 0 || size_t(ordinal + 1) * dim > data.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: ordinal out of range");
  }
  std::copy_n(data.begin() + static_cast<ptrdiff_t>(size_t(ordinal) * dim), dim, img.pixels.begin());
  return img;
}

void write_tensor_container(const std::string& path, const Dataset& dataset) {
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return dataset.examples[a].id < dataset.examples[b].id; });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << kTensorMagic;
  out << "n=" << dataset.size() << " h=" << dataset.height << " w=" << dataset.width << " c=" << dataset.channels
      << " dtype=f32\n";
  for (size_t i : order) {
    const auto& px = dataset.examples[i].image.pixels;
    if (px.size() != dataset.input_dim()) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch");
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size() * sizeof(float)));
  }
  out << kIndexMarker;
  for (size_t o = 0; o < order.size(); ++o) out << dataset.examples[order[o]].id << '\t' << o << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

TensorContainer read_tensor_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::string magic(kTensorMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kTensorMagic) throw Error(ErrorKind::kMalformedHeader, "malformed header");
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::kMalformedHeader, "malformed header");
  long long n = -1;
  int h = 0, w = 0, c = 0;
  char dtype[16] = {0};
  if (std::sscanf(header.c_str(), "n=%lld h=%d w=%d c=%d dtype=%15s", &n, &h, &w, &c, dtype) != 5 || n < 0 ||
      h <= 0 || w <= 0 || c <= 0 || std::string(dtype) != "f32") {
    throw Error(ErrorKind::kMalformedHeader, "malformed header");
  }
  TensorContainer tc;
  tc.height = h;
  tc.width = w;
  tc.channels = c;
  tc.data.resize(size_t(n) * size_t(h) * w * c);
  in.read(reinterpret_cast<char*>(tc.data.data()), static_cast<std::streamsize>(tc.data.size() * sizeof(float)));
  if (!in) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: truncated tensor payload");
  std::string marker;
  if (!std::getline(in, marker) || marker + "\n" != kIndexMarker) {
    throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: payload length disagrees with header");
  }
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::kMalformedHeader, "malformed index line");
    const std::string id = line.substr(0, tab);
    const long long ord = std::stoll(line.substr(tab + 1));
    if (ord < 0 || ord >= n) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: ordinal " + line);
    tc.index[id] = ord;
    tc.ids.push_back(id);
  }
  if (static_cast<long long>(tc.ids.size()) != n) {
    throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch: index has " + std::to_string(tc.ids.size()) +
                                                   " entries, header says " + std::to_string(n));
  }
  return tc;
}

void write_captions(const std::string& path, const std::vector<CaptionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["caption"] = r.caption;
    j["image"] = r.image;
    out << j.dump() << '\n';
  }
}

std::vector<CaptionRecord> read_captions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::vector<CaptionRecord> records;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      records.push_back({j.at("id").get<std::string>(), j.at("caption").get<std::string>(),
                         j.at("image").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kMalformedHeader,
                  path + ":" + std::to_string(line_no) + ": malformed caption record: " + e.what());
    }
  }
  return records;
}

LoadResult load_dataset(const std::string& captions_path, const std::string& tensor_path, const Dictionary& dict) {
  const auto records = read_captions(captions_path);
  const TensorContainer tc = read_tensor_container(tensor_path);
  LoadResult result;
  result.dataset.height = tc.height;
  result.dataset.width = tc.width;
  result.dataset.channels = tc.channels;
  for (const auto& r : records) {
    const auto it = tc.index.find(r.image);
    if (it == tc.index.end()) throw Error(ErrorKind::kMissingId, "missing id in container: " + r.image);
    LabelSet labels = encode_targets(normalize_text(r.caption), dict);
    if (labels.empty()) {
      ++result.dropped;
      continue;
    }
    result.dataset.examples.push_back(Example{r.id, tc.image(it->second), std::move(labels)});
  }
  return result;
}

void save_dataset_dir(const std::string& dir, const Dataset& dataset, const std::vector<std::string>& captions,
                      const Dictionary& dict) {
  std::filesystem::create_directories(dir);
  std::vector<CaptionRecord> records;
  records.reserve(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    records.push_back({dataset.examples[i].id, captions.at(i), dataset.examples[i].id});
  }
  write_captions(dir + "/captions.jsonl", records);
  write_tensor_container(dir + "/images.wlt", dataset);
  save_dictionary(dir + "/dict.txt", dict);
}

}  // namespace weaklearn
