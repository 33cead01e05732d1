// invgen/envbench/environment.cpp

// Copyright 2026  The invgen Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "invgen/envbench/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "invgen/common/error.hpp"
#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"

namespace invgen::envbench {

std::vector<std::vector<std::size_t>> Environment::ClassIndex() const {
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < ys.size(); ++i) by_class.at(ys[i]).push_back(i);
  return by_class;
}

Environment Environment::Subset(std::span<const std::size_t> rows) const {
  Environment out;
  out.xs = xs.Gather(rows);
  out.ys.reserve(rows.size());
  for (std::size_t r : rows) out.ys.push_back(ys.at(r));
  out.name = name;
  out.meta = meta;
  out.n_classes = n_classes;
  return out;
}

void Environment::Validate() const {
  if (ys.empty()) throw std::invalid_argument("environment '" + name + "' is empty");
  if (xs.rows() != ys.size()) {
    throw std::invalid_argument("environment '" + name +
                                "': feature rows and labels differ in length");
  }
  if (n_classes < 2) throw std::invalid_argument("environment needs >= 2 classes");
  for (int y : ys) {
    if (y < 0 || y >= n_classes) {
      throw std::invalid_argument("environment '" + name + "': label " +
                                  std::to_string(y) + " out of range");
    }
  }
  diffcore::RequireFinite(xs, "environment features");
}

namespace {

std::uint32_t ReadBe32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError(path + ": truncated IDX header");
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void WriteBe32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

}  // namespace

DigitSet LoadIdx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw DataError("cannot open " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw DataError("cannot open " + labels_path);

  if (ReadBe32(img, images_path) != kImageMagic) {
    throw DataError(images_path + ": bad IDX image magic");
  }
  const std::size_t n = ReadBe32(img, images_path);
  const std::size_t rows = ReadBe32(img, images_path);
  const std::size_t cols = ReadBe32(img, images_path);
  if (ReadBe32(lab, labels_path) != kLabelMagic) {
    throw DataError(labels_path + ": bad IDX label magic");
  }
  const std::size_t n_labels = ReadBe32(lab, labels_path);
  if (n != n_labels) {
    throw DataError("IDX count mismatch: " + std::to_string(n) + " images vs " +
                    std::to_string(n_labels) + " labels");
  }
  if (rows == 0 || cols == 0 || rows * cols > 1u << 20) {
    throw DataError(images_path + ": implausible image size");
  }

  DigitSet out;
  out.rows = rows;
  out.cols = cols;
  const std::size_t d = rows * cols;
  std::vector<unsigned char> pixels(n * d);
  if (!img.read(reinterpret_cast<char*>(pixels.data()),
                static_cast<std::streamsize>(pixels.size()))) {
    throw DataError(images_path + ": truncated image payload");
  }
  std::vector<unsigned char> labels(n);
  if (!lab.read(reinterpret_cast<char*>(labels.data()),
                static_cast<std::streamsize>(labels.size()))) {
    throw DataError(labels_path + ": truncated label payload");
  }
  out.xs = Tensor(n, d);
  auto data = out.xs.data();
  for (std::size_t i = 0; i < pixels.size(); ++i) data[i] = pixels[i] / 255.0;
  out.digits.assign(labels.begin(), labels.end());
  for (int digit : out.digits) {
    if (digit > 9) throw DataError(labels_path + ": label outside 0-9");
  }
  return out;
}

void WriteIdxImages(const std::string& path, std::size_t rows, std::size_t cols,
                    std::span<const std::uint8_t> pixels) {
  if (rows * cols == 0 || pixels.size() % (rows * cols) != 0) {
    throw std::invalid_argument("WriteIdxImages: payload is not whole images");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path + " for writing");
  WriteBe32(os, kImageMagic);
  WriteBe32(os, static_cast<std::uint32_t>(pixels.size() / (rows * cols)));
  WriteBe32(os, static_cast<std::uint32_t>(rows));
  WriteBe32(os, static_cast<std::uint32_t>(cols));
  os.write(reinterpret_cast<const char*>(pixels.data()),
           static_cast<std::streamsize>(pixels.size()));
}

void WriteIdxLabels(const std::string& path, std::span<const std::uint8_t> labels) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path + " for writing");
  WriteBe32(os, kLabelMagic);
  WriteBe32(os, static_cast<std::uint32_t>(labels.size()));
  os.write(reinterpret_cast<const char*>(labels.data()),
           static_cast<std::streamsize>(labels.size()));
}

DigitSet MakeSurrogateDigits(std::size_t n, std::uint64_t seed) {
  constexpr std::size_t kDim = 20;
  constexpr double kOffset = 0.25;
  constexpr double kNoise = 0.1;
  // The "shape" direction is shared by every seed.
  CounterRng shape_rng(0x5eed0d1c17ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dir(kDim);
  double norm = 0.0;
  for (double& v : dir) {
    v = normal(shape_rng);
    norm += v * v;
  }
  for (double& v : dir) v /= std::sqrt(norm);

  CounterRng rng(seed);
  std::vector<int> group(n);
  for (std::size_t i = 0; i < n; ++i) group[i] = static_cast<int>(i % 2);
  std::shuffle(group.begin(), group.end(), rng);

  DigitSet out;
  out.xs = Tensor(n, kDim);
  out.digits.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.digits[i] = 5 * group[i] + static_cast<int>(rng.Index(5));
    const double sign = group[i] ? 1.0 : -1.0;
    auto row = out.xs.row(i);
    for (std::size_t k = 0; k < kDim; ++k) {
      row[k] = sign * kOffset * dir[k] + kNoise * normal(rng);
    }
  }
  return out;
}

Environment MakeColoredEnv(const DigitSet& base, double p_color_flip,
                           double label_noise, std::size_t n,
                           std::uint64_t seed) {
  if (!(p_color_flip >= 0.0 && p_color_flip <= 1.0) ||
      !(label_noise >= 0.0 && label_noise <= 1.0)) {
    throw std::invalid_argument("MakeColoredEnv: probabilities must be in [0, 1]");
  }
  const std::size_t available = base.xs.rows();
  if (n == 0 || n > available) {
    throw std::invalid_argument("MakeColoredEnv: requested " + std::to_string(n) +
                                " samples, " + std::to_string(available) +
                                " available");
  }
  CounterRng rng(seed);
  std::vector<std::size_t> order(available);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t d = base.xs.cols();
  Environment env;
  env.xs = Tensor(n, 2 * d);
  env.ys.resize(n);
  env.n_classes = 2;
  env.name = "P_S=" + FormatNumber(p_color_flip);
  env.meta["P_S"] = FormatNumber(p_color_flip);
  env.meta["label_noise"] = FormatNumber(label_noise);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[i];
    const int y_tilde = base.digits[src] >= 5 ? 1 : 0;
    const int y = rng.Uniform() < label_noise ? 1 - y_tilde : y_tilde;
    const int red = rng.Uniform() < p_color_flip ? 1 - y : y;
    env.ys[i] = y;
    auto in = base.xs.row(src);
    auto out = env.xs.row(i);
    std::copy(in.begin(), in.end(), out.begin() + (red ? 0 : d));
  }
  return env;
}

std::vector<int> ColorFlags(const Environment& env) {
  const std::size_t half = env.dim() / 2;
  std::vector<int> flags(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    auto row = env.xs.row(i);
    double red = 0.0, green = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
      red += row[k] * row[k];
      green += row[half + k] * row[half + k];
    }
    flags[i] = red > green ? 1 : 0;
  }
  return flags;
}

}  // namespace invgen::envbench
