// invgen/envbench/environment.hpp

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

#ifndef INVGEN_ENVBENCH_ENVIRONMENT_HPP_
#define INVGEN_ENVBENCH_ENVIRONMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "invgen/diffcore/tensor.hpp"

namespace invgen::envbench {

using diffcore::Tensor;

/// Labeled sample set of one environment. Labels are class indices in
/// [0, n_classes).
struct Environment {
  Tensor xs;  // n x d
  std::vector<int> ys;
  std::string name;
  std::map<std::string, std::string> meta;
  int n_classes = 2;

  std::size_t size() const { return ys.size(); }
  std::size_t dim() const { return xs.cols(); }

  /// by_class[c] lists the row indices with label c.
  std::vector<std::vector<std::size_t>> ClassIndex() const;

  /// Subset of rows, meta copied.
  Environment Subset(std::span<const std::size_t> rows) const;

  /// Throws std::invalid_argument unless shapes agree, labels are in range,
  /// n >= 1 and xs is finite.
  void Validate() const;
};

/// Digit images (or surrogate vectors) with their 0-9 digit labels.
struct DigitSet {
  Tensor xs;
  std::vector<int> digits;
  std::size_t rows = 0;  // image geometry when loaded from IDX; 0 otherwise
  std::size_t cols = 0;
};

/// Reads an IDX image file (magic 0x00000803) and label file (0x00000801).
/// Pixels are scaled to [0, 1]. Throws DataError on bad magic, truncation
/// or count mismatch.
DigitSet LoadIdx(const std::string& images_path, const std::string& labels_path);

void WriteIdxImages(const std::string& path, std::size_t rows, std::size_t cols,
                    std::span<const std::uint8_t> pixels);
void WriteIdxLabels(const std::string& path, std::span<const std::uint8_t> labels);

/// Offline stand-in for MNIST: 20-dim vectors from two Gaussian blobs
/// (digits 0-4 vs 5-9) centred at -/+0.25 along a fixed unit direction with
/// isotropic noise sd 0.1. Groups are balanced to within one sample.
DigitSet MakeSurrogateDigits(std::size_t n, std::uint64_t seed);

/// Colored binary environment. Picks n rows of `base` (seeded), sets
/// y~ = [digit >= 5], flips it with probability label_noise to get y, then
/// sets the color flag to y flipped with probability p_color_flip. Red
/// (flag 1) puts the image in the first half of x, green in the second.
Environment MakeColoredEnv(const DigitSet& base, double p_color_flip,
                           double label_noise, std::size_t n,
                           std::uint64_t seed);

/// 1 where the first (red) half of row i carries more energy.
std::vector<int> ColorFlags(const Environment& env);

}  // namespace invgen::envbench

#endif  // INVGEN_ENVBENCH_ENVIRONMENT_HPP_
