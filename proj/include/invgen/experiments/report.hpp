// invgen/experiments/report.hpp

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

#ifndef INVGEN_EXPERIMENTS_REPORT_HPP_
#define INVGEN_EXPERIMENTS_REPORT_HPP_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "invgen/envbench/environment.hpp"
#include "invgen/experiments/config.hpp"

namespace invgen::experiments {

/// One threshold test evaluated in --check mode.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything a run writes. Files keep insertion order; summary.md is built
/// by Summary() and is not part of `files`.
struct Report {
  Kind kind = Kind::kColorMnistTable;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<Check> checks;
  std::string table_md;  // kind-specific markdown body
  std::vector<std::string> notes;

  void AddFile(std::string name, std::string content);
  /// Throws std::out_of_range.
  const std::string& File(const std::string& name) const;
  const Check& GetCheck(const std::string& name) const;
  bool Passed() const;
  std::string Summary() const;
};

/// Writes every file plus summary.md into `dir`, creating it if needed.
/// Throws ConfigError when the directory cannot be created or written.
void WriteReport(const Report& report, const std::string& dir);

/// Seed of the sub-stream reached by forking `base` along `path`.
std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Digit pools for training-side and test-side environments.
struct ColorPools {
  envbench::DigitSet train;
  envbench::DigitSet test;
};

/// MNIST reads train-* and t10k-* IDX files from INVGEN_DATA_DIR, else
/// data.mnist_dir. The surrogate draws the two pools from separate seeds.
/// Throws DataError on missing or malformed files.
ColorPools LoadColorPools(const ColorData& data, std::uint64_t seed);

/// Directory the MNIST loader reads from.
std::string MnistDir(const ColorData& data);

/// Colored environments for every value of p_s drawn from `pool`.
std::vector<envbench::Environment> MakeColorEnvs(const envbench::DigitSet& pool,
                                                 const ColorData& data,
                                                 const std::vector<double>& p_s,
                                                 std::size_t n,
                                                 std::uint64_t seed);

/// Mean and sample standard deviation (0 for a single value).
std::pair<double, double> MeanStd(const std::vector<double>& values);

}  // namespace invgen::experiments

#endif  // INVGEN_EXPERIMENTS_REPORT_HPP_
