// invgen/experiments/config.hpp

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

#ifndef INVGEN_EXPERIMENTS_CONFIG_HPP_
#define INVGEN_EXPERIMENTS_CONFIG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "invgen/invariance/losses.hpp"
#include "invgen/trainer/train.hpp"

namespace invgen::experiments {

enum class Kind {
  kColorMnistTable,
  kLambdaSweep,
  kPtSweep,
  kCounterexample,
  kTheorySuite,
  kTaylorCheck,
  kEvolution,
};

std::string_view KindName(Kind kind);
/// Throws ConfigError.
Kind ParseKind(std::string_view name);

/// Colored-digit environments.
struct ColorData {
  std::string source = "surrogate";  // or "mnist"
  std::string mnist_dir;             // INVGEN_DATA_DIR takes precedence
  std::size_t base_size = 30000;     // surrogate pool size
  std::size_t n_per_env = 5000;
  std::size_t test_size = 5000;
  double label_noise = 0.25;
  std::vector<double> p_s{0.1, 0.2, 0.9};
};

/// A method is a criterion with or without the Jacobian regulariser.
struct Method {
  invariance::Criterion criterion = invariance::Criterion::kErm;
  bool reg = false;

  std::string Name() const;  // "ERM", "ERM+REG", ...
};

/// Throws ConfigError on anything but {ERM, DANN, CDANN, IRM}[+REG].
Method ParseMethod(std::string_view name);

struct ExperimentSpec {
  Kind kind = Kind::kColorMnistTable;
  std::uint64_t seed = 0;
  std::string output_dir = "invgen_out";
  trainer::TrainConfig train;
  ColorData data;

  // colormnist_table, lambda_sweep
  std::vector<std::size_t> held_out{0, 1, 2};  // indices into data.p_s
  std::vector<Method> methods;
  std::size_t repeats = 5;

  // lambda_sweep
  std::vector<double> lambda_grid;

  // pt_sweep (observed P_S values come from data.p_s)
  std::vector<double> p_t;

  // counterexample
  std::vector<double> epsilons{0.1, 0.2, 0.3};
  std::size_t counter_n = 10000;
  std::size_t counter_steps = 500;

  // theory_suite: theorem 1, lemma 1, sdpi, lemma 2
  std::array<std::size_t, 4> counts{1000, 500, 1000, 100};
  std::size_t mc_samples = 100000;

  // taylor_check
  std::size_t taylor_instances = 20;
  std::size_t taylor_cloud = 200;
  double taylor_shrink = 0.05;

  // evolution: lambda1 of the regularised run; the other run uses 0.
  double evolution_lambda1 = 0.1;

  // --check thresholds
  double min_reg_gain = 0.015;
  std::size_t min_pt_wins = 6;
  double min_observed_acc = 0.90;
  double max_jfro_ratio = 0.5;
  double max_taylor_remainder = 1e-2;

  /// Kind-specific consistency checks. Throws ConfigError.
  void Validate() const;
};

/// INI text: [experiment], [data], [train] and one section per kind. Keys
/// are checked against the known set; unknown sections or keys, bad numbers
/// and failed validation throw ConfigError.
ExperimentSpec ParseSpec(std::istream& in);
ExperimentSpec LoadSpec(const std::string& path);

/// Splits "a, b, c" into numbers. Throws ConfigError.
std::vector<double> ParseNumberList(std::string_view text);

}  // namespace invgen::experiments

#endif  // INVGEN_EXPERIMENTS_CONFIG_HPP_
