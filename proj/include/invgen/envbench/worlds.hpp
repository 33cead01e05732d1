// invgen/envbench/worlds.hpp

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

#ifndef INVGEN_ENVBENCH_WORLDS_HPP_
#define INVGEN_ENVBENCH_WORLDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "invgen/envbench/environment.hpp"

namespace invgen::envbench {

// ---------------------------------------------------------------------------
// 1-D over-matching counter-example. Class index 0 is y = -1, index 1 is
// y = +1. Every class-conditional is uniform on a unit interval recorded in
// meta ("class0_lo", "class0_hi", ...), so distances are exact.

struct CounterexampleEnvs {
  Environment s1;
  Environment s2;
  Environment t;
};

/// S1: y=+1 on [0,1], y=-1 on [1,2]. S2: y=-1 on [3,4], y=+1 on [4,5].
/// T moves each S2 class by eps across x = 4: y=-1 on [3+eps, 4+eps],
/// y=+1 on [4-eps, 5-eps]. n samples per environment, classes balanced.
CounterexampleEnvs MakeCounterexampleEnvs(std::size_t n, double epsilon,
                                          std::uint64_t seed = 0);

/// x on [0,2]; x-2 on [3,4]; 5-x on (4,5]. Throws std::domain_error in the
/// gap (2,3) and outside [0,5].
double CounterexamplePhi(double x);
/// -sign(z - 1) with sign(0) resolved to +1. Returns -1 or +1.
int CounterexampleH(double z);
/// Label in class-index form (0 for -1, 1 for +1).
int CounterexampleClass(double x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Class-conditional support recorded in meta.
Interval ClassInterval(const Environment& env, int cls);
/// Exact TV between two uniform densities.
double UniformTv(Interval a, Interval b);
/// Population BER of the analytic phi/h, from the interval metadata.
double CounterexamplePopulationBer(const Environment& env);

// ---------------------------------------------------------------------------
// Isotropic Gaussian class-conditionals.

struct GaussianEnvSpec {
  std::vector<std::vector<double>> class_means;  // one mean per class
  double sigma = 1.0;
};

/// n samples per environment, classes balanced (label i % K). Means and
/// sigma are written to meta ("sigma", "mean<c>").
std::vector<Environment> MakeGaussianEnvs(std::span<const GaussianEnvSpec> specs,
                                          std::size_t n, std::uint64_t seed);
/// Reconstructs the spec stored in meta.
GaussianEnvSpec GaussianSpecFromMeta(const Environment& env);

// ---------------------------------------------------------------------------

/// Resamples to `target` rows (0 keeps the current size) with equal class
/// counts, drawing without replacement where a class has enough rows and
/// with replacement beyond that. target must be divisible by n_classes.
Environment RebalanceLabels(const Environment& env, std::uint64_t seed,
                            std::size_t target = 0);

/// Writes `env,label,f0..f{d-1}` rows for every environment.
void WriteEnvironmentsCsv(std::ostream& os, std::span<const Environment> envs);

// ---------------------------------------------------------------------------
// Finite worlds for exact bound checks.

struct DiscreteWorld {
  std::size_t n_x = 0, n_z = 0, n_y = 0, n_env = 0;
  std::vector<Tensor> px_given_y;        // per env, n_y x n_x
  std::vector<std::vector<double>> py;   // per env, n_y
  Tensor channel;                        // n_x x n_z
  std::size_t test_env_index = 0;

  /// Throws std::invalid_argument if any table is not a probability table
  /// to within 1e-12.
  void Validate() const;
  std::size_t num_sources() const { return n_env - 1; }
};

struct DiscreteWorldOptions {
  bool balanced = false;  // uniform py in every environment
  double sparsity = 0.0;  // chance that an entry of px_given_y is zeroed
};

/// Random world. smoothness in [0,1] blends each channel row toward one
/// shared row; 1 makes every row identical. The last environment is the
/// test environment. Sizes must all be >= 2.
DiscreteWorld MakeDiscreteWorld(std::size_t n_x, std::size_t n_z,
                                std::size_t n_y, std::size_t n_env,
                                std::uint64_t seed, double smoothness,
                                DiscreteWorldOptions options = {});

}  // namespace invgen::envbench

#endif  // INVGEN_ENVBENCH_WORLDS_HPP_
