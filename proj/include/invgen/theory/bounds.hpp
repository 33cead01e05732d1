// invgen/theory/bounds.hpp

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

#ifndef INVGEN_THEORY_BOUNDS_HPP_
#define INVGEN_THEORY_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invgen/diffcore/network.hpp"
#include "invgen/diffcore/tensor.hpp"
#include "invgen/envbench/worlds.hpp"

namespace invgen::theory {

using diffcore::Network;
using diffcore::Tensor;
using envbench::DiscreteWorld;

/// Slack below which a bound is reported as violated.
inline constexpr double kBoundTolerance = 1e-10;

/// One verified inequality lhs <= rhs_total. rhs_terms keeps insertion
/// order and always ends with "rhs_total".
struct BoundReport {
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double slack = 0.0;
  bool holds = false;

  /// Throws std::out_of_range for an unknown name.
  double Term(std::string_view name) const;
};

/// S_t(z|y) for every class: px_given_y[env] times the channel (n_y x n_z).
Tensor LatentConditionals(const DiscreteWorld& world, std::size_t env);

/// Class-uniform 0-1 error of decision table h (n_z entries, each a class
/// index) after pushing the environment through the channel.
double BerThroughChannel(const DiscreteWorld& world, std::size_t env,
                         std::span<const int> h);

/// Test BER against avg_source_ber + kappa + alpha_tv * epsilon, where
///   kappa   = max over source pairs and y of TV(S_i(z|y), S_j(z|y)),
///   alpha   = DobrushinExact(channel),
///   epsilon = min over sources t of max over y of TV(T(x|y), S_t(x|y)).
/// Terms: avg_source_ber, kappa, alpha_tv, epsilon, rhs_total.
BoundReport Theorem1Verify(const DiscreteWorld& world, std::span<const int> h);

/// Induced-invariance check over every ordered pair (i, j) of the world's
/// environments (test included) and every class y, restricted to
/// Omega* = supp S_i(z) intersect supp S_j(z).
///
/// Gaps are measured in the same units as kappa (half the L1 mass on
/// Omega*):
///   label_cond_gap = 1/2 sum_{z in Omega*} |S_i(y|z) - S_j(y|z)|
///   marginal_gap   = 1/2 sum_{z in Omega*} |S_i(z) - S_j(z)|
/// and checked against C1 (1 + |Y|) kappa and kappa, with
/// C1 = 1 / min_{z in Omega*} sum_y S_j(z|y). The *_l1 fields hold the same
/// sums without the 1/2 and holds_l1 tests them against the same right-hand
/// sides.
struct Lemma1Report {
  double kappa = 0.0;
  double label_cond_gap = 0.0;  // at the pair with the smallest label slack
  double c_plus_kappa = 0.0;    // its right-hand side
  double c1 = 0.0;
  double marginal_gap = 0.0;    // max over pairs
  double label_slack = 0.0;     // min over (i, j, y) of rhs - gap
  double marginal_slack = 0.0;  // kappa - marginal_gap
  double label_gap_l1 = 0.0;
  double marginal_gap_l1 = 0.0;
  bool holds = false;
  bool holds_l1 = false;
};

/// Throws std::invalid_argument if any py is not uniform (1e-12) or the
/// world is invalid, and std::domain_error if some Omega* is empty.
Lemma1Report Lemma1Verify(const DiscreteWorld& world);

/// TV(P0 K, P1 K) <= DobrushinExact(K) * TV(P0, P1).
struct SdpiReport {
  double tv_out = 0.0;
  double alpha = 0.0;
  double tv_in = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

SdpiReport SdpiVerify(const Tensor& channel, std::span<const double> p0,
                      std::span<const double> p1);
SdpiReport SdpiVerify(const DiscreteWorld& world, std::span<const double> p0,
                      std::span<const double> p1);

/// Second-order expansion of the mean logistic loss of w^T phi(x~) around
/// the per-class feature centroid. Every per-class quantity is averaged
/// with the class frequencies as weights.
struct TaylorReport {
  double r_aug = 0.0;              // mean loss over the samples
  double g1 = 0.0;                 // loss at the centroid
  double g2 = 0.0;                 // 1/2 Var(w^T phi) * L''(centroid)
  double second_order_sum = 0.0;   // g1 + g2
  double remainder = 0.0;          // |r_aug - second_order_sum|
  double half_var_pred = 0.0;      // 1/2 Var(w^T phi)
  double lipschitz_hat = 0.0;      // LipschitzEmpirical over all samples
  double var_x = 0.0;              // E|x~ - E x~|^2
  double var_bound = 0.0;          // lipschitz_hat^2 |w|^2 / 4 * var_x
  double max_second_deriv = 0.0;   // at the centroids
  bool holds_pair = false;         // g2 <= half_var_pred && g2 <= var_bound
};

/// labels must be -1 or +1; phi must map to w.size() features.
TaylorReport AugmentationTaylorVerify(std::span<const double> w,
                                      const Network& phi, const Tensor& xt,
                                      std::span<const int> labels);

/// Moves every sample toward its class centroid by `factor` in [0, 1].
Tensor ShrinkCloud(const Tensor& xt, std::span<const int> labels, double factor);

struct TaylorScaling {
  TaylorReport wide;
  TaylorReport narrow;
  double shrink = 0.0;
  double remainder_ratio = 0.0;  // narrow.remainder / wide.remainder
};

/// Runs the verifier on the cloud and on ShrinkCloud(cloud, shrink).
TaylorScaling TaylorRemainderScaling(std::span<const double> w,
                                     const Network& phi, const Tensor& xt,
                                     std::span<const int> labels, double shrink);

/// Gaussian channel z ~ N(a x, sigma^2 I_d) on inputs from the box
/// [0, box]^d_in, d = a.rows(), d_in = a.cols().
struct GaussianChannelConfig {
  Tensor a;
  double sigma = 1.0;
  double box = 1.0;
};

struct Lemma2Report {
  int d = 0;
  int d_in = 0;
  double sigma = 0.0;
  double d_max = 0.0;        // box diameter
  double l_true = 0.0;       // SpectralNorm(a)
  double l_hat = 0.0;        // LipschitzEmpirical over the grid
  double tv_mc = 0.0;        // Monte-Carlo TV of the worst grid pair
  double tv_exact = 0.0;     // erf closed form for the same pair
  double bound = 0.0;        // DobrushinLipschitzBound(l_true, d_max, d, sigma)
  double bound_without_d = 0.0;  // same with d = 1 in the exponent
  double slack = 0.0;        // bound - (tv_mc - tolerance)
  bool holds = false;
  bool holds_without_d = false;
};

inline constexpr double kLemma2Tolerance = 0.02;

/// Brute-forces the sup pair over a grid with `grid_points` per axis (ends
/// included, so every box vertex is a candidate), then estimates its TV with
/// `mc_samples` draws.
Lemma2Report Lemma2Verify(const GaussianChannelConfig& config,
                          std::size_t grid_points, std::size_t mc_samples,
                          std::uint64_t seed);

}  // namespace invgen::theory

#endif  // INVGEN_THEORY_BOUNDS_HPP_
