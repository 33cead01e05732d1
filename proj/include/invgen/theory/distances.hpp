// invgen/theory/distances.hpp

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

#ifndef INVGEN_THEORY_DISTANCES_HPP_
#define INVGEN_THEORY_DISTANCES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "invgen/diffcore/network.hpp"
#include "invgen/diffcore/tensor.hpp"

namespace invgen::theory {

using diffcore::Network;
using diffcore::Tensor;

/// Half the L1 distance. Both inputs must be probability vectors of equal
/// length (entries >= 0, sum 1 within 1e-9); throws std::invalid_argument
/// otherwise.
double TvDiscrete(std::span<const double> p, std::span<const double> q);

/// Hellinger distance between N(mu1, s^2 I) and N(mu2, s^2 I) in the form
///   (1 - exp(-|mu1 - mu2|^2 / (8 s^2 d)))^(1/2),
/// i.e. with the extra 1/d inside the exponent. d must be >= 1 and sigma > 0.
double HellingerGaussian(std::span<const double> mu1, std::span<const double> mu2,
                         double sigma, int d);

/// min(1, sqrt(2) * HellingerGaussian(...)).
double TvGaussianBound(std::span<const double> mu1, std::span<const double> mu2,
                       double sigma, int d);

/// Exact TV between two isotropic Gaussians with a common sigma:
/// erf(|mu1 - mu2| / (2 sqrt(2) sigma)).
double TvGaussianExact(std::span<const double> mu1, std::span<const double> mu2,
                       double sigma);

/// Unbiased Monte-Carlo TV estimate, E_{z~P}[max(0, 1 - q(z)/p(z))], from
/// `samples` draws of P = N(mu1, s^2 I).
double TvGaussianMonteCarlo(std::span<const double> mu1,
                            std::span<const double> mu2, double sigma,
                            std::size_t samples, std::uint64_t seed);

/// max over row pairs of TvDiscrete. Rows of `channel` are conditionals.
double DobrushinExact(const Tensor& channel);

/// sqrt(2) (1 - exp(-d_max^2 L^2 / (8 d sigma^2)))^(1/2), not clamped.
double DobrushinLipschitzBound(double l_phi, double d_max, int d, double sigma);

/// max over pairs of distinct rows of |phi(x) - phi(x')| / |x - x'|. This is
/// a lower bound on the true Lipschitz constant. Throws if fewer than two
/// distinct rows are given.
double LipschitzEmpirical(const Network& phi, const Tensor& xs);

/// Largest singular value of `a` by power iteration on a^T a.
double SpectralNorm(const Tensor& a, int max_iters = 1000, double tol = 1e-14);

/// Logistic loss log(1 + exp(-yhat * y)) and its second derivative in yhat,
/// e^yhat / (1 + e^yhat)^2 (the same for y = -1 and y = +1).
double LogisticLoss(double yhat, int y);
double LogisticSecondDeriv(double yhat);

}  // namespace invgen::theory

#endif  // INVGEN_THEORY_DISTANCES_HPP_
