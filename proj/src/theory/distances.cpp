// invgen/theory/distances.cpp

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

#include "invgen/theory/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "invgen/common/rng.hpp"
#include "invgen/diffcore/autodiff.hpp"

namespace invgen::theory {

namespace {

void CheckDistribution(std::span<const double> p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": negative or non-finite probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                std::to_string(sum));
  }
}

double SquaredDistance(std::span<const double> a, std::span<const double> b,
                       const char* what) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument(std::string(what) + ": mean length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void CheckSigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument(std::string(what) + ": sigma must be > 0");
  }
}

}  // namespace

double TvDiscrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("TvDiscrete: length mismatch");
  }
  CheckDistribution(p, "TvDiscrete");
  CheckDistribution(q, "TvDiscrete");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::min(1.0, 0.5 * s);
}

double HellingerGaussian(std::span<const double> mu1, std::span<const double> mu2,
                         double sigma, int d) {
  CheckSigma(sigma, "HellingerGaussian");
  if (d < 1) throw std::invalid_argument("HellingerGaussian: d must be >= 1");
  const double sq = SquaredDistance(mu1, mu2, "HellingerGaussian");
  return std::sqrt(-std::expm1(-sq / (8.0 * sigma * sigma * d)));
}

double TvGaussianBound(std::span<const double> mu1, std::span<const double> mu2,
                       double sigma, int d) {
  return std::min(1.0, std::numbers::sqrt2 * HellingerGaussian(mu1, mu2, sigma, d));
}

double TvGaussianExact(std::span<const double> mu1, std::span<const double> mu2,
                       double sigma) {
  CheckSigma(sigma, "TvGaussianExact");
  const double dist = std::sqrt(SquaredDistance(mu1, mu2, "TvGaussianExact"));
  return std::erf(dist / (2.0 * std::numbers::sqrt2 * sigma));
}

double TvGaussianMonteCarlo(std::span<const double> mu1,
                            std::span<const double> mu2, double sigma,
                            std::size_t samples, std::uint64_t seed) {
  CheckSigma(sigma, "TvGaussianMonteCarlo");
  SquaredDistance(mu1, mu2, "TvGaussianMonteCarlo");
  if (samples == 0) {
    throw std::invalid_argument("TvGaussianMonteCarlo: samples must be > 0");
  }
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  double acc = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double to1 = 0.0, to2 = 0.0;
    for (std::size_t i = 0; i < mu1.size(); ++i) {
      const double z = mu1[i] + normal(rng);
      to1 += (z - mu1[i]) * (z - mu1[i]);
      to2 += (z - mu2[i]) * (z - mu2[i]);
    }
    // log q/p = (|z-mu1|^2 - |z-mu2|^2) / (2 s^2)
    const double ratio = std::exp((to1 - to2) * inv2s2);
    acc += std::max(0.0, 1.0 - ratio);
  }
  return acc / static_cast<double>(samples);
}

double DobrushinExact(const Tensor& channel) {
  if (channel.empty()) throw std::invalid_argument("DobrushinExact: empty channel");
  for (std::size_t r = 0; r < channel.rows(); ++r) {
    CheckDistribution(channel.row(r), "DobrushinExact");
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < channel.rows(); ++a) {
    for (std::size_t b = a + 1; b < channel.rows(); ++b) {
      worst = std::max(worst, TvDiscrete(channel.row(a), channel.row(b)));
    }
  }
  return worst;
}

double DobrushinLipschitzBound(double l_phi, double d_max, int d, double sigma) {
  if (!(l_phi >= 0.0)) {
    throw std::invalid_argument("DobrushinLipschitzBound: L_phi must be >= 0");
  }
  if (!(d_max >= 0.0)) {
    throw std::invalid_argument("DobrushinLipschitzBound: d_max must be >= 0");
  }
  if (d < 1) throw std::invalid_argument("DobrushinLipschitzBound: d must be >= 1");
  CheckSigma(sigma, "DobrushinLipschitzBound");
  const double e = d_max * d_max * l_phi * l_phi / (8.0 * d * sigma * sigma);
  return std::numbers::sqrt2 * std::sqrt(-std::expm1(-e));
}

double LipschitzEmpirical(const Network& phi, const Tensor& xs) {
  if (xs.rows() < 2) {
    throw std::invalid_argument("LipschitzEmpirical: need at least two points");
  }
  const Tensor zs = diffcore::Predict(phi, xs);
  double best = 0.0;
  bool any_pair = false;
  for (std::size_t a = 0; a < xs.rows(); ++a) {
    for (std::size_t b = a + 1; b < xs.rows(); ++b) {
      const double dx = SquaredDistance(xs.row(a), xs.row(b), "LipschitzEmpirical");
      if (dx == 0.0) continue;
      any_pair = true;
      const double dz = SquaredDistance(zs.row(a), zs.row(b), "LipschitzEmpirical");
      best = std::max(best, std::sqrt(dz / dx));
    }
  }
  if (!any_pair) {
    throw std::invalid_argument("LipschitzEmpirical: all points are duplicates");
  }
  return best;
}

double SpectralNorm(const Tensor& a, int max_iters, double tol) {
  if (a.empty()) throw std::invalid_argument("SpectralNorm: empty matrix");
  const Tensor ata = diffcore::MatMulTransA(a, a);
  const std::size_t n = ata.rows();
  std::vector<double> v(n);
  // Deterministic start with no exact symmetry.
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = ata.row(i);
      for (std::size_t j = 0; j < n; ++j) w[i] += row[j] * v[j];
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    const bool done = std::abs(norm - lambda) <= tol * norm;
    lambda = norm;
    if (done) break;
  }
  return std::sqrt(lambda);
}

double LogisticLoss(double yhat, int y) {
  if (y != -1 && y != 1) throw std::invalid_argument("LogisticLoss: y must be +-1");
  const double m = -yhat * y;
  return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double LogisticSecondDeriv(double yhat) {
  const double e = std::exp(-std::abs(yhat));
  return e / ((1.0 + e) * (1.0 + e));
}

}  // namespace invgen::theory
