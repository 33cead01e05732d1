// invgen/envbench/worlds.cpp

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

#include "invgen/envbench/worlds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"

namespace invgen::envbench {

namespace {

void SetInterval(Environment* env, int cls, Interval iv) {
  const std::string key = "class" + std::to_string(cls);
  env->meta[key + "_lo"] = FormatNumber(iv.lo, 17);
  env->meta[key + "_hi"] = FormatNumber(iv.hi, 17);
}

// Samples land in (lo, hi]; the closed right end keeps S2's y=+1 class off
// the point x = 4.
Environment IntervalEnv(const std::string& name, Interval neg, Interval pos,
                        std::size_t n, CounterRng rng) {
  Environment env;
  env.name = name;
  env.n_classes = 2;
  env.xs = Tensor(n, 1);
  env.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    const Interval iv = cls == 0 ? neg : pos;
    env.ys[i] = cls;
    env.xs(i, 0) = iv.hi - rng.Uniform() * (iv.hi - iv.lo);
  }
  SetInterval(&env, 0, neg);
  SetInterval(&env, 1, pos);
  return env;
}

double Overlap(Interval a, double lo, double hi) {
  return std::max(0.0, std::min(a.hi, hi) - std::max(a.lo, lo));
}

std::string JoinNumbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += FormatNumber(v[i], 17);
  }
  return out;
}

const std::string& MetaValue(const Environment& env, const std::string& key) {
  auto it = env.meta.find(key);
  if (it == env.meta.end()) {
    throw std::invalid_argument("environment '" + env.name + "' has no meta '" +
                                key + "'");
  }
  return it->second;
}

void RequireDistribution(std::span<const double> row, const char* what) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + ": row sums to " +
                                FormatNumber(sum, 17));
  }
}

std::vector<double> RandomSimplex(std::size_t n, double shape, double sparsity,
                                  CounterRng& rng) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  std::vector<double> row(n);
  double sum = 0.0;
  for (double& v : row) {
    v = gamma(rng);
    if (sparsity > 0.0 && rng.Uniform() < sparsity) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) {
    std::fill(row.begin(), row.end(), 0.0);
    row[rng.Index(n)] = 1.0;
    return row;
  }
  for (double& v : row) v /= sum;
  return row;
}

}  // namespace

CounterexampleEnvs MakeCounterexampleEnvs(std::size_t n, double epsilon,
                                          std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("MakeCounterexampleEnvs: epsilon must be in (0, 0.5)");
  }
  if (n == 0) throw std::invalid_argument("MakeCounterexampleEnvs: n must be >= 1");
  CounterRng rng(seed);
  CounterexampleEnvs out;
  out.s1 = IntervalEnv("S1", {1.0, 2.0}, {0.0, 1.0}, n, rng.Fork(1));
  out.s2 = IntervalEnv("S2", {3.0, 4.0}, {4.0, 5.0}, n, rng.Fork(2));
  out.t = IntervalEnv("T", {3.0 + epsilon, 4.0 + epsilon},
                      {4.0 - epsilon, 5.0 - epsilon}, n, rng.Fork(3));
  out.t.meta["epsilon"] = FormatNumber(epsilon, 17);
  return out;
}

double CounterexamplePhi(double x) {
  if (x >= 0.0 && x <= 2.0) return x;
  if (x >= 3.0 && x <= 4.0) return x - 2.0;
  if (x > 4.0 && x <= 5.0) return 5.0 - x;
  throw std::domain_error("CounterexamplePhi: x = " + FormatNumber(x) +
                          " is outside [0,2] u [3,5]");
}

int CounterexampleH(double z) { return z - 1.0 > 0.0 ? -1 : +1; }

int CounterexampleClass(double x) {
  return CounterexampleH(CounterexamplePhi(x)) > 0 ? 1 : 0;
}

Interval ClassInterval(const Environment& env, int cls) {
  const std::string key = "class" + std::to_string(cls);
  return {ParseNumber(MetaValue(env, key + "_lo")),
          ParseNumber(MetaValue(env, key + "_hi"))};
}

double UniformTv(Interval a, Interval b) {
  const double la = a.hi - a.lo, lb = b.hi - b.lo;
  if (!(la > 0.0) || !(lb > 0.0)) throw std::invalid_argument("UniformTv: empty interval");
  const double o = Overlap(a, b.lo, b.hi);
  return 0.5 * ((la - o) / la + (lb - o) / lb + o * std::abs(1.0 / la - 1.0 / lb));
}

double CounterexamplePopulationBer(const Environment& env) {
  double ber = 0.0;
  for (int cls = 0; cls < 2; ++cls) {
    const Interval iv = ClassInterval(env, cls);
    if (Overlap(iv, 2.0, 3.0) > 0.0 || iv.lo < 0.0 || iv.hi > 5.0) {
      throw std::domain_error("class support leaves the domain of phi");
    }
    // Regions where h(phi(x)) predicts +1: [0,1] and (4,5].
    const double pos = Overlap(iv, 0.0, 1.0) + Overlap(iv, 4.0, 5.0);
    const double len = iv.hi - iv.lo;
    const double wrong = cls == 1 ? len - pos : pos;
    ber += wrong / len;
  }
  return ber / 2.0;
}

std::vector<Environment> MakeGaussianEnvs(std::span<const GaussianEnvSpec> specs,
                                          std::size_t n, std::uint64_t seed) {
  if (specs.empty() || n == 0) {
    throw std::invalid_argument("MakeGaussianEnvs: need >= 1 spec and n >= 1");
  }
  CounterRng root(seed);
  std::vector<Environment> envs;
  for (std::size_t e = 0; e < specs.size(); ++e) {
    const GaussianEnvSpec& spec = specs[e];
    const std::size_t k = spec.class_means.size();
    if (k < 2) throw std::invalid_argument("MakeGaussianEnvs: need >= 2 classes");
    if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
      throw std::invalid_argument("MakeGaussianEnvs: sigma must be > 0");
    }
    const std::size_t d = spec.class_means[0].size();
    for (const auto& m : spec.class_means) {
      if (m.size() != d || d == 0) {
        throw std::invalid_argument("MakeGaussianEnvs: ragged class means");
      }
    }
    CounterRng rng = root.Fork(e);
    std::normal_distribution<double> normal(0.0, 1.0);
    Environment env;
    env.name = "gauss" + std::to_string(e);
    env.n_classes = static_cast<int>(k);
    env.xs = Tensor(n, d);
    env.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = static_cast<int>(i % k);
      env.ys[i] = c;
      auto row = env.xs.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        row[j] = spec.class_means[c][j] + spec.sigma * normal(rng);
      }
    }
    env.meta["sigma"] = FormatNumber(spec.sigma, 17);
    for (std::size_t c = 0; c < k; ++c) {
      env.meta["mean" + std::to_string(c)] = JoinNumbers(spec.class_means[c]);
    }
    envs.push_back(std::move(env));
  }
  return envs;
}

GaussianEnvSpec GaussianSpecFromMeta(const Environment& env) {
  GaussianEnvSpec spec;
  spec.sigma = ParseNumber(MetaValue(env, "sigma"));
  for (int c = 0; c < env.n_classes; ++c) {
    std::vector<double> mean;
    for (const auto& f : SplitTrimmed(MetaValue(env, "mean" + std::to_string(c)), ',')) {
      mean.push_back(ParseNumber(f));
    }
    spec.class_means.push_back(std::move(mean));
  }
  return spec;
}

Environment RebalanceLabels(const Environment& env, std::uint64_t seed,
                            std::size_t target) {
  const std::size_t k = static_cast<std::size_t>(env.n_classes);
  if (target == 0) target = env.size();
  if (target % k != 0 || target == 0) {
    throw std::invalid_argument("RebalanceLabels: target " + std::to_string(target) +
                                " is not a positive multiple of the class count");
  }
  const std::size_t per = target / k;
  auto by_class = env.ClassIndex();
  CounterRng rng(seed);
  std::vector<std::size_t> rows;
  rows.reserve(target);
  for (std::size_t c = 0; c < k; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) {
      throw std::invalid_argument("RebalanceLabels: class " + std::to_string(c) +
                                  " is absent");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t take = std::min(per, idx.size());
    rows.insert(rows.end(), idx.begin(), idx.begin() + take);
    for (std::size_t i = take; i < per; ++i) rows.push_back(idx[rng.Index(idx.size())]);
  }
  Environment out = env.Subset(rows);
  out.meta["rebalanced"] = "1";
  return out;
}

void WriteEnvironmentsCsv(std::ostream& os, std::span<const Environment> envs) {
  if (envs.empty()) return;
  const std::size_t d = envs.front().dim();
  CsvWriter csv(os);
  std::vector<std::string> header{"env", "label"};
  for (std::size_t j = 0; j < d; ++j) header.push_back("f" + std::to_string(j));
  csv.Header(header);
  for (const Environment& env : envs) {
    if (env.dim() != d) throw std::invalid_argument("WriteEnvironmentsCsv: mixed dims");
    for (std::size_t i = 0; i < env.size(); ++i) {
      csv.Field(std::string_view(env.name)).Field(env.ys[i]);
      for (double v : env.xs.row(i)) csv.Field(v);
      csv.EndRow();
    }
  }
}

void DiscreteWorld::Validate() const {
  if (n_x < 2 || n_z < 2 || n_y < 2 || n_env < 2) {
    throw std::invalid_argument("DiscreteWorld: all sizes must be >= 2");
  }
  if (px_given_y.size() != n_env || py.size() != n_env) {
    throw std::invalid_argument("DiscreteWorld: per-environment tables missing");
  }
  if (test_env_index >= n_env) {
    throw std::invalid_argument("DiscreteWorld: test_env_index out of range");
  }
  if (channel.rows() != n_x || channel.cols() != n_z) {
    throw std::invalid_argument("DiscreteWorld: channel shape mismatch");
  }
  for (std::size_t x = 0; x < n_x; ++x) RequireDistribution(channel.row(x), "channel");
  for (std::size_t e = 0; e < n_env; ++e) {
    if (px_given_y[e].rows() != n_y || px_given_y[e].cols() != n_x) {
      throw std::invalid_argument("DiscreteWorld: px_given_y shape mismatch");
    }
    for (std::size_t y = 0; y < n_y; ++y) {
      RequireDistribution(px_given_y[e].row(y), "px_given_y");
    }
    if (py[e].size() != n_y) throw std::invalid_argument("DiscreteWorld: py size");
    RequireDistribution(py[e], "py");
  }
}

DiscreteWorld MakeDiscreteWorld(std::size_t n_x, std::size_t n_z,
                                std::size_t n_y, std::size_t n_env,
                                std::uint64_t seed, double smoothness,
                                DiscreteWorldOptions options) {
  if (n_x < 2 || n_z < 2 || n_y < 2 || n_env < 2) {
    throw std::invalid_argument("MakeDiscreteWorld: all sizes must be >= 2");
  }
  if (!(smoothness >= 0.0 && smoothness <= 1.0)) {
    throw std::invalid_argument("MakeDiscreteWorld: smoothness must be in [0, 1]");
  }
  CounterRng rng(seed);
  DiscreteWorld w;
  w.n_x = n_x;
  w.n_z = n_z;
  w.n_y = n_y;
  w.n_env = n_env;
  w.test_env_index = n_env - 1;

  const std::vector<double> common = RandomSimplex(n_z, 0.7, 0.0, rng);
  w.channel = Tensor(n_x, n_z);
  for (std::size_t x = 0; x < n_x; ++x) {
    const std::vector<double> own = RandomSimplex(n_z, 0.7, 0.0, rng);
    auto row = w.channel.row(x);
    double sum = 0.0;
    for (std::size_t z = 0; z < n_z; ++z) {
      row[z] = (1.0 - smoothness) * own[z] + smoothness * common[z];
      sum += row[z];
    }
    if (smoothness < 1.0) {
      for (double& v : row) v /= sum;
    }
  }
  for (std::size_t e = 0; e < n_env; ++e) {
    Tensor table(n_y, n_x);
    for (std::size_t y = 0; y < n_y; ++y) {
      const auto row = RandomSimplex(n_x, 0.7, options.sparsity, rng);
      std::copy(row.begin(), row.end(), table.row(y).begin());
    }
    w.px_given_y.push_back(std::move(table));
    if (options.balanced) {
      w.py.emplace_back(n_y, 1.0 / static_cast<double>(n_y));
    } else {
      w.py.push_back(RandomSimplex(n_y, 1.0, 0.0, rng));
    }
  }
  w.Validate();
  return w;
}

}  // namespace invgen::envbench
