// invgen/theory/suites.cpp

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

#include "invgen/theory/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"
#include "invgen/envbench/worlds.hpp"
#include "invgen/theory/bounds.hpp"

namespace invgen::theory {

namespace {

std::size_t Between(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.Index(hi - lo + 1);
}

double UniformIn(CounterRng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.Uniform();
}

// Dirichlet(0.7) with optional zeroing; at least one entry survives.
std::vector<double> RandomDistribution(std::size_t n, double sparsity,
                                       CounterRng& rng) {
  std::gamma_distribution<double> gamma(0.7, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& v : p) {
    v = rng.Uniform() < sparsity ? 0.0 : gamma(rng);
    sum += v;
  }
  if (sum == 0.0) {
    p[rng.Index(n)] = 1.0;
    return p;
  }
  for (double& v : p) v /= sum;
  return p;
}

envbench::DiscreteWorld RandomWorld(CounterRng& rng, std::size_t min_env,
                                    std::size_t max_env, bool balanced) {
  const std::size_t n_x = Between(rng, 2, 16);
  const std::size_t n_z = Between(rng, 2, 16);
  const std::size_t n_y = Between(rng, 2, 4);
  const std::size_t n_env = Between(rng, min_env, max_env);
  const double smoothness = rng.Uniform();
  envbench::DiscreteWorldOptions opt;
  opt.balanced = balanced;
  opt.sparsity = rng.Uniform() < 0.5 ? 0.0 : 0.3;
  return envbench::MakeDiscreteWorld(n_x, n_z, n_y, n_env, rng(), smoothness, opt);
}

void Track(SuiteSummary& s, double slack, bool holds) {
  if (s.instances == 0) {
    s.worst_slack = slack;
  } else {
    s.worst_slack = std::min(s.worst_slack, slack);
  }
  ++s.instances;
  if (!holds) ++s.violations;
}

}  // namespace

double SuiteSummary::Extra(const std::string& key) const {
  for (const auto& [k, v] : extra) {
    if (k == key) return v;
  }
  throw std::out_of_range("SuiteSummary: no entry '" + key + "'");
}

SuiteSummary RunTheorem1Suite(std::size_t count, std::uint64_t seed,
                              std::ostream* csv) {
  SuiteSummary s;
  s.name = "theorem1";
  std::optional<CsvWriter> out;
  if (csv != nullptr) {
    out.emplace(*csv);
    out->Header({"instance", "n_x", "n_z", "n_y", "n_sources", "lhs",
                 "avg_source_ber", "kappa", "alpha_tv", "epsilon", "rhs_total",
                 "slack", "holds"});
  }
  const CounterRng base(seed);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng = base.Fork(k);
    const auto world = RandomWorld(rng, 2, 5, false);
    std::vector<int> h(world.n_z);
    for (int& c : h) c = static_cast<int>(rng.Index(world.n_y));
    const BoundReport r = Theorem1Verify(world, h);
    Track(s, r.slack, r.holds);
    if (out) {
      out->Field(k).Field(world.n_x).Field(world.n_z).Field(world.n_y)
          .Field(world.num_sources()).Field(r.lhs);
      for (const auto& term : r.rhs_terms) out->Field(term.second);
      out->Field(r.slack).Field(r.holds ? 1 : 0);
      out->EndRow();
    }
  }
  return s;
}

SuiteSummary RunLemma1Suite(std::size_t count, std::uint64_t seed,
                            std::ostream* csv) {
  SuiteSummary s;
  s.name = "lemma1";
  std::optional<CsvWriter> out;
  if (csv != nullptr) {
    out.emplace(*csv);
    out->Header({"instance", "n_x", "n_z", "n_y", "n_env", "kappa",
                 "label_cond_gap", "c_plus_kappa", "marginal_gap", "label_gap_l1",
                 "marginal_gap_l1", "slack", "holds", "holds_l1"});
  }
  std::size_t violations_l1 = 0;
  const CounterRng base(seed);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng = base.Fork(k);
    const auto world = RandomWorld(rng, 2, 5, true);
    const Lemma1Report r = Lemma1Verify(world);
    const double slack = std::min(r.label_slack, r.marginal_slack);
    Track(s, slack, r.holds);
    if (!r.holds_l1) ++violations_l1;
    if (out) {
      out->Field(k).Field(world.n_x).Field(world.n_z).Field(world.n_y)
          .Field(world.n_env).Field(r.kappa).Field(r.label_cond_gap)
          .Field(r.c_plus_kappa).Field(r.marginal_gap).Field(r.label_gap_l1)
          .Field(r.marginal_gap_l1).Field(slack).Field(r.holds ? 1 : 0)
          .Field(r.holds_l1 ? 1 : 0);
      out->EndRow();
    }
  }
  s.extra.emplace_back("violations_l1", static_cast<double>(violations_l1));
  return s;
}

SuiteSummary RunSdpiSuite(std::size_t count, std::uint64_t seed,
                          std::ostream* csv) {
  SuiteSummary s;
  s.name = "sdpi";
  std::optional<CsvWriter> out;
  if (csv != nullptr) {
    out.emplace(*csv);
    out->Header({"instance", "n_x", "n_z", "tv_in", "alpha", "tv_out", "rhs",
                 "slack", "holds"});
  }
  const CounterRng base(seed);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng = base.Fork(k);
    const auto world = RandomWorld(rng, 2, 2, false);
    const double sparsity = rng.Uniform() < 0.5 ? 0.0 : 0.4;
    const auto p0 = RandomDistribution(world.n_x, sparsity, rng);
    const auto p1 = RandomDistribution(world.n_x, sparsity, rng);
    const SdpiReport r = SdpiVerify(world, p0, p1);
    Track(s, r.slack, r.holds);
    if (out) {
      out->Field(k).Field(world.n_x).Field(world.n_z).Field(r.tv_in)
          .Field(r.alpha).Field(r.tv_out).Field(r.rhs).Field(r.slack)
          .Field(r.holds ? 1 : 0);
      out->EndRow();
    }
  }
  double gap = 0.0, alpha_min = 1.0;
  CounterRng rng = base.Fork(count);
  for (std::size_t n = 2; n <= 16; ++n) {
    const auto p0 = RandomDistribution(n, 0.0, rng);
    const auto p1 = RandomDistribution(n, 0.0, rng);
    const SdpiReport r = SdpiVerify(Tensor::Identity(n), p0, p1);
    gap = std::max(gap, std::abs(r.tv_out - r.tv_in));
    alpha_min = std::min(alpha_min, r.alpha);
  }
  s.extra.emplace_back("identity_max_gap", gap);
  s.extra.emplace_back("identity_alpha_min", alpha_min);
  return s;
}

SuiteSummary RunLemma2Suite(std::size_t count, std::uint64_t seed,
                            std::size_t mc_samples, std::ostream* csv) {
  SuiteSummary s;
  s.name = "lemma2";
  std::optional<CsvWriter> out;
  if (csv != nullptr) {
    out.emplace(*csv);
    out->Header({"instance", "d", "d_in", "sigma", "d_max", "l_true", "l_hat",
                 "tv_mc", "tv_exact", "bound", "bound_without_d", "slack",
                 "holds", "holds_without_d"});
  }
  std::size_t violations_d1 = 0, violations_without_d = 0;
  double max_excess = -std::numeric_limits<double>::infinity();
  const CounterRng base(seed);
  for (std::size_t k = 0; k < count; ++k) {
    CounterRng rng = base.Fork(k);
    const std::size_t d = Between(rng, 1, 4);
    const std::size_t d_in = Between(rng, 1, 4);
    std::normal_distribution<double> normal(0.0, 1.0);
    GaussianChannelConfig cfg;
    cfg.a = Tensor(d, d_in);
    for (double& v : cfg.a.data()) v = normal(rng);
    cfg.sigma = UniformIn(rng, 0.25, 2.0);
    cfg.box = UniformIn(rng, 0.25, 2.0);
    const Lemma2Report r = Lemma2Verify(cfg, 3, mc_samples, rng());
    Track(s, r.slack, r.holds);
    if (!r.holds && r.d == 1) ++violations_d1;
    if (!r.holds_without_d) ++violations_without_d;
    max_excess = std::max(max_excess, r.tv_mc - r.bound);
    if (out) {
      out->Field(k).Field(r.d).Field(r.d_in).Field(r.sigma).Field(r.d_max)
          .Field(r.l_true).Field(r.l_hat).Field(r.tv_mc).Field(r.tv_exact)
          .Field(r.bound).Field(r.bound_without_d).Field(r.slack)
          .Field(r.holds ? 1 : 0).Field(r.holds_without_d ? 1 : 0);
      out->EndRow();
    }
  }
  s.extra.emplace_back("violations_d1", static_cast<double>(violations_d1));
  s.extra.emplace_back("violations_without_d",
                       static_cast<double>(violations_without_d));
  s.extra.emplace_back("max_excess", max_excess);
  return s;
}

void WriteSuiteSummaries(std::ostream& os, const std::vector<SuiteSummary>& suites) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SuiteSummary& s : suites) {
    nlohmann::ordered_json obj;
    obj["suite"] = s.name;
    obj["instances"] = s.instances;
    obj["holds"] = s.instances - s.violations;
    obj["violations"] = s.violations;
    obj["worst_slack"] = FormatNumber(s.worst_slack, 12);
    for (const auto& [k, v] : s.extra) obj[k] = FormatNumber(v, 12);
    doc.push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace invgen::theory
