// invgen/experiments/runners.cpp

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

#include "invgen/experiments/runners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "invgen/common/format.hpp"
#include "invgen/envbench/worlds.hpp"
#include "invgen/theory/suites.hpp"
#include "invgen/trainer/train.hpp"

namespace invgen::experiments {

using envbench::Environment;

namespace {

double AnalyticBer(const Environment& env) {
  std::vector<int> preds(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double z = envbench::CounterexamplePhi(env.xs(i, 0));
    preds[i] = envbench::CounterexampleH(z) > 0 ? 1 : 0;
  }
  return invariance::BerFromPredictions(env.ys, preds, 2);
}

}  // namespace

Report RunCounterexample(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  std::vector<double> eps = spec.epsilons;
  std::sort(eps.begin(), eps.end());
  const double tol = 2.0 / std::sqrt(static_cast<double>(spec.counter_n));

  std::ostringstream os, md;
  CsvWriter csv(os);
  csv.Header({"epsilon", "model", "ber_s1", "ber_s2", "ber_t", "population_ber_t"});
  md << "## BER on (S1, S2, T)\n\n| epsilon | model | S1 | S2 | T |\n|---|---|---|---|---|\n";
  bool sources_zero = true, within = true, monotone = true;
  double worst_dev = 0.0, prev_t = -1.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const auto envs = envbench::MakeCounterexampleEnvs(spec.counter_n, eps[k],
                                                       DeriveSeed(spec.seed, {8, k}));
    const double pop = envbench::CounterexamplePopulationBer(envs.t);
    const double a1 = AnalyticBer(envs.s1), a2 = AnalyticBer(envs.s2), at = AnalyticBer(envs.t);
    sources_zero = sources_zero && a1 == 0.0 && a2 == 0.0;
    worst_dev = std::max(worst_dev, std::abs(at - eps[k]));
    within = within && std::abs(at - eps[k]) <= tol;
    monotone = monotone && at >= prev_t;
    prev_t = at;

    trainer::TrainConfig cfg = spec.train;
    cfg.grid_lambda0.clear();
    cfg.grid_lambda1.clear();
    cfg.grid_lr.clear();
    cfg.objective.criterion = invariance::Criterion::kErm;
    cfg.objective.lambda1 = 0.0;
    cfg.steps = spec.counter_steps;
    cfg.seed = DeriveSeed(spec.seed, {9, k});
    const std::vector<Environment> sources{envs.s1, envs.s2};
    const auto model = trainer::Train(sources, cfg);
    const double t1 = invariance::BerEval(model.h, model.phi, envs.s1);
    const double t2 = invariance::BerEval(model.h, model.phi, envs.s2);
    const double tt = invariance::BerEval(model.h, model.phi, envs.t);

    csv.Field(eps[k]).Field("analytic").Field(a1).Field(a2).Field(at).Field(pop);
    csv.EndRow();
    csv.Field(eps[k]).Field("trained_erm").Field(t1).Field(t2).Field(tt).Field("");
    csv.EndRow();
    for (const auto& [name, b1, b2, bt] :
         {std::tuple{"analytic", a1, a2, at}, std::tuple{"trained ERM", t1, t2, tt}}) {
      md << "| " << FormatNumber(eps[k], 4) << " | " << name << " | " << FormatNumber(b1, 4)
         << " | " << FormatNumber(b2, 4) << " | " << FormatNumber(bt, 4) << " |\n";
    }
  }
  rep.AddFile("counterexample.csv", os.str());
  rep.table_md = md.str();

  Check zero;
  zero.name = "analytic_source_ber_zero";
  zero.passed = sources_zero;
  zero.detail = sources_zero ? "exactly 0 on S1 and S2" : "non-zero source BER";
  Check dev;
  dev.name = "analytic_test_ber";
  dev.passed = within;
  dev.detail = "max |BER_T - eps| = " + FormatNumber(worst_dev, 4) + " (need <= " +
               FormatNumber(tol, 4) + ")";
  Check mono;
  mono.name = "test_ber_monotone";
  mono.passed = monotone;
  mono.detail = monotone ? "non-decreasing in eps" : "not monotone";
  rep.checks = {zero, dev, mono};
  return rep;
}

Report RunTheorySuite(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  std::ostringstream t1_os, l1_os, sd_os, l2_os, json_os;
  std::vector<theory::SuiteSummary> suites;
  suites.push_back(theory::RunTheorem1Suite(spec.counts[0], DeriveSeed(spec.seed, {1}), &t1_os));
  suites.push_back(theory::RunLemma1Suite(spec.counts[1], DeriveSeed(spec.seed, {2}), &l1_os));
  suites.push_back(theory::RunSdpiSuite(spec.counts[2], DeriveSeed(spec.seed, {3}), &sd_os));
  suites.push_back(theory::RunLemma2Suite(spec.counts[3], DeriveSeed(spec.seed, {4}),
                                          spec.mc_samples, &l2_os));
  theory::WriteSuiteSummaries(json_os, suites);
  rep.AddFile("theorem1.csv", t1_os.str());
  rep.AddFile("lemma1.csv", l1_os.str());
  rep.AddFile("sdpi.csv", sd_os.str());
  rep.AddFile("lemma2.csv", l2_os.str());
  rep.AddFile("theory_summary.json", json_os.str());

  std::ostringstream md;
  md << "## Bound suites\n\n| suite | instances | violations | worst slack |\n|---|---|---|---|\n";
  for (const auto& s : suites) {
    md << "| " << s.name << " | " << s.instances << " | " << s.violations << " | "
       << FormatNumber(s.worst_slack, 6) << " |\n";
    Check c;
    c.name = s.name + "_violations";
    c.passed = s.violations == 0;
    c.detail = std::to_string(s.violations) + " of " + std::to_string(s.instances);
    for (const auto& [key, value] : s.extra) c.detail += "; " + key + " " + FormatNumber(value, 6);
    rep.checks.push_back(c);
  }
  rep.table_md = md.str();
  Check eq;
  eq.name = "sdpi_identity_equality";
  eq.passed = suites[2].Extra("identity_max_gap") <= 1e-12;
  eq.detail = "max |tv_out - tv_in| on identity channels " +
              FormatNumber(suites[2].Extra("identity_max_gap"), 6);
  rep.checks.push_back(eq);
  const auto& l2 = suites.back();
  if (l2.violations > 0) {
    rep.notes.push_back(
        "The Gaussian channel bound with the 1/d factor is exceeded on " +
        std::to_string(l2.violations) + " configurations, " +
        FormatNumber(l2.Extra("violations_d1"), 6) + " of them with d = 1; without the 1/d "
        "factor there are " + FormatNumber(l2.Extra("violations_without_d"), 6) +
        " violations.");
  }
  return rep;
}

Report RunExperiment(const ExperimentSpec& spec) {
  spec.Validate();
  switch (spec.kind) {
    case Kind::kColorMnistTable:
      return RunColorMnistTable(spec);
    case Kind::kLambdaSweep:
      return RunLambdaSweep(spec);
    case Kind::kPtSweep:
      return RunPtSweep(spec);
    case Kind::kCounterexample:
      return RunCounterexample(spec);
    case Kind::kTheorySuite:
      return RunTheorySuite(spec);
    case Kind::kTaylorCheck:
      return RunTaylorCheck(spec);
    case Kind::kEvolution:
      return RunEvolution(spec);
  }
  throw std::logic_error("RunExperiment: invalid kind");
}

}  // namespace invgen::experiments
