// invgen/experiments/runners.hpp

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

#ifndef INVGEN_EXPERIMENTS_RUNNERS_HPP_
#define INVGEN_EXPERIMENTS_RUNNERS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>

#include "invgen/experiments/config.hpp"
#include "invgen/experiments/report.hpp"

namespace invgen::experiments {

// Each runner is a pure function of the spec (and the MNIST files when
// data.source = mnist). Model selection only ever sees observed
// environments; held-out and test environments are drawn from a separate
// digit pool.

/// Held-out grid: per (held-out env, method), mean and std over `repeats`.
/// Files: table.csv, table_runs.csv, selection.csv.
Report RunColorMnistTable(const ExperimentSpec& spec);

/// Accuracy versus lambda1 per held-out env. Files: lambda_sweep.csv,
/// lambda_sweep_flags.csv.
Report RunLambdaSweep(const ExperimentSpec& spec);

/// Trains on every data.p_s env, tests on each p_t env. Files:
/// pt_sweep.csv, pt_observed.csv, selection.csv.
Report RunPtSweep(const ExperimentSpec& spec);

/// Analytic phi/h and a trained ERM model on (S1, S2, T(eps)). Files:
/// counterexample.csv.
Report RunCounterexample(const ExperimentSpec& spec);

/// The four randomized bound suites. Files: theorem1.csv, lemma1.csv,
/// sdpi.csv, lemma2.csv, theory_summary.json.
Report RunTheorySuite(const ExperimentSpec& spec);

/// Second-order expansion of the augmented logistic loss on virtual-sample
/// clouds. Files: taylor.csv.
Report RunTaylorCheck(const ExperimentSpec& spec);

/// Jacobian-norm curves of a lambda1 = 0 and a lambda1 > 0 run. Files:
/// evolution.csv, history_base.csv, history_reg.csv.
Report RunEvolution(const ExperimentSpec& spec);

Report RunExperiment(const ExperimentSpec& spec);

}  // namespace invgen::experiments

#endif  // INVGEN_EXPERIMENTS_RUNNERS_HPP_
