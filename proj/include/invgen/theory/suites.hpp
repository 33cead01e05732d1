// invgen/theory/suites.hpp

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

#ifndef INVGEN_THEORY_SUITES_HPP_
#define INVGEN_THEORY_SUITES_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace invgen::theory {

/// Outcome of one randomized suite. `extra` carries suite-specific counters
/// in insertion order.
struct SuiteSummary {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst_slack = 0.0;
  std::vector<std::pair<std::string, double>> extra;

  double Extra(const std::string& key) const;
};

// Each suite draws instance k from CounterRng(seed).Fork(k) and, when `csv`
// is non-null, writes a header and one row per instance.

/// Random worlds with n_x, n_z in [2, 16], |Y| in [2, 4], T in [1, 4] and a
/// random decision table.
SuiteSummary RunTheorem1Suite(std::size_t count, std::uint64_t seed,
                              std::ostream* csv = nullptr);

/// Random worlds with uniform label marginals and 2 to 5 environments.
/// extra: violations_l1 (gaps without the 1/2).
SuiteSummary RunLemma1Suite(std::size_t count, std::uint64_t seed,
                            std::ostream* csv = nullptr);

/// Random (channel, P0, P1) triples, plus identity channels of every size
/// in [2, 16]. extra: identity_max_gap (|tv_out - tv_in| on identities),
/// identity_alpha_min.
SuiteSummary RunSdpiSuite(std::size_t count, std::uint64_t seed,
                          std::ostream* csv = nullptr);

/// Random Gaussian channels with linear mean map: d, d_in in [1, 4], a with
/// N(0, 1) entries, sigma and box side uniform in [0.25, 2].
/// extra: violations_d1 (violations among d = 1 configs),
/// violations_without_d, max_excess (largest tv_mc - bound).
SuiteSummary RunLemma2Suite(std::size_t count, std::uint64_t seed,
                            std::size_t mc_samples = 100000,
                            std::ostream* csv = nullptr);

/// Structured text (JSON) with one object per suite.
void WriteSuiteSummaries(std::ostream& os, const std::vector<SuiteSummary>& suites);

}  // namespace invgen::theory

#endif  // INVGEN_THEORY_SUITES_HPP_
