// invgen/experiments/selftest.hpp

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

#ifndef INVGEN_EXPERIMENTS_SELFTEST_HPP_
#define INVGEN_EXPERIMENTS_SELFTEST_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace invgen::experiments {

struct SelftestFamily {
  std::string name;
  std::size_t triples = 0;
  double max_error = 0.0;  // worst FiniteDiffCheck value
  double threshold = 0.0;
  bool passed = false;
};

struct SelftestResult {
  std::vector<SelftestFamily> families;
  bool Passed() const;
};

/// Analytic gradients against central differences on random (network,
/// input, loss) triples for cross_entropy, balanced_risk, dann_reversal,
/// cdann, irm_penalty and jacobian_penalty. First-order families must stay
/// below 1e-5, the two second-order ones below 1e-4.
SelftestResult RunSelftest(std::uint64_t seed = 0, std::size_t triples = 100,
                           double step = 1e-5);

void PrintSelftest(std::ostream& os, const SelftestResult& result);

}  // namespace invgen::experiments

#endif  // INVGEN_EXPERIMENTS_SELFTEST_HPP_
