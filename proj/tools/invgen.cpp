// invgen/tools/invgen.cpp

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

// Experiment runner.
//
//   invgen run <spec-file> [--check] [--out DIR] [--seed N]
//   invgen verify-theory [--counts a,b,c,d] [--seed N] [--out DIR] [--check]
//   invgen selftest [--seed N] [--triples N]
//
// Exit codes: 0 success, 1 internal error, 2 configuration error, 3 failed
// check, 4 data-file error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "invgen/common/error.hpp"
#include "invgen/common/format.hpp"
#include "invgen/experiments/config.hpp"
#include "invgen/experiments/runners.hpp"
#include "invgen/experiments/selftest.hpp"

namespace {

using namespace invgen;
using namespace invgen::experiments;

constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;
constexpr int kExitData = 4;

void PrintChecks(const Report& rep) {
  for (const Check& c : rep.checks) {
    std::cout << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
}

int Finish(const Report& rep, const std::string& out_dir, bool check) {
  WriteReport(rep, out_dir);
  PrintChecks(rep);
  std::cout << "wrote " << rep.files.size() + 1 << " files to " << out_dir << "\n";
  return check && !rep.Passed() ? kExitCheck : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invgen: invariant-representation experiments and bound checks"};
  app.require_subcommand(1);

  std::string spec_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool check = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a spec file");
  run->add_option("spec", spec_path, "INI spec file")->required();
  run->add_flag("--check", check, "Exit with code 3 when a threshold check fails");
  run->add_option("--out", out_dir, "Output directory (overrides experiment.output_dir)");
  run->add_option("--seed", seed, "Seed (overrides experiment.seed)");

  std::string counts;
  auto* verify = app.add_subcommand("verify-theory", "Run the four bound suites");
  verify->add_option("--counts", counts, "Instances per suite: theorem1,lemma1,sdpi,lemma2");
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--out", out_dir, "Also write CSVs and summary.md here");
  verify->add_flag("--check", check, "Exit with code 3 on any violation");

  std::size_t triples = 100;
  auto* self = app.add_subcommand("selftest", "Finite-difference gradient certification");
  self->add_option("--seed", seed, "Seed");
  self->add_option("--triples", triples, "Random triples per loss family")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      ExperimentSpec spec = LoadSpec(spec_path);
      if (seed) spec.seed = *seed;
      if (!out_dir.empty()) spec.output_dir = out_dir;
      return Finish(RunExperiment(spec), spec.output_dir, check);
    }
    if (*verify) {
      ExperimentSpec spec;
      spec.kind = Kind::kTheorySuite;
      if (seed) spec.seed = *seed;
      if (!counts.empty()) {
        const auto c = ParseNumberList(counts);
        if (c.size() != 4) throw ConfigError("--counts needs four values");
        for (std::size_t i = 0; i < 4; ++i) {
          if (!(c[i] >= 1.0) || c[i] != static_cast<double>(static_cast<std::size_t>(c[i]))) {
            throw ConfigError("--counts values must be positive integers");
          }
          spec.counts[i] = static_cast<std::size_t>(c[i]);
        }
      }
      spec.Validate();
      const Report rep = RunExperiment(spec);
      std::cout << rep.File("theory_summary.json");
      if (!out_dir.empty()) WriteReport(rep, out_dir);
      PrintChecks(rep);
      return check && !rep.Passed() ? kExitCheck : 0;
    }
    const SelftestResult res = RunSelftest(seed.value_or(0), triples);
    PrintSelftest(std::cout, res);
    return res.Passed() ? 0 : kExitCheck;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
