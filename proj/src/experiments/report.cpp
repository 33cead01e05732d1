// invgen/experiments/report.cpp

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

#include "invgen/experiments/report.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "invgen/common/error.hpp"
#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"

namespace invgen::experiments {

void Report::AddFile(std::string name, std::string content) {
  for (const auto& f : files) {
    if (f.first == name) throw std::logic_error("Report: duplicate file " + name);
  }
  files.emplace_back(std::move(name), std::move(content));
}

const std::string& Report::File(const std::string& name) const {
  for (const auto& f : files) {
    if (f.first == name) return f.second;
  }
  throw std::out_of_range("Report: no file " + name);
}

const Check& Report::GetCheck(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("Report: no check " + name);
}

bool Report::Passed() const {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string Report::Summary() const {
  std::ostringstream os;
  os << "# invgen " << KindName(kind) << "\n\nseed: " << seed << "\n\n";
  if (!table_md.empty()) os << table_md << "\n";
  os << "## Checks\n\n| check | result | detail |\n|---|---|---|\n";
  for (const Check& c : checks) {
    os << "| " << c.name << " | " << (c.passed ? "pass" : "FAIL") << " | " << c.detail
       << " |\n";
  }
  os << "\n## Files\n\n";
  for (const auto& f : files) os << "- " << f.first << "\n";
  for (const std::string& n : notes) os << "\n" << n << "\n";
  os << "\nOnly the trend checks above are targets. Absolute accuracies depend on "
        "the network and data source and are not expected to match published "
        "convolutional baselines.\n";
  return os.str();
}

void WriteReport(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output_dir '" + dir + "': " + ec.message());
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw ConfigError("cannot write " + path.string());
  };
  for (const auto& [name, content] : report.files) write(name, content);
  write("summary.md", report.Summary());
}

std::uint64_t DeriveSeed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  CounterRng rng(base);
  for (std::uint64_t p : path) rng = rng.Fork(p);
  return rng.key();
}

std::string MnistDir(const ColorData& data) {
  if (const char* env = std::getenv("INVGEN_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return data.mnist_dir;
}

ColorPools LoadColorPools(const ColorData& data, std::uint64_t seed) {
  ColorPools pools;
  if (data.source == "mnist") {
    const std::filesystem::path dir = MnistDir(data);
    if (dir.empty()) throw DataError("mnist source needs INVGEN_DATA_DIR or data.mnist_dir");
    pools.train = envbench::LoadIdx((dir / "train-images-idx3-ubyte").string(),
                                    (dir / "train-labels-idx1-ubyte").string());
    pools.test = envbench::LoadIdx((dir / "t10k-images-idx3-ubyte").string(),
                                   (dir / "t10k-labels-idx1-ubyte").string());
    return pools;
  }
  pools.train = envbench::MakeSurrogateDigits(data.base_size, DeriveSeed(seed, {1}));
  pools.test = envbench::MakeSurrogateDigits(data.base_size, DeriveSeed(seed, {2}));
  return pools;
}

std::vector<envbench::Environment> MakeColorEnvs(const envbench::DigitSet& pool,
                                                 const ColorData& data,
                                                 const std::vector<double>& p_s,
                                                 std::size_t n, std::uint64_t seed) {
  std::vector<envbench::Environment> envs;
  envs.reserve(p_s.size());
  for (std::size_t i = 0; i < p_s.size(); ++i) {
    envs.push_back(envbench::MakeColoredEnv(pool, p_s[i], data.label_noise, n,
                                            DeriveSeed(seed, {i})));
  }
  return envs;
}

std::pair<double, double> MeanStd(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("MeanStd: no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace invgen::experiments
