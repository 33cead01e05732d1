// invgen/experiments/config.cpp

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

#include "invgen/experiments/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "invgen/common/error.hpp"
#include "invgen/common/format.hpp"

namespace invgen::experiments {

using invariance::Criterion;

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 7> kKinds{{
    {Kind::kColorMnistTable, "colormnist_table"},
    {Kind::kLambdaSweep, "lambda_sweep"},
    {Kind::kPtSweep, "pt_sweep"},
    {Kind::kCounterexample, "counterexample"},
    {Kind::kTheorySuite, "theory_suite"},
    {Kind::kTaylorCheck, "taylor_check"},
    {Kind::kEvolution, "evolution"},
}};

double Number(const std::string& key, const std::string& text) {
  try {
    return ParseNumber(text);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
}

std::size_t Count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::size_t> CountList(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& f : SplitTrimmed(text, ',')) out.push_back(Count(key, f));
  return out;
}

std::vector<double> NumberList(const std::string& key, const std::string& text) {
  try {
    return ParseNumberList(text);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

using Setter = std::function<void(ExperimentSpec&, const std::string& key,
                                  const std::string& value)>;
using SectionTable = std::map<std::string, std::map<std::string, Setter>>;

const SectionTable& Table() {
  static const SectionTable table = [] {
    SectionTable t;
    auto& ex = t["experiment"];
    ex["kind"] = [](ExperimentSpec& s, auto&, auto& v) { s.kind = ParseKind(v); };
    ex["seed"] = [](ExperimentSpec& s, auto& k, auto& v) { s.seed = Count(k, v); };
    ex["output_dir"] = [](ExperimentSpec& s, auto&, auto& v) { s.output_dir = v; };

    auto& d = t["data"];
    d["source"] = [](ExperimentSpec& s, auto&, auto& v) { s.data.source = v; };
    d["mnist_dir"] = [](ExperimentSpec& s, auto&, auto& v) { s.data.mnist_dir = v; };
    d["base_size"] = [](ExperimentSpec& s, auto& k, auto& v) { s.data.base_size = Count(k, v); };
    d["n_per_env"] = [](ExperimentSpec& s, auto& k, auto& v) { s.data.n_per_env = Count(k, v); };
    d["test_size"] = [](ExperimentSpec& s, auto& k, auto& v) { s.data.test_size = Count(k, v); };
    d["label_noise"] = [](ExperimentSpec& s, auto& k, auto& v) { s.data.label_noise = Number(k, v); };
    d["p_s"] = [](ExperimentSpec& s, auto& k, auto& v) { s.data.p_s = NumberList(k, v); };

    auto& tr = t["train"];
    tr["criterion"] = [](ExperimentSpec& s, auto& k, auto& v) {
      try {
        s.train.objective.criterion = invariance::ParseCriterion(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k + ": " + e.what());
      }
    };
    tr["optimizer"] = [](ExperimentSpec& s, auto& k, auto& v) {
      try {
        s.train.optimizer.kind = trainer::ParseOptimizer(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k + ": " + e.what());
      }
    };
    tr["lr"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.optimizer.lr = Number(k, v); };
    tr["beta1"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.optimizer.beta1 = Number(k, v); };
    tr["beta2"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.optimizer.beta2 = Number(k, v); };
    tr["eps"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.optimizer.eps = Number(k, v); };
    tr["batch_size"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.batch_size = Count(k, v); };
    tr["steps"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.steps = Count(k, v); };
    tr["log_every"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.log_every = Count(k, v); };
    tr["val_fraction"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.val_fraction = Number(k, v); };
    tr["lambda0"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.objective.lambda0 = Number(k, v); };
    tr["lambda1"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.objective.lambda1 = Number(k, v); };
    tr["beta"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.objective.beta = Number(k, v); };
    tr["virtual_samples"] = [](ExperimentSpec& s, auto& k, auto& v) {
      s.train.objective.virtual_samples = Count(k, v);
    };
    tr["hidden"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.hidden = Count(k, v); };
    tr["latent"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.latent = Count(k, v); };
    tr["head_hidden"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.head_hidden = Count(k, v); };
    tr["disc_hidden"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.disc_hidden = Count(k, v); };
    tr["probe_size"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.probe_size = Count(k, v); };
    tr["grid_lambda0"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.grid_lambda0 = NumberList(k, v); };
    tr["grid_lambda1"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.grid_lambda1 = NumberList(k, v); };
    tr["grid_lr"] = [](ExperimentSpec& s, auto& k, auto& v) { s.train.grid_lr = NumberList(k, v); };

    Setter held_out = [](ExperimentSpec& s, auto& k, auto& v) { s.held_out = CountList(k, v); };
    Setter repeats = [](ExperimentSpec& s, auto& k, auto& v) { s.repeats = Count(k, v); };

    auto& tb = t["table"];
    tb["methods"] = [](ExperimentSpec& s, auto&, auto& v) {
      s.methods.clear();
      for (const std::string& m : SplitTrimmed(v, ',')) s.methods.push_back(ParseMethod(m));
    };
    tb["repeats"] = repeats;
    tb["held_out"] = held_out;
    tb["min_reg_gain"] = [](ExperimentSpec& s, auto& k, auto& v) { s.min_reg_gain = Number(k, v); };

    auto& ls = t["lambda_sweep"];
    ls["grid"] = [](ExperimentSpec& s, auto& k, auto& v) { s.lambda_grid = NumberList(k, v); };
    ls["repeats"] = repeats;
    ls["held_out"] = held_out;

    auto& pt = t["pt_sweep"];
    pt["p_t"] = [](ExperimentSpec& s, auto& k, auto& v) { s.p_t = NumberList(k, v); };
    pt["min_wins"] = [](ExperimentSpec& s, auto& k, auto& v) { s.min_pt_wins = Count(k, v); };
    pt["min_observed_acc"] = [](ExperimentSpec& s, auto& k, auto& v) {
      s.min_observed_acc = Number(k, v);
    };

    auto& ce = t["counterexample"];
    ce["epsilons"] = [](ExperimentSpec& s, auto& k, auto& v) { s.epsilons = NumberList(k, v); };
    ce["n"] = [](ExperimentSpec& s, auto& k, auto& v) { s.counter_n = Count(k, v); };
    ce["steps"] = [](ExperimentSpec& s, auto& k, auto& v) { s.counter_steps = Count(k, v); };

    auto& th = t["theory"];
    th["counts"] = [](ExperimentSpec& s, auto& k, auto& v) {
      const auto c = CountList(k, v);
      if (c.size() != 4) throw ConfigError(k + ": expected four counts");
      std::copy(c.begin(), c.end(), s.counts.begin());
    };
    th["mc_samples"] = [](ExperimentSpec& s, auto& k, auto& v) { s.mc_samples = Count(k, v); };

    auto& ty = t["taylor"];
    ty["instances"] = [](ExperimentSpec& s, auto& k, auto& v) { s.taylor_instances = Count(k, v); };
    ty["cloud"] = [](ExperimentSpec& s, auto& k, auto& v) { s.taylor_cloud = Count(k, v); };
    ty["shrink"] = [](ExperimentSpec& s, auto& k, auto& v) { s.taylor_shrink = Number(k, v); };
    ty["max_remainder"] = [](ExperimentSpec& s, auto& k, auto& v) {
      s.max_taylor_remainder = Number(k, v);
    };

    auto& ev = t["evolution"];
    ev["lambda1"] = [](ExperimentSpec& s, auto& k, auto& v) { s.evolution_lambda1 = Number(k, v); };
    ev["max_jfro_ratio"] = [](ExperimentSpec& s, auto& k, auto& v) {
      s.max_jfro_ratio = Number(k, v);
    };
    return t;
  }();
  return table;
}

void RequireProbability(const std::vector<double>& ps, const char* what) {
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(what) + ": values must lie in [0, 1]");
    }
  }
}

}  // namespace

std::string_view KindName(Kind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "invalid";
}

Kind ParseKind(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::string Method::Name() const {
  return std::string(invariance::CriterionName(criterion)) + (reg ? "+REG" : "");
}

Method ParseMethod(std::string_view name) {
  Method m;
  constexpr std::string_view kSuffix = "+REG";
  if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
    m.reg = true;
    name.remove_suffix(kSuffix.size());
  }
  try {
    m.criterion = invariance::ParseCriterion(name);
  } catch (const std::invalid_argument&) {
    throw ConfigError("unknown method '" + std::string(name) + "'");
  }
  return m;
}

std::vector<double> ParseNumberList(std::string_view text) {
  std::vector<double> out;
  for (const std::string& f : SplitTrimmed(text, ',')) {
    try {
      out.push_back(ParseNumber(f));
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + f + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

void ExperimentSpec::Validate() const {
  try {
    train.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[train] ") + e.what());
  }
  if (data.source != "surrogate" && data.source != "mnist") {
    throw ConfigError("data.source must be surrogate or mnist");
  }
  if (!(data.label_noise >= 0.0 && data.label_noise <= 1.0)) {
    throw ConfigError("data.label_noise must lie in [0, 1]");
  }
  RequireProbability(data.p_s, "data.p_s");
  for (double l : train.grid_lambda1) {
    if (!(l >= 0.0)) throw ConfigError("train.grid_lambda1 must be >= 0");
  }
  for (double l : train.grid_lr) {
    if (!(l >= 0.0)) throw ConfigError("train.grid_lr must be >= 0");
  }
  const bool uses_colors = kind == Kind::kColorMnistTable || kind == Kind::kLambdaSweep ||
                           kind == Kind::kPtSweep || kind == Kind::kTaylorCheck ||
                           kind == Kind::kEvolution;
  if (uses_colors && (data.n_per_env < 2 || data.test_size < 2)) {
    throw ConfigError("data.n_per_env and data.test_size must be >= 2");
  }
  switch (kind) {
    case Kind::kColorMnistTable:
    case Kind::kLambdaSweep: {
      if (data.p_s.size() < 2) throw ConfigError("data.p_s needs at least two values");
      if (held_out.empty()) throw ConfigError("held_out is empty");
      for (std::size_t h : held_out) {
        if (h >= data.p_s.size()) throw ConfigError("held_out index out of range");
      }
      if (repeats < 1) throw ConfigError("repeats must be >= 1");
      if (kind == Kind::kColorMnistTable) {
        if (methods.empty()) throw ConfigError("table.methods is empty");
        for (const Method& m : methods) {
          if (m.criterion != Criterion::kErm && data.p_s.size() < 3) {
            throw ConfigError(m.Name() + " needs two observed environments");
          }
          if (m.reg && train.grid_lambda1.empty() && !(train.objective.lambda1 > 0.0)) {
            throw ConfigError(m.Name() + " needs train.grid_lambda1 or lambda1 > 0");
          }
        }
        for (double l : train.grid_lambda1) {
          if (!(l > 0.0)) throw ConfigError("train.grid_lambda1 is for +REG rows; use values > 0");
        }
      } else {
        if (lambda_grid.size() < 4) {
          throw ConfigError("lambda_sweep.grid needs at least 4 points");
        }
        double lo = 0.0, hi = 0.0;
        bool has_zero = false;
        for (double l : lambda_grid) {
          if (!(l >= 0.0)) throw ConfigError("lambda_sweep.grid values must be >= 0");
          if (l == 0.0) {
            has_zero = true;
            continue;
          }
          lo = lo == 0.0 ? l : std::min(lo, l);
          hi = std::max(hi, l);
        }
        if (!has_zero) throw ConfigError("lambda_sweep.grid must include 0");
        if (lo == 0.0 || hi / lo < 1e3) {
          throw ConfigError("lambda_sweep.grid must span at least 3 decades");
        }
      }
      break;
    }
    case Kind::kPtSweep:
      if (data.p_s.size() < 2) throw ConfigError("pt_sweep needs two observed P_S values");
      if (p_t.empty()) throw ConfigError("pt_sweep.p_t is empty");
      RequireProbability(p_t, "pt_sweep.p_t");
      if (train.grid_lambda1.empty() && !(train.objective.lambda1 > 0.0)) {
        throw ConfigError("pt_sweep needs train.grid_lambda1 or lambda1 > 0");
      }
      break;
    case Kind::kCounterexample:
      if (epsilons.empty()) throw ConfigError("counterexample.epsilons is empty");
      for (double e : epsilons) {
        if (!(e > 0.0 && e < 0.5)) throw ConfigError("counterexample epsilons must lie in (0, 0.5)");
      }
      if (counter_n < 2) throw ConfigError("counterexample.n must be >= 2");
      break;
    case Kind::kTheorySuite:
      for (std::size_t c : counts) {
        if (c < 1) throw ConfigError("theory.counts must all be >= 1");
      }
      if (mc_samples < 1) throw ConfigError("theory.mc_samples must be >= 1");
      break;
    case Kind::kTaylorCheck:
      if (taylor_instances < 1 || taylor_cloud < 2) {
        throw ConfigError("taylor.instances >= 1 and taylor.cloud >= 2 required");
      }
      if (!(taylor_shrink > 0.0 && taylor_shrink <= 1.0)) {
        throw ConfigError("taylor.shrink must lie in (0, 1]");
      }
      break;
    case Kind::kEvolution:
      if (!(evolution_lambda1 > 0.0)) throw ConfigError("evolution.lambda1 must be > 0");
      if (data.p_s.size() < 2) throw ConfigError("evolution needs two observed P_S values");
      break;
  }
}

ExperimentSpec ParseSpec(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  }
  ExperimentSpec spec;
  bool has_kind = false;
  const SectionTable& table = Table();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("key '" + section + "' outside a section");
    }
    const auto sec = table.find(section);
    if (sec == table.end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
      setter->second(spec, section + "." + key, node.data());
      if (section == "experiment" && key == "kind") has_kind = true;
    }
  }
  if (!has_kind) throw ConfigError("missing experiment.kind");
  spec.Validate();
  return spec;
}

ExperimentSpec LoadSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file '" + path + "'");
  return ParseSpec(in);
}

}  // namespace invgen::experiments
