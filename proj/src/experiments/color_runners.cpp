// invgen/experiments/color_runners.cpp

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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"
#include "invgen/diffcore/autodiff.hpp"
#include "invgen/experiments/runners.hpp"
#include "invgen/theory/bounds.hpp"
#include "invgen/theory/distances.hpp"
#include "invgen/trainer/train.hpp"

namespace invgen::experiments {

using diffcore::Tensor;
using envbench::Environment;
using invariance::Criterion;
using trainer::TrainConfig;

namespace {

struct Chosen {
  TrainConfig cfg;
  std::vector<trainer::SelectionRow> rows;
};

// Base rows never see lambda1 > 0; the remaining grids are searched when
// present.
Chosen Choose(std::span<const Environment> observed, TrainConfig cfg, const Method& m,
              std::uint64_t seed) {
  cfg.objective.criterion = m.criterion;
  cfg.seed = seed;
  if (!m.reg) {
    cfg.objective.lambda1 = 0.0;
    cfg.grid_lambda1.clear();
  }
  if (m.criterion == Criterion::kErm) cfg.grid_lambda0.clear();
  Chosen out;
  if (cfg.grid_lambda0.empty() && cfg.grid_lambda1.empty() && cfg.grid_lr.empty()) {
    out.cfg = cfg;
    return out;
  }
  trainer::SelectionResult sel = trainer::ModelSelect(observed, cfg);
  out.cfg = sel.best;
  out.rows = std::move(sel.table);
  return out;
}

TrainConfig Fixed(TrainConfig cfg) {
  cfg.grid_lambda0.clear();
  cfg.grid_lambda1.clear();
  cfg.grid_lr.clear();
  return cfg;
}

double Accuracy(const trainer::TrainedModel& m, const Environment& env) {
  return trainer::Evaluate(m.h, m.phi, env).accuracy_per_class_mean;
}

std::vector<Environment> Without(const std::vector<Environment>& envs, std::size_t skip) {
  std::vector<Environment> out;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (i != skip) out.push_back(envs[i]);
  }
  return out;
}

std::string Fixed1(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 1);
  return ec == std::errc() ? std::string(buf, p) : "nan";
}

std::string Points(double acc) { return Fixed1(100.0 * acc); }

std::string Ps(double p) { return FormatNumber(p, 6); }

void WriteSelection(CsvWriter& csv, const std::string& method, const std::string& scope,
                    const Chosen& ch) {
  for (const auto& row : ch.rows) {
    csv.Field(method).Field(scope).Field(row.lambda0).Field(row.lambda1).Field(row.lr)
        .Field(row.val_ber);
    csv.EndRow();
  }
}

}  // namespace

Report RunColorMnistTable(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  const ColorPools pools = LoadColorPools(spec.data, spec.seed);
  const auto& ps = spec.data.p_s;
  const std::size_t repeats = spec.repeats;

  std::vector<std::vector<Environment>> observed(repeats), tests(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    observed[r] = MakeColorEnvs(pools.train, spec.data, ps, spec.data.n_per_env,
                                DeriveSeed(spec.seed, {3, r}));
    tests[r] = MakeColorEnvs(pools.test, spec.data, ps, spec.data.test_size,
                             DeriveSeed(spec.seed, {4, r}));
  }

  std::ostringstream table_os, runs_os, sel_os;
  CsvWriter table(table_os), runs(runs_os), sel(sel_os);
  table.Header({"method", "held_out_p_s", "acc_mean", "acc_std", "repeats", "lambda0",
                "lambda1", "lr"});
  runs.Header({"method", "held_out_p_s", "repeat", "acc"});
  sel.Header({"method", "held_out_p_s", "lambda0", "lambda1", "lr", "val_ber"});

  const std::size_t n_methods = spec.methods.size();
  std::vector<std::vector<std::pair<double, double>>> cell(n_methods);
  std::vector<double> average(n_methods, 0.0);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    const Method& m = spec.methods[mi];
    const std::string name = m.Name();
    for (std::size_t h : spec.held_out) {
      const Chosen ch = Choose(Without(observed[0], h), spec.train, m,
                               DeriveSeed(spec.seed, {5, mi, h}));
      WriteSelection(sel, name, Ps(ps[h]), ch);
      std::vector<double> accs;
      for (std::size_t r = 0; r < repeats; ++r) {
        TrainConfig cfg = Fixed(ch.cfg);
        cfg.seed = DeriveSeed(spec.seed, {6, mi, h, r});
        const auto model = trainer::Train(Without(observed[r], h), cfg);
        accs.push_back(Accuracy(model, tests[r][h]));
        runs.Field(name).Field(Ps(ps[h])).Field(r).Field(accs.back());
        runs.EndRow();
      }
      const auto ms = MeanStd(accs);
      cell[mi].push_back(ms);
      average[mi] += ms.first / static_cast<double>(spec.held_out.size());
      table.Field(name).Field(Ps(ps[h])).Field(ms.first).Field(ms.second).Field(repeats)
          .Field(ch.cfg.objective.lambda0).Field(ch.cfg.objective.lambda1)
          .Field(ch.cfg.optimizer.lr);
      table.EndRow();
    }
    table.Field(name).Field("average").Field(average[mi]).Field("").Field(repeats)
        .Field("").Field("").Field("");
    table.EndRow();
  }
  rep.AddFile("table.csv", table_os.str());
  rep.AddFile("table_runs.csv", runs_os.str());
  rep.AddFile("selection.csv", sel_os.str());

  std::ostringstream md;
  md << "## Held-out per-class accuracy (%)\n\n| method |";
  for (std::size_t h : spec.held_out) md << " P_S=" << Ps(ps[h]) << " |";
  md << " average |\n|---|";
  for (std::size_t i = 0; i <= spec.held_out.size(); ++i) md << "---|";
  md << "\n";
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    md << "| " << spec.methods[mi].Name() << " |";
    for (const auto& [mean, sd] : cell[mi]) md << " " << Points(mean) << " ± " << Points(sd) << " |";
    md << " " << Points(average[mi]) << " |\n";
  }
  rep.table_md = md.str();

  auto find = [&](Criterion c, bool reg) -> std::optional<std::size_t> {
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      if (spec.methods[mi].criterion == c && spec.methods[mi].reg == reg) return mi;
    }
    return std::nullopt;
  };
  for (Criterion c : {Criterion::kErm, Criterion::kDann, Criterion::kCdann, Criterion::kIrm}) {
    const auto base = find(c, false);
    const auto reg = find(c, true);
    if (!base || !reg) continue;
    const double gain = average[*reg] - average[*base];
    Check chk;
    chk.name = "reg_gain_" + std::string(invariance::CriterionName(c));
    chk.passed = gain >= spec.min_reg_gain;
    chk.detail = Points(average[*base]) + " -> " + Points(average[*reg]) + " (" +
                 (gain >= 0 ? "+" : "") + Points(gain) + " points, need +" +
                 Points(spec.min_reg_gain) + ")";
    rep.checks.push_back(chk);
  }
  const auto erm = find(Criterion::kErm, false);
  const auto irm = find(Criterion::kIrm, false);
  for (std::size_t k = 0; k < spec.held_out.size(); ++k) {
    if (!erm || !irm || std::abs(ps[spec.held_out[k]] - 0.9) > 1e-12) continue;
    const double a_irm = cell[*irm][k].first;
    const double a_erm = cell[*erm][k].first;
    Check chk;
    chk.name = "irm_over_erm_at_0.9";
    chk.passed = a_irm > a_erm;
    chk.detail = "IRM " + Points(a_irm) + " vs ERM " + Points(a_erm);
    rep.checks.push_back(chk);
  }
  return rep;
}

Report RunLambdaSweep(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  const ColorPools pools = LoadColorPools(spec.data, spec.seed);
  const auto& ps = spec.data.p_s;
  std::vector<std::vector<Environment>> observed(spec.repeats), tests(spec.repeats);
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    observed[r] = MakeColorEnvs(pools.train, spec.data, ps, spec.data.n_per_env,
                                DeriveSeed(spec.seed, {3, r}));
    tests[r] = MakeColorEnvs(pools.test, spec.data, ps, spec.data.test_size,
                             DeriveSeed(spec.seed, {4, r}));
  }
  std::vector<double> grid = spec.lambda_grid;
  std::sort(grid.begin(), grid.end());
  const std::size_t g = grid.size();

  std::ostringstream sweep_os, flags_os;
  CsvWriter sweep(sweep_os), flags(flags_os);
  sweep.Header({"held_out_p_s", "lambda1", "acc_mean", "acc_std"});
  flags.Header({"held_out_p_s", "best_lambda1", "best_acc", "acc_at_zero", "acc_at_max",
                "interior_max"});

  auto flag = [&](const std::string& scope, const std::vector<double>& acc) {
    // Interior points exclude 0 and the largest lambda1.
    std::size_t best = 1;
    for (std::size_t i = 2; i + 1 < g; ++i) {
      if (acc[i] > acc[best]) best = i;
    }
    const bool interior = acc[best] > acc[0] && acc[best] > acc[g - 1];
    flags.Field(scope).Field(grid[best]).Field(acc[best]).Field(acc[0]).Field(acc[g - 1])
        .Field(interior ? 1 : 0);
    flags.EndRow();
    return std::make_pair(best, interior);
  };

  std::vector<double> avg(g, 0.0);
  std::ostringstream md;
  md << "## Held-out per-class accuracy (%) by lambda1\n\n| P_S |";
  for (double l : grid) md << " " << FormatNumber(l, 6) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < g; ++i) md << "---|";
  md << "\n";
  for (std::size_t h : spec.held_out) {
    std::vector<double> acc(g);
    md << "| " << Ps(ps[h]) << " |";
    for (std::size_t gi = 0; gi < g; ++gi) {
      std::vector<double> accs;
      for (std::size_t r = 0; r < spec.repeats; ++r) {
        TrainConfig cfg = Fixed(spec.train);
        cfg.objective.lambda1 = grid[gi];
        cfg.seed = DeriveSeed(spec.seed, {7, h, gi, r});
        accs.push_back(Accuracy(trainer::Train(Without(observed[r], h), cfg), tests[r][h]));
      }
      const auto ms = MeanStd(accs);
      acc[gi] = ms.first;
      avg[gi] += ms.first / static_cast<double>(spec.held_out.size());
      sweep.Field(Ps(ps[h])).Field(grid[gi]).Field(ms.first).Field(ms.second);
      sweep.EndRow();
      md << " " << Points(ms.first) << " |";
    }
    md << "\n";
    flag(Ps(ps[h]), acc);
  }
  md << "| average |";
  for (double a : avg) md << " " << Points(a) << " |";
  md << "\n";
  const auto [best, interior] = flag("average", avg);
  rep.AddFile("lambda_sweep.csv", sweep_os.str());
  rep.AddFile("lambda_sweep_flags.csv", flags_os.str());
  rep.table_md = md.str();

  Check chk;
  chk.name = "inverted_u";
  chk.passed = interior;
  chk.detail = "best interior lambda1 " + FormatNumber(grid[best], 6) + ": " +
               Points(avg[best]) + " vs " + Points(avg[0]) + " at 0 and " +
               Points(avg[g - 1]) + " at " + FormatNumber(grid[g - 1], 6);
  rep.checks.push_back(chk);
  return rep;
}

Report RunPtSweep(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  const ColorPools pools = LoadColorPools(spec.data, spec.seed);
  const auto& ps = spec.data.p_s;
  const auto observed = MakeColorEnvs(pools.train, spec.data, ps, spec.data.n_per_env,
                                      DeriveSeed(spec.seed, {3, 0}));
  const auto fresh = MakeColorEnvs(pools.test, spec.data, ps, spec.data.test_size,
                                   DeriveSeed(spec.seed, {4, 1}));
  const auto tests = MakeColorEnvs(pools.test, spec.data, spec.p_t, spec.data.test_size,
                                   DeriveSeed(spec.seed, {4, 0}));
  const Criterion crit = spec.train.objective.criterion;
  const Method base_m{crit, false};
  const Method reg_m{crit, true};
  const Chosen base = Choose(observed, spec.train, base_m, DeriveSeed(spec.seed, {5, 0}));
  const Chosen reg = Choose(observed, spec.train, reg_m, DeriveSeed(spec.seed, {5, 1}));
  TrainConfig base_cfg = Fixed(base.cfg), reg_cfg = Fixed(reg.cfg);
  base_cfg.seed = reg_cfg.seed = DeriveSeed(spec.seed, {6});
  const auto base_model = trainer::Train(observed, base_cfg);
  const auto reg_model = trainer::Train(observed, reg_cfg);

  std::ostringstream sweep_os, obs_os, sel_os;
  CsvWriter sweep(sweep_os), obs(obs_os), sel(sel_os);
  sweep.Header({"p_t", "acc_base", "acc_reg"});
  sel.Header({"method", "held_out_p_s", "lambda0", "lambda1", "lr", "val_ber"});
  WriteSelection(sel, base_m.Name(), "none", base);
  WriteSelection(sel, reg_m.Name(), "none", reg);

  std::ostringstream md;
  md << "## Per-class accuracy (%) by test P_T\n\n| P_T | " << base_m.Name() << " | "
     << reg_m.Name() << " |\n|---|---|---|\n";
  std::size_t wins = 0;
  for (std::size_t i = 0; i < spec.p_t.size(); ++i) {
    const double a = Accuracy(base_model, tests[i]);
    const double b = Accuracy(reg_model, tests[i]);
    if (b >= a) ++wins;
    sweep.Field(spec.p_t[i]).Field(a).Field(b);
    sweep.EndRow();
    md << "| " << Ps(spec.p_t[i]) << " | " << Points(a) << " | " << Points(b) << " |\n";
  }

  // Two readings of "accuracy on the observed environments": the training
  // rows themselves and a fresh draw at the same P_S.
  obs.Header({"p_s", "method", "acc_train_data", "acc_fresh"});
  double min_train = 1.0, min_fresh = 1.0;
  md << "\n## Observed environments (%)\n\n| P_S | method | training data | fresh draw |\n"
        "|---|---|---|---|\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (const auto* m : {&base_model, &reg_model}) {
      const std::string name = m == &base_model ? base_m.Name() : reg_m.Name();
      const double at = Accuracy(*m, observed[i]);
      const double af = Accuracy(*m, fresh[i]);
      min_train = std::min(min_train, at);
      min_fresh = std::min(min_fresh, af);
      obs.Field(ps[i]).Field(name).Field(at).Field(af);
      obs.EndRow();
      md << "| " << Ps(ps[i]) << " | " << name << " | " << Points(at) << " | " << Points(af)
         << " |\n";
    }
  }
  rep.AddFile("pt_sweep.csv", sweep_os.str());
  rep.AddFile("pt_observed.csv", obs_os.str());
  rep.AddFile("selection.csv", sel_os.str());
  rep.table_md = md.str();
  rep.notes.push_back("Selected lambda1 for " + reg_m.Name() + ": " +
                      FormatNumber(reg.cfg.objective.lambda1, 6) + ".");

  Check wins_chk;
  wins_chk.name = "reg_wins";
  wins_chk.passed = wins >= spec.min_pt_wins;
  wins_chk.detail = std::to_string(wins) + " of " + std::to_string(spec.p_t.size()) +
                    " P_T points (need " + std::to_string(spec.min_pt_wins) + ")";
  rep.checks.push_back(wins_chk);
  Check obs_chk;
  obs_chk.name = "observed_accuracy";
  obs_chk.passed = min_train >= spec.min_observed_acc;
  obs_chk.detail = "min on training data " + Points(min_train) + ", fresh draw " +
                   Points(min_fresh) + " (need " + Points(spec.min_observed_acc) + ")";
  rep.checks.push_back(obs_chk);
  return rep;
}

Report RunEvolution(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  const ColorPools pools = LoadColorPools(spec.data, spec.seed);
  const auto observed = MakeColorEnvs(pools.train, spec.data, spec.data.p_s,
                                      spec.data.n_per_env, DeriveSeed(spec.seed, {3, 0}));
  TrainConfig base_cfg = Fixed(spec.train);
  base_cfg.seed = DeriveSeed(spec.seed, {10});
  base_cfg.objective.lambda1 = 0.0;
  TrainConfig reg_cfg = base_cfg;
  reg_cfg.objective.lambda1 = spec.evolution_lambda1;
  const auto base = trainer::Train(observed, base_cfg);
  const auto reg = trainer::Train(observed, reg_cfg);
  const auto& rb = base.history.rows;
  const auto& rr = reg.history.rows;
  if (rb.size() != rr.size() || rb.empty()) {
    throw std::logic_error("RunEvolution: histories are not aligned");
  }

  std::ostringstream evo_os, hb_os, hr_os;
  CsvWriter evo(evo_os);
  evo.Header({"step", "jfro_base", "jfro_reg", "val_ber_base", "val_ber_reg"});
  for (std::size_t i = 0; i < rb.size(); ++i) {
    if (rb[i].step != rr[i].step) throw std::logic_error("RunEvolution: step grids differ");
    evo.Field(rb[i].step).Field(rb[i].jfro).Field(rr[i].jfro).Field(rb[i].val_ber)
        .Field(rr[i].val_ber);
    evo.EndRow();
  }
  trainer::WriteHistoryCsv(hb_os, base.history);
  trainer::WriteHistoryCsv(hr_os, reg.history);
  rep.AddFile("evolution.csv", evo_os.str());
  rep.AddFile("history_base.csv", hb_os.str());
  rep.AddFile("history_reg.csv", hr_os.str());

  const double fb = rb.back().jfro;
  const double fr = rr.back().jfro;
  const double ratio = fb > 0.0 ? fr / fb : std::numeric_limits<double>::infinity();
  std::ostringstream md;
  md << "## Mean Jacobian Frobenius norm on the probe points\n\n"
        "| step | lambda1 = 0 | lambda1 = "
     << FormatNumber(spec.evolution_lambda1, 6) << " |\n|---|---|---|\n";
  md << "| 0 | " << FormatNumber(rb.front().jfro, 5) << " | " << FormatNumber(rr.front().jfro, 5)
     << " |\n| " << rb.back().step << " | " << FormatNumber(fb, 5) << " | "
     << FormatNumber(fr, 5) << " |\n";
  rep.table_md = md.str();

  Check chk;
  chk.name = "jfro_ratio";
  chk.passed = ratio < spec.max_jfro_ratio;
  chk.detail = "final " + FormatNumber(fr, 5) + " / " + FormatNumber(fb, 5) + " = " +
               FormatNumber(ratio, 4) + " (need < " + FormatNumber(spec.max_jfro_ratio, 4) +
               ")";
  rep.checks.push_back(chk);
  return rep;
}

Report RunTaylorCheck(const ExperimentSpec& spec) {
  Report rep;
  rep.kind = spec.kind;
  rep.seed = spec.seed;
  const ColorPools pools = LoadColorPools(spec.data, spec.seed);
  const auto observed = MakeColorEnvs(pools.train, spec.data, spec.data.p_s,
                                      spec.data.n_per_env, DeriveSeed(spec.seed, {3, 0}));
  TrainConfig cfg = Fixed(spec.train);
  cfg.objective.criterion = Criterion::kErm;
  cfg.objective.lambda1 = 0.0;
  cfg.seed = DeriveSeed(spec.seed, {11});
  const auto model = trainer::Train(observed, cfg);
  const std::size_t latent = model.phi.out_dim();
  const std::size_t dim = observed.front().dim();

  std::vector<std::vector<std::vector<std::size_t>>> by_class;
  for (const Environment& e : observed) by_class.push_back(e.ClassIndex());

  std::ostringstream os;
  CsvWriter csv(os);
  csv.Header({"instance", "r_aug", "g1", "g2", "remainder", "relative_remainder",
              "half_var_pred", "wide_remainder", "remainder_ratio", "max_second_deriv",
              "g2_below_half_var"});
  double worst_rel = 0.0, max_l2 = 0.0;
  bool all_pairs = true, all_finite = true;
  for (std::size_t k = 0; k < spec.taylor_instances; ++k) {
    CounterRng rng(DeriveSeed(spec.seed, {12, k}));
    std::vector<double> w(latent);
    for (double& v : w) v = 2.0 * rng.Uniform() - 1.0;
    Tensor cloud(spec.taylor_cloud, dim);
    std::vector<int> labels(spec.taylor_cloud);
    for (std::size_t i = 0; i < spec.taylor_cloud; ++i) {
      const int c = static_cast<int>(i % 2);
      std::vector<Tensor> rows;
      for (std::size_t t = 0; t < observed.size(); ++t) {
        const auto& idx = by_class[t][c];
        if (idx.empty()) throw std::domain_error("RunTaylorCheck: empty class cell");
        rows.push_back(observed[t].Subset(std::span(&idx[rng.Index(idx.size())], 1)).xs);
      }
      const auto gamma = invariance::DirichletSample(spec.train.objective.beta, rows.size(), rng);
      const Tensor v = invariance::VirtualSample(rows, gamma);
      std::copy(v.data().begin(), v.data().end(), cloud.row(i).begin());
      labels[i] = c == 1 ? 1 : -1;
    }
    const auto sc = theory::TaylorRemainderScaling(w, model.phi, cloud, labels,
                                                   spec.taylor_shrink);
    const auto& n = sc.narrow;
    const double rel = n.remainder / n.r_aug;
    double l2 = n.max_second_deriv;
    const Tensor z = diffcore::Predict(model.phi, cloud);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < latent; ++j) s += w[j] * z(i, j);
      l2 = std::max(l2, theory::LogisticSecondDeriv(s));
    }
    const bool pair = n.g2 <= n.half_var_pred;
    const double fields[] = {n.r_aug, n.g1, n.g2, n.remainder, rel, n.half_var_pred,
                             sc.wide.remainder, sc.remainder_ratio, l2};
    for (double f : fields) all_finite = all_finite && std::isfinite(f);
    worst_rel = std::max(worst_rel, rel);
    max_l2 = std::max(max_l2, l2);
    all_pairs = all_pairs && pair;
    csv.Field(k);
    for (double f : fields) csv.Field(f);
    csv.Field(pair ? 1 : 0);
    csv.EndRow();
  }
  rep.AddFile("taylor.csv", os.str());
  rep.table_md = "## Second-order expansion on shrunk clouds\n\n" +
                 std::to_string(spec.taylor_instances) + " instances of " +
                 std::to_string(spec.taylor_cloud) + " virtual samples, shrink " +
                 FormatNumber(spec.taylor_shrink, 4) + ".\n";

  Check rem;
  rem.name = "taylor_remainder";
  rem.passed = worst_rel < spec.max_taylor_remainder;
  rem.detail = "worst |R - (G1+G2)| / R = " + FormatNumber(worst_rel, 4) + " (need < " +
               FormatNumber(spec.max_taylor_remainder, 4) + ")";
  Check pair;
  pair.name = "g2_below_half_var";
  pair.passed = all_pairs;
  pair.detail = all_pairs ? "all instances" : "violated on some instance";
  Check l2;
  l2.name = "second_derivative_bound";
  l2.passed = max_l2 <= 1.0;
  l2.detail = "max sampled " + FormatNumber(max_l2, 6);
  Check fin;
  fin.name = "finite";
  fin.passed = all_finite;
  fin.detail = all_finite ? "all fields finite" : "non-finite field";
  rep.checks = {rem, pair, l2, fin};
  return rep;
}

}  // namespace invgen::experiments
