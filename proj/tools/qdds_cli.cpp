// Copyright 2026 The qdds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qdds: command-line front end for experiments, filter design and validation.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure,
// 3 a validation check failed.

#include <qdds/harness.hpp>
#include <qdds/validation.hpp>

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitValidation = 3;

// Raw flag values; only options the user actually passed are applied.
struct Overrides {
  std::string config_file;
  std::string function;
  std::size_t dim = 0;
  std::size_t pop = 0;
  std::size_t iters = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string mode;
  std::string rebind;
  bool lambda_abs = false;
  double k = 0.0;
  double epsilon = 0.0;
  std::vector<double> init_range;
  std::size_t order = 0;
  double wp = 0.0;
  double ws = 0.0;
  double eta = 0.0;
  std::size_t grid = 0;
  bool symmetric = true;
  std::string out;
  std::vector<std::string> emit;
  std::size_t workers = 0;
  bool linear_plot = false;
};

void add_swarm_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "JSON experiment config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--dim", o.dim, "problem dimension");
  cmd->add_option("--pop", o.pop, "population size");
  cmd->add_option("--iters", o.iters, "iteration budget (max_iter)");
  cmd->add_option("--trials", o.trials, "independent trials");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--mode", o.mode, "literal | sweep")
      ->check(CLI::IsMember({"literal", "sweep"}));
  cmd->add_option("--rebind", o.rebind, "post | pre")
      ->check(CLI::IsMember({"post", "pre"}));
  cmd->add_flag("--lambda-abs", o.lambda_abs, "force lambda >= 0");
  cmd->add_option("--k", o.k, "well stiffness");
  cmd->add_option("--epsilon", o.epsilon, "learning-rate floor");
  cmd->add_option("--init-range", o.init_range, "initial interval LO HI")
      ->expected(2);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--emit", o.emit, "traces,plots,report (or none)")
      ->delimiter(',');
  cmd->add_option("--workers", o.workers, "concurrent trials (0 = auto)");
  cmd->add_flag("--linear-plot", o.linear_plot, "linear cost axis");
}

void add_filter_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--order", o.order, "total coefficient count");
  cmd->add_option("--wp", o.wp, "passband edge, in units of pi");
  cmd->add_option("--ws", o.ws, "stopband edge, in units of pi");
  cmd->add_option("--eta", o.eta, "passband weight in [0, 1]");
  cmd->add_option("--grid", o.grid, "samples per band for the cost");
  cmd->add_flag("--symmetric,!--no-symmetric", o.symmetric,
                "enforce linear-phase symmetry");
}

bool given(const CLI::App* cmd, const std::string& name) {
  const auto* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

qdds::ExperimentConfig build_config(const CLI::App* cmd, const Overrides& o,
                                    qdds::ExperimentConfig base) {
  if (given(cmd, "--config")) base = qdds::load_config_file(o.config_file, base);
  if (given(cmd, "--function")) base.function = o.function;
  if (given(cmd, "--dim")) base.swarm.dimension = o.dim;
  if (given(cmd, "--pop")) base.swarm.population = o.pop;
  if (given(cmd, "--iters")) base.swarm.well.max_iter = o.iters;
  if (given(cmd, "--trials")) base.trials = o.trials;
  if (given(cmd, "--seed")) base.master_seed = o.seed;
  if (given(cmd, "--mode")) base.swarm.mode = qdds::parse_update_mode(o.mode);
  if (given(cmd, "--rebind")) {
    base.swarm.rebind = qdds::parse_rebind_policy(o.rebind);
  }
  if (given(cmd, "--lambda-abs")) base.swarm.lambda_abs = o.lambda_abs;
  if (given(cmd, "--k")) base.swarm.well.k = o.k;
  if (given(cmd, "--epsilon")) base.swarm.well.epsilon = o.epsilon;
  if (given(cmd, "--init-range")) {
    base.swarm.init_range = qdds::Interval{o.init_range[0], o.init_range[1]};
  }
  if (given(cmd, "--out")) base.output_dir = o.out;
  if (given(cmd, "--emit")) base.emit = qdds::parse_emit_list(o.emit);
  if (given(cmd, "--workers")) base.workers = o.workers;
  if (given(cmd, "--linear-plot")) base.log_plot = !o.linear_plot;
  if (cmd->get_option_no_throw("--order") != nullptr) {
    if (given(cmd, "--order")) base.filter.order_label = o.order;
    if (given(cmd, "--wp")) base.filter.omega_p = o.wp * std::numbers::pi;
    if (given(cmd, "--ws")) base.filter.omega_s = o.ws * std::numbers::pi;
    if (given(cmd, "--eta")) base.filter.eta = o.eta;
    if (given(cmd, "--grid")) base.filter.grid_points = o.grid;
    if (given(cmd, "--symmetric") || given(cmd, "--no-symmetric")) {
      base.filter.symmetric = o.symmetric;
    }
  }
  return base;
}

void print_summary(const qdds::ExperimentResult& r) {
  const auto& c = r.config;
  std::printf("%s  P=%zu  Dim=%zu  Iter=%zu  trials=%zu  mode=%s rebind=%s%s\n",
              c.is_fir() ? "fir" : c.function.c_str(), c.swarm.population,
              c.swarm.dimension, c.swarm.well.max_iter, c.trials,
              std::string(qdds::to_string(c.swarm.mode)).c_str(),
              std::string(qdds::to_string(c.swarm.rebind)).c_str(),
              c.swarm.lambda_abs ? " lambda-abs" : "");
  std::printf("  mean %.4e +- %.4e   best %.4e   worst %.4e   (%.2fs)\n",
              r.stats.mean, r.stats.std, r.stats.best, r.stats.worst,
              r.wall_seconds);
  if (c.is_fir()) {
    const auto& best = r.trials[r.best_trial()];
    std::printf("  best design: delta %.4f dB, Ep %.4e, Es %.4e\n",
                best.fir->eval.delta_db, best.fir->eval.e_p,
                best.fir->eval.e_s);
  }
  if (c.emit.any()) std::printf("  artifacts in %s\n", c.output_dir.c_str());
}

int run_and_report(const qdds::ExperimentConfig& config) {
  const auto result = qdds::run_experiment(config);
  print_summary(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double delta swarm optimizer: experiments, FIR design, checks"};
  app.require_subcommand(1);

  Overrides bench_opts;
  auto* bench = app.add_subcommand("bench", "run a benchmark experiment");
  bench->add_option("--function", bench_opts.function,
                    "rastrigin | rosenbrock | sphere | griewank")
      ->check(CLI::IsMember(qdds::benchmark_names()));
  add_swarm_options(bench, bench_opts);

  Overrides fir_opts;
  auto* fir = app.add_subcommand("fir", "design a low-pass FIR filter");
  add_swarm_options(fir, fir_opts);
  add_filter_options(fir, fir_opts);

  std::size_t round_trips = 100000;
  std::size_t probes = 100;
  std::size_t quad_points = 100000;
  auto* validate = app.add_subcommand("validate", "run the math-identity checks");
  validate->add_option("--round-trips", round_trips, "inverse-map samples");
  validate->add_option("--probes", probes, "wavefunction probes");
  validate->add_option("--quad-points", quad_points, "quadrature points");

  auto* presets = app.add_subcommand("presets", "list or run reproduction cells");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "print preset names");
  std::vector<std::string> preset_names;
  bool run_all = false;
  std::string preset_out = "qdds_presets";
  std::size_t preset_workers = 0;
  std::size_t preset_trials = 0;
  auto* presets_run = presets->add_subcommand("run", "run presets");
  presets_run->add_option("names", preset_names, "preset names");
  presets_run->add_flag("--all", run_all, "run every preset");
  presets_run->add_option("--out", preset_out, "base output directory");
  presets_run->add_option("--workers", preset_workers, "concurrent trials");
  presets_run->add_option("--trials", preset_trials, "override trial count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (bench->parsed()) {
      qdds::ExperimentConfig base;
      auto config = build_config(bench, bench_opts, base);
      if (config.is_fir()) {
        throw qdds::ConfigError("use the 'fir' subcommand for filter design");
      }
      return run_and_report(config);
    }
    if (fir->parsed()) {
      qdds::ExperimentConfig base;
      base.function = "fir";
      base.swarm.population = 1000;
      auto config = build_config(fir, fir_opts, base);
      config.function = "fir";
      return run_and_report(config);
    }
    if (validate->parsed()) {
      bool ok = true;
      for (const auto& check :
           qdds::run_validation_suite(round_trips, probes, quad_points)) {
        std::printf("%-22s %s  worst=%.6g tol=%.3g  %s\n", check.name.c_str(),
                    check.passed ? "PASS" : "FAIL", check.worst,
                    check.tolerance, check.detail.c_str());
        ok = ok && check.passed;
      }
      return ok ? kExitOk : kExitValidation;
    }
    if (presets->parsed()) {
      const auto all = qdds::presets();
      if (!presets_run->parsed()) {
        for (const auto& p : all) {
          std::printf("%-22s function=%s pop=%zu dim=%zu iters=%zu trials=%zu\n",
                      p.name.c_str(), p.config.function.c_str(),
                      p.config.swarm.population, p.config.swarm.dimension,
                      p.config.swarm.well.max_iter, p.config.trials);
        }
        return kExitOk;
      }
      std::vector<qdds::Preset> chosen;
      if (run_all) {
        chosen = all;
      } else {
        if (preset_names.empty()) {
          throw qdds::ConfigError("name at least one preset or pass --all");
        }
        for (const auto& n : preset_names) {
          auto p = qdds::find_preset(n);
          if (!p) throw qdds::ConfigError("unknown preset '" + n + "'");
          chosen.push_back(*p);
        }
      }
      for (auto& p : chosen) {
        p.config.output_dir =
            (std::filesystem::path(preset_out) / p.name).string();
        p.config.workers = preset_workers;
        if (preset_trials > 0) p.config.trials = preset_trials;
        run_and_report(p.config);
      }
      return kExitOk;
    }
  } catch (const qdds::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
