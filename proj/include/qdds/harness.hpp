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

/**
 * \file qdds/harness.hpp
 *
 * \brief Seeded multi-trial experiments and their artifacts.
 *
 * An experiment runs `trials` independent optimizer runs. Trial i is seeded
 * with derive_seed(master_seed, i), so results do not depend on how many
 * workers execute them or in which order. Artifacts written to the output
 * directory:
 *
 *   trace.csv         trial,iter,best_cost,eval_count   (one row per iteration)
 *   convergence.svg   best cost against iteration, one polyline per trial
 *   report.json       resolved config, per-trial results, aggregate stats
 *   response.svg      FIR only: |H| in dB of the best design
 *   coefficients.csv  FIR only: best full coefficient vector, one per line
 *
 * Everything in report.json except the "runtime" object is a pure function
 * of the config.
 */

#ifndef QDDS_HARNESS_HPP
#define QDDS_HARNESS_HPP

#include <qdds/engine.hpp>
#include <qdds/errors.hpp>
#include <qdds/fir.hpp>
#include <qdds/objectives.hpp>
#include <qdds/random.hpp>
#include <qdds/stats.hpp>
#include <qdds/svg_plot.hpp>

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace qdds {

struct EmitFlags {
  bool traces = true;
  bool plots = true;
  bool report = true;

  bool any() const { return traces || plots || report; }
};

struct ExperimentConfig {
  std::string name;
  std::string function = "rastrigin";  // a benchmark name or "fir"
  FilterSpec filter;
  SwarmConfig swarm;
  std::size_t trials = 10;
  std::uint64_t master_seed = 1;
  std::string output_dir = "qdds_out";
  EmitFlags emit;
  std::size_t workers = 0;  // 0: one per hardware thread
  bool log_plot = true;

  bool is_fir() const { return function == "fir"; }
};

struct FirSummary {
  std::vector<double> coefficients;
  FilterEval eval;
  double sidelobe_db = 0.0;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RunResult result;
  std::optional<FirSummary> fir;
};

struct ExperimentResult {
  ExperimentConfig config;  // resolved
  TrialStats stats;
  std::vector<TrialRecord> trials;
  double wall_seconds = 0.0;
  std::size_t workers_used = 1;

  /// Index into trials of the lowest final cost (first on ties).
  std::size_t best_trial() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i) {
      if (trials[i].result.best_cost < trials[best].result.best_cost) best = i;
    }
    return best;
  }
};

// Config ---------------------------------------------------------------------

/// Fills derived fields (FIR dimension) and checks the experiment-level
/// invariants. Swarm-level checks happen when a run starts.
inline ExperimentConfig resolve(ExperimentConfig config) {
  if (config.trials == 0) throw ConfigError("trials must be >= 1");
  if (config.is_fir()) {
    config.filter.validate();
    config.swarm.dimension = config.filter.free_variables();
  } else {
    (void)make_benchmark(config.function, config.swarm.dimension);
  }
  return config;
}

inline Objective make_objective(const ExperimentConfig& config) {
  if (config.is_fir()) return make_fir_objective(config.filter);
  return make_benchmark(config.function, config.swarm.dimension);
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["function"] = c.function;
  j["dim"] = c.swarm.dimension;
  j["pop"] = c.swarm.population;
  j["iters"] = c.swarm.well.max_iter;
  j["trials"] = c.trials;
  j["seed"] = c.master_seed;
  j["mode"] = std::string(to_string(c.swarm.mode));
  j["rebind"] = std::string(to_string(c.swarm.rebind));
  j["lambda_abs"] = c.swarm.lambda_abs;
  j["lambda_sigma"] = c.swarm.lambda_sigma;
  j["lambda_scale"] = c.swarm.lambda_scale;
  j["fixed_lambda"] = c.swarm.fixed_lambda
                          ? nlohmann::json(*c.swarm.fixed_lambda)
                          : nlohmann::json(nullptr);
  j["k"] = c.swarm.well.k;
  j["epsilon"] = c.swarm.well.epsilon;
  j["init_range"] =
      c.swarm.init_range
          ? nlohmann::json::array({c.swarm.init_range->lo,
                                   c.swarm.init_range->hi})
          : nlohmann::json(nullptr);
  j["order"] = c.filter.order_label;
  j["wp"] = c.filter.omega_p / std::numbers::pi;
  j["ws"] = c.filter.omega_s / std::numbers::pi;
  j["eta"] = c.filter.eta;
  j["grid"] = c.filter.grid_points;
  j["symmetric"] = c.filter.symmetric;
  j["out"] = c.output_dir;
  nlohmann::json emit = nlohmann::json::array();
  if (c.emit.traces) emit.push_back("traces");
  if (c.emit.plots) emit.push_back("plots");
  if (c.emit.report) emit.push_back("report");
  j["emit"] = emit;
  j["log_plot"] = c.log_plot;
  return j;
}

inline EmitFlags parse_emit_list(const std::vector<std::string>& items) {
  EmitFlags f{false, false, false};
  for (const auto& item : items) {
    if (item == "traces") {
      f.traces = true;
    } else if (item == "plots") {
      f.plots = true;
    } else if (item == "report") {
      f.report = true;
    } else if (item == "none" || item.empty()) {
    } else {
      throw ConfigError("unknown emit target '" + item + "'");
    }
  }
  return f;
}

/// Applies every key present in \a j on top of \a base. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j,
                                         ExperimentConfig base = {}) {
  if (!j.is_object()) throw ConfigError("experiment config must be an object");
  static const char* known[] = {
      "name", "function", "dim", "pop", "iters", "trials", "seed", "mode",
      "rebind", "lambda_abs", "lambda_sigma", "lambda_scale", "fixed_lambda",
      "k", "epsilon", "init_range", "order", "wp", "ws", "eta", "grid",
      "symmetric", "out", "emit", "log_plot", "workers"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  try {
    ExperimentConfig c = std::move(base);
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("function")) c.function = j["function"].get<std::string>();
    if (j.contains("dim")) c.swarm.dimension = j["dim"].get<std::size_t>();
    if (j.contains("pop")) c.swarm.population = j["pop"].get<std::size_t>();
    if (j.contains("iters")) c.swarm.well.max_iter = j["iters"].get<std::size_t>();
    if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode")) {
      c.swarm.mode = parse_update_mode(j["mode"].get<std::string>());
    }
    if (j.contains("rebind")) {
      c.swarm.rebind = parse_rebind_policy(j["rebind"].get<std::string>());
    }
    if (j.contains("lambda_abs")) c.swarm.lambda_abs = j["lambda_abs"].get<bool>();
    if (j.contains("lambda_sigma")) {
      c.swarm.lambda_sigma = j["lambda_sigma"].get<double>();
    }
    if (j.contains("lambda_scale")) {
      c.swarm.lambda_scale = j["lambda_scale"].get<double>();
    }
    if (j.contains("fixed_lambda")) {
      if (j["fixed_lambda"].is_null()) {
        c.swarm.fixed_lambda.reset();
      } else {
        c.swarm.fixed_lambda = j["fixed_lambda"].get<double>();
      }
    }
    if (j.contains("k")) c.swarm.well.k = j["k"].get<double>();
    if (j.contains("epsilon")) c.swarm.well.epsilon = j["epsilon"].get<double>();
    if (j.contains("init_range")) {
      const auto& r = j["init_range"];
      if (r.is_null()) {
        c.swarm.init_range.reset();
      } else {
        if (!r.is_array() || r.size() != 2) {
          throw ConfigError("init_range must be [lo, hi] or null");
        }
        c.swarm.init_range = Interval{r[0].get<double>(), r[1].get<double>()};
      }
    }
    if (j.contains("order")) c.filter.order_label = j["order"].get<std::size_t>();
    if (j.contains("wp")) {
      c.filter.omega_p = j["wp"].get<double>() * std::numbers::pi;
    }
    if (j.contains("ws")) {
      c.filter.omega_s = j["ws"].get<double>() * std::numbers::pi;
    }
    if (j.contains("eta")) c.filter.eta = j["eta"].get<double>();
    if (j.contains("grid")) c.filter.grid_points = j["grid"].get<std::size_t>();
    if (j.contains("symmetric")) c.filter.symmetric = j["symmetric"].get<bool>();
    if (j.contains("out")) c.output_dir = j["out"].get<std::string>();
    if (j.contains("emit")) {
      c.emit = parse_emit_list(j["emit"].get<std::vector<std::string>>());
    }
    if (j.contains("log_plot")) c.log_plot = j["log_plot"].get<bool>();
    if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
}

inline ExperimentConfig load_config_file(const std::string& path,
                                         ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      e.what());
  }
  return config_from_json(j, std::move(base));
}

// Trials ---------------------------------------------------------------------

inline FirSummary summarize_fir(std::span<const double> vars,
                                const FilterSpec& spec) {
  FirSummary s;
  s.coefficients = coefficients_from_variables(vars, spec);
  s.eval = evaluate_filter(s.coefficients, spec);
  s.sidelobe_db = stopband_sidelobe_db(s.coefficients, spec);
  return s;
}

inline TrialRecord run_trial(const ExperimentConfig& config,
                             const Objective& objective, std::size_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.master_seed, index);
  SwarmConfig sc = config.swarm;
  sc.seed = rec.seed;
  rec.result = run(sc, objective);
  if (config.is_fir()) rec.fir = summarize_fir(rec.result.best_solution, config.filter);
  return rec;
}

inline std::size_t worker_count(const ExperimentConfig& config) {
  std::size_t w = config.workers;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return std::min(w, config.trials);
}

/// Runs every trial; joins in index order. No file output.
inline std::vector<TrialRecord> run_trials(const ExperimentConfig& config) {
  const Objective objective = make_objective(config);
  std::vector<TrialRecord> records(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      try {
        records[i] = run_trial(config, objective, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = worker_count(config);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

// Artifacts ------------------------------------------------------------------

struct TraceRow {
  std::size_t trial = 0;
  std::size_t iter = 0;
  double best_cost = 0.0;
  std::uint64_t eval_count = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr const char* kTraceHeader = "trial,iter,best_cost,eval_count";

inline void write_trace_rows(std::ostream& out, std::size_t trial,
                             const RunResult& result) {
  char buf[96];
  for (const auto& p : result.trace) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%llu\n", trial, p.iter,
                  p.best_cost, static_cast<unsigned long long>(p.eval_count));
    out << buf;
  }
}

/// Single-run trace file.
inline void emit_trace(const RunResult& result, std::size_t trial,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kTraceHeader << '\n';
  write_trace_rows(out, trial, result);
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// All trials in index order, one header.
inline void emit_traces(std::span<const TrialRecord> trials,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kTraceHeader << '\n';
  for (const auto& t : trials) write_trace_rows(out, t.index, t.result);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw IoError(path + ": missing trace header");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRow r;
    unsigned long long evals = 0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%llu", &r.trial, &r.iter,
                    &r.best_cost, &evals) != 4) {
      throw IoError(path + ":" + std::to_string(line_no) + ": bad trace row");
    }
    r.eval_count = evals;
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json events_to_json(const EventCounters& e) {
  return {{"in_band_noops", e.in_band_noops},
          {"solver_fallbacks", e.solver_fallbacks},
          {"guard_clamps", e.guard_clamps}};
}

inline nlohmann::json fir_to_json(const FirSummary& f) {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  return {{"coefficients", f.coefficients},
          {"e_p", f.eval.e_p},
          {"e_s", f.eval.e_s},
          {"gamma", f.eval.gamma},
          {"delta_db", finite_or_null(f.eval.delta_db)},
          {"sidelobe_db", finite_or_null(f.sidelobe_db)}};
}

inline nlohmann::json report_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["schema"] = "qdds-report/1";
  j["config"] = config_to_json(r.config);
  j["stats"] = {{"mean", r.stats.mean},
                {"std", r.stats.std},
                {"best", r.stats.best},
                {"worst", r.stats.worst},
                {"trials", r.stats.count}};
  nlohmann::json trials = nlohmann::json::array();
  EventCounters total;
  for (const auto& t : r.trials) {
    nlohmann::json tj;
    tj["index"] = t.index;
    tj["seed"] = t.seed;
    tj["lambda"] = t.result.lambda;
    tj["best_cost"] = t.result.best_cost;
    tj["best_solution"] = t.result.best_solution;
    tj["eval_count"] = t.result.eval_count;
    tj["init_range"] = {t.result.init_range.lo, t.result.init_range.hi};
    tj["events"] = events_to_json(t.result.events);
    if (t.fir) tj["fir"] = fir_to_json(*t.fir);
    trials.push_back(std::move(tj));
    total.in_band_noops += t.result.events.in_band_noops;
    total.solver_fallbacks += t.result.events.solver_fallbacks;
    total.guard_clamps += t.result.events.guard_clamps;
  }
  j["trials"] = std::move(trials);
  j["events"] = events_to_json(total);
  if (!r.trials.empty() && r.trials[r.best_trial()].fir) {
    const auto& best = r.trials[r.best_trial()];
    j["fir"] = fir_to_json(*best.fir);
    j["fir"]["trial"] = best.index;
  }
  j["runtime"] = {{"wall_seconds", r.wall_seconds},
                  {"workers", r.workers_used}};
  return j;
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string serialize_report(const nlohmann::json& j) {
  return j.dump(2) + "\n";
}

inline void emit_report(const ExperimentResult& r, const std::string& path) {
  write_text_file(path, serialize_report(report_json(r)));
}

inline std::string plot_title(const ExperimentConfig& c) {
  std::ostringstream t;
  if (c.is_fir()) {
    t << "FIR " << c.filter.order_label << " taps";
  } else {
    t << c.function;
  }
  t << " (dim=" << c.swarm.dimension << ", pop=" << c.swarm.population
    << ", iters=" << c.swarm.well.max_iter << ")";
  return t.str();
}

namespace detail {

inline std::filesystem::path prepare_output_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) {
    throw IoError("cannot create output directory '" + dir + "'");
  }
  const fs::path probe = p / ".qdds_write_probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out || !(out << "ok")) {
      throw IoError("output directory '" + dir + "' is not writable");
    }
  }
  fs::remove(probe, ec);
  return p;
}

}  // namespace detail

/**
 * Runs the experiment and writes the enabled artifacts. The output directory
 * is created and probed before any trial starts.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& raw) {
  ExperimentResult out;
  out.config = resolve(raw);
  const ExperimentConfig& config = out.config;

  std::filesystem::path dir;
  if (config.emit.any()) dir = detail::prepare_output_dir(config.output_dir);

  const auto start = std::chrono::steady_clock::now();
  out.trials = run_trials(config);
  out.workers_used = worker_count(config);
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();

  std::vector<double> finals;
  for (const auto& t : out.trials) finals.push_back(t.result.best_cost);
  out.stats = aggregate_stats(finals);

  if (config.emit.traces) emit_traces(out.trials, (dir / "trace.csv").string());
  if (config.emit.plots) {
    std::vector<std::vector<TracePoint>> traces;
    for (const auto& t : out.trials) traces.push_back(t.result.trace);
    emit_plot(traces, (dir / "convergence.svg").string(), plot_title(config),
              config.log_plot);
    if (config.is_fir()) {
      const auto& best = out.trials[out.best_trial()];
      emit_response_plot(best.fir->coefficients, config.filter,
                         (dir / "response.svg").string(),
                         "Best design, " + plot_title(config));
    }
  }
  if (config.emit.report) {
    emit_report(out, (dir / "report.json").string());
    if (config.is_fir()) {
      write_coefficients_csv((dir / "coefficients.csv").string(),
                             out.trials[out.best_trial()].fir->coefficients);
    }
  }
  return out;
}

// Presets --------------------------------------------------------------------

struct Preset {
  std::string name;
  ExperimentConfig config;
};

/**
 * Every reproduction cell: four benchmarks x population {20, 40, 80} x
 * (dimension, iterations) in {(10, 250), (20, 375), (30, 500)}, plus the
 * 10- and 20-tap FIR designs at population 1000 for 250 and 500 iterations.
 * All use 10 trials and the library defaults otherwise.
 */
inline std::vector<Preset> presets() {
  std::vector<Preset> out;
  const std::size_t pops[] = {20, 40, 80};
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {10, 250}, {20, 375}, {30, 500}};
  for (const auto& fn : benchmark_names()) {
    for (std::size_t pop : pops) {
      for (const auto& [dim, iters] : shapes) {
        Preset p;
        p.name = fn + "-p" + std::to_string(pop) + "-d" + std::to_string(dim);
        p.config.name = p.name;
        p.config.function = fn;
        p.config.swarm.population = pop;
        p.config.swarm.dimension = dim;
        p.config.swarm.well.max_iter = iters;
        p.config.trials = 10;
        out.push_back(std::move(p));
      }
    }
  }
  const std::pair<std::size_t, std::size_t> filters[] = {{10, 250}, {20, 500}};
  for (const auto& [taps, iters] : filters) {
    Preset p;
    p.name = "fir" + std::to_string(taps) + "-p1000";
    p.config.name = p.name;
    p.config.function = "fir";
    p.config.filter.order_label = taps;
    p.config.swarm.population = 1000;
    p.config.swarm.well.max_iter = iters;
    p.config.trials = 10;
    p.config = resolve(std::move(p.config));
    out.push_back(std::move(p));
  }
  return out;
}

inline std::optional<Preset> find_preset(const std::string& name) {
  for (auto& p : presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace qdds

#endif  // QDDS_HARNESS_HPP
