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
 * \file qdds/engine.hpp
 *
 * \brief The double delta swarm optimizer.
 *
 * Every particle carries, per coordinate, its position r and the last two
 * delta values. One update of a particle
 *
 *   1. applies the gated delta recursion to each coordinate,
 *   2. maps the new delta back to a raw position through the inverse of
 *      delta(r),
 *   3. pulls the raw position towards the swarm best with one uniform
 *      weight rho: r = rho * r_raw + (1 - rho) * r_best,
 *   4. evaluates the cost and keeps the swarm best,
 *   5. shifts the delta history.
 *
 * The iteration counter starts at 3 (iterations 1 and 2 are the two random
 * initial generations) and the loop runs while it is below max_iter.
 */

#ifndef QDDS_ENGINE_HPP
#define QDDS_ENGINE_HPP

#include <qdds/delta_well.hpp>
#include <qdds/errors.hpp>
#include <qdds/objectives.hpp>
#include <qdds/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdds {

enum class UpdateMode {
  kLiteral,  // one randomly chosen particle per iteration
  kSweep,    // every particle, in index order, per iteration
};

enum class RebindPolicy {
  kPostBlend,  // history stores delta(blended position)
  kPreBlend,   // history stores the recursion's delta before blending
};

inline std::string_view to_string(UpdateMode m) {
  return m == UpdateMode::kLiteral ? "literal" : "sweep";
}

inline std::string_view to_string(RebindPolicy p) {
  return p == RebindPolicy::kPostBlend ? "post" : "pre";
}

inline UpdateMode parse_update_mode(std::string_view s) {
  if (s == "literal") return UpdateMode::kLiteral;
  if (s == "sweep") return UpdateMode::kSweep;
  throw ConfigError("unknown update mode '" + std::string(s) + "'");
}

inline RebindPolicy parse_rebind_policy(std::string_view s) {
  if (s == "post") return RebindPolicy::kPostBlend;
  if (s == "pre") return RebindPolicy::kPreBlend;
  throw ConfigError("unknown rebind policy '" + std::string(s) + "'");
}

struct SwarmConfig {
  WellParams well;
  std::size_t population = 20;
  std::size_t dimension = 10;
  /// Initial position interval; the objective's canonical range when unset.
  std::optional<Interval> init_range;
  std::uint64_t seed = 0;
  UpdateMode mode = UpdateMode::kLiteral;
  RebindPolicy rebind = RebindPolicy::kPostBlend;
  bool lambda_abs = false;
  /// lambda = N(0, lambda_sigma) * lambda_scale, drawn once per run.
  double lambda_sigma = 0.5;
  double lambda_scale = 1e-3;
  /// Skips the draw and uses this lambda (after lambda_abs) when set.
  std::optional<double> fixed_lambda;
};

struct ParticleState {
  std::vector<double> position;
  std::vector<DeltaHistory> history;
};

struct EventCounters {
  std::uint64_t in_band_noops = 0;     // coordinates whose delta was carried
  std::uint64_t solver_fallbacks = 0;  // bisection steps inside the inverse
  std::uint64_t guard_clamps = 0;      // unsolvable deltas, position kept

  friend bool operator==(const EventCounters&, const EventCounters&) = default;
};

struct TracePoint {
  std::size_t iter = 0;
  double best_cost = 0.0;
  std::uint64_t eval_count = 0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// What happened to one particle during the last step.
struct UpdateRecord {
  std::size_t particle = 0;
  double theta = 0.0;
  double rho = 0.0;
  std::vector<double> raw;
  std::vector<double> blended;
  std::vector<DeltaBranch> branches;
  double cost = 0.0;
};

struct SwarmState {
  SwarmConfig config;  // with init_range resolved
  double lambda = 0.0;
  std::vector<ParticleState> particles;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> best_solution;
  std::size_t iteration = 0;
  std::uint64_t eval_count = 0;
  EventCounters events;
  std::vector<TracePoint> trace;
  std::vector<UpdateRecord> last_updates;
  Rng rng;
};

struct RunResult {
  double best_cost = 0.0;
  std::vector<double> best_solution;
  std::vector<TracePoint> trace;
  std::uint64_t eval_count = 0;
  EventCounters events;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Interval init_range;
};

/// Elementwise rho * raw + (1 - rho) * gbest, kept inside each segment.
inline std::vector<double> blend_with_gbest(std::span<const double> raw,
                                            std::span<const double> gbest,
                                            double rho) {
  if (raw.size() != gbest.size()) {
    throw ContractViolation("blend_with_gbest: dimension mismatch");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw ContractViolation("blend_with_gbest: rho outside [0, 1]");
  }
  std::vector<double> out(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    const double v = rho * raw[d] + (1.0 - rho) * gbest[d];
    out[d] = std::clamp(v, std::min(raw[d], gbest[d]),
                        std::max(raw[d], gbest[d]));
  }
  return out;
}

/**
 * Initial-position interval for a run: the configured range, or the
 * objective's canonical range clipped to the overflow guard of delta(r).
 * An explicit range that leaves the guard is a configuration error.
 */
inline Interval resolve_init_range(const SwarmConfig& config,
                                   const Objective& objective) {
  const double limit = guard_radius(config.well.k);
  if (config.init_range) {
    const Interval r = *config.init_range;
    if (r.empty() || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
      throw ConfigError("init_range must be a non-empty finite interval");
    }
    if (!within_guard(r.lo, config.well.k) ||
        !within_guard(r.hi, config.well.k)) {
      throw ConfigError("init_range leaves the overflow guard |2kr| <= 700");
    }
    return r;
  }
  Interval r{std::max(objective.init_range.lo, -limit),
             std::min(objective.init_range.hi, limit)};
  if (r.empty()) {
    throw ConfigError("objective range does not meet the overflow guard");
  }
  return r;
}

namespace detail {

inline void validate(const SwarmConfig& config, const Objective& objective) {
  WellParams probe = config.well;
  probe.lambda = 0.0;
  probe.validate();
  if (config.population == 0) throw ConfigError("population must be >= 1");
  if (config.dimension == 0) throw ConfigError("dimension must be >= 1");
  if (objective.dimension != config.dimension) {
    throw ConfigError("objective '" + objective.name + "' has dimension " +
                      std::to_string(objective.dimension) +
                      " but the swarm is configured for " +
                      std::to_string(config.dimension));
  }
  if (!objective.evaluate) throw ConfigError("objective has no evaluator");
  if (!(config.lambda_sigma >= 0.0) || !std::isfinite(config.lambda_scale)) {
    throw ConfigError("lambda distribution parameters are invalid");
  }
  if (config.fixed_lambda && !std::isfinite(*config.fixed_lambda)) {
    throw ConfigError("fixed lambda must be finite");
  }
}

inline void consider(SwarmState& s, std::span<const double> x, double cost) {
  if (cost < s.best_cost) {
    s.best_cost = cost;
    s.best_solution.assign(x.begin(), x.end());
  }
}

inline void update_particle(SwarmState& s, const Objective& objective,
                            std::size_t index, double theta) {
  const double k = s.config.well.k;
  ParticleState& p = s.particles[index];
  const std::size_t dim = p.position.size();

  UpdateRecord rec;
  rec.particle = index;
  rec.theta = theta;
  rec.raw.resize(dim);
  rec.branches.resize(dim);
  std::vector<double> next_delta(dim);

  for (std::size_t d = 0; d < dim; ++d) {
    const DeltaStep st = delta_update_step(p.history[d], theta, s.lambda);
    rec.branches[d] = st.branch;
    if (st.branch == DeltaBranch::kInBand) ++s.events.in_band_noops;
    try {
      const InverseSolution sol = solve_r_of_delta(st.delta, k);
      s.events.solver_fallbacks += static_cast<std::uint64_t>(sol.bisections);
      rec.raw[d] = sol.r;
      next_delta[d] = st.delta;
    } catch (const UnsolvableInput&) {
      ++s.events.guard_clamps;
      rec.raw[d] = p.position[d];
      next_delta[d] = p.history[d].delta_prev;
    }
  }

  rec.rho = s.rng.uniform01();
  rec.blended = blend_with_gbest(rec.raw, s.best_solution, rec.rho);
  rec.cost = objective(rec.blended);
  ++s.eval_count;
  consider(s, rec.blended, rec.cost);

  for (std::size_t d = 0; d < dim; ++d) {
    DeltaHistory& h = p.history[d];
    h.delta_prev2 = h.delta_prev;
    h.delta_prev = s.config.rebind == RebindPolicy::kPostBlend
                       ? delta_of_r(rec.blended[d], k)
                       : next_delta[d];
  }
  p.position = rec.blended;
  s.last_updates.push_back(std::move(rec));
}

}  // namespace detail

/**
 * Draws lambda, then two random generations of positions per particle.
 * Both generations are evaluated (2P evaluations) and seed the swarm best;
 * the particle sits at its second-generation position with history
 * (delta(r2), delta(r1)). The counter is left at 3.
 */
inline SwarmState init_swarm(const SwarmConfig& config,
                             const Objective& objective) {
  detail::validate(config, objective);
  SwarmState s;
  s.config = config;
  s.config.init_range = resolve_init_range(config, objective);
  s.rng = Rng(config.seed);

  double lambda = config.fixed_lambda
                      ? *config.fixed_lambda
                      : s.rng.normal() * config.lambda_sigma *
                            config.lambda_scale;
  if (config.lambda_abs) lambda = std::abs(lambda);
  s.lambda = lambda;
  s.config.well.lambda = lambda;

  const Interval range = *s.config.init_range;
  const double k = config.well.k;
  const std::size_t pop = config.population;
  const std::size_t dim = config.dimension;

  std::vector<std::vector<double>> first(pop, std::vector<double>(dim));
  s.particles.resize(pop);
  for (std::size_t i = 0; i < pop; ++i) {
    ParticleState& p = s.particles[i];
    p.position.resize(dim);
    p.history.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const double r1 = s.rng.uniform(range.lo, range.hi);
      const double r2 = s.rng.uniform(range.lo, range.hi);
      first[i][d] = r1;
      p.position[d] = r2;
      p.history[d] = {delta_of_r(r2, k), delta_of_r(r1, k)};
    }
  }

  for (const auto& x : first) {
    detail::consider(s, x, objective(x));
    ++s.eval_count;
  }
  s.trace.push_back({1, s.best_cost, s.eval_count});
  for (const auto& p : s.particles) {
    detail::consider(s, p.position, objective(p.position));
    ++s.eval_count;
  }
  s.trace.push_back({2, s.best_cost, s.eval_count});
  s.iteration = 3;
  return s;
}

/// One iteration: the learning rate for the current counter, then either one
/// random particle (literal) or all particles (sweep) are updated.
inline void step(SwarmState& s, const Objective& objective) {
  if (s.particles.empty()) throw ContractViolation("step: swarm not initialised");
  if (s.iteration >= s.config.well.max_iter) {
    throw ContractViolation("step: iteration budget exhausted");
  }
  const double theta =
      learning_rate(s.iteration, s.config.well.max_iter, s.config.well.epsilon);
  s.last_updates.clear();
  if (s.config.mode == UpdateMode::kLiteral) {
    const auto chosen =
        static_cast<std::size_t>(s.rng.index(s.particles.size()));
    detail::update_particle(s, objective, chosen, theta);
  } else {
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
      detail::update_particle(s, objective, i, theta);
    }
  }
  s.trace.push_back({s.iteration, s.best_cost, s.eval_count});
  ++s.iteration;
}

inline RunResult finish(const SwarmState& s) {
  RunResult out;
  out.best_cost = s.best_cost;
  out.best_solution = s.best_solution;
  out.trace = s.trace;
  out.eval_count = s.eval_count;
  out.events = s.events;
  out.lambda = s.lambda;
  out.seed = s.config.seed;
  out.init_range = *s.config.init_range;
  return out;
}

/**
 * init_swarm, then step until the counter reaches max_iter. The trace has one
 * row per counter value 1..max_iter; the last row is the state at loop exit.
 */
inline RunResult run(const SwarmConfig& config, const Objective& objective) {
  SwarmState s = init_swarm(config, objective);
  while (s.iteration < s.config.well.max_iter) step(s, objective);
  s.trace.push_back({s.config.well.max_iter, s.best_cost, s.eval_count});
  return finish(s);
}

}  // namespace qdds

#endif  // QDDS_ENGINE_HPP
