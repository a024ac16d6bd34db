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

#include <qdds/engine.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using V = std::vector<double>;

qdds::SwarmConfig small(std::size_t pop, std::size_t dim, std::size_t iters,
                        std::uint64_t seed = 1) {
  qdds::SwarmConfig c;
  c.population = pop;
  c.dimension = dim;
  c.well.max_iter = iters;
  c.seed = seed;
  return c;
}

TEST(Init, SingleParticleBestIsMinOfBothGenerations) {
  const auto obj = qdds::make_sphere(3);
  auto c = small(1, 3, 10);
  c.init_range = qdds::Interval{-2, 2};
  const auto s = qdds::init_swarm(c, obj);
  EXPECT_EQ(s.eval_count, 2u);
  EXPECT_EQ(s.iteration, 3u);
  ASSERT_EQ(s.trace.size(), 2u);
  EXPECT_EQ(s.trace[0].iter, 1u);
  EXPECT_EQ(s.trace[1].iter, 2u);
  EXPECT_EQ(s.trace[0].eval_count, 1u);

  // Recover r1 from the stored t-2 delta.
  V r1(3);
  for (std::size_t d = 0; d < 3; ++d) {
    r1[d] = qdds::r_of_delta(s.particles[0].history[d].delta_prev2, c.well.k);
  }
  const double expected = std::min(obj(r1), obj(s.particles[0].position));
  EXPECT_NEAR(s.best_cost, expected, 1e-9);
  EXPECT_NEAR(s.trace[0].best_cost, obj(r1), 1e-9);
}

TEST(Init, HistoryMatchesPosition) {
  const auto obj = qdds::make_rastrigin(4);
  const auto s = qdds::init_swarm(small(6, 4, 10), obj);
  for (const auto& p : s.particles) {
    for (std::size_t d = 0; d < 4; ++d) {
      EXPECT_EQ(p.history[d].delta_prev, qdds::delta_of_r(p.position[d], 5.0));
      EXPECT_GE(p.position[d], -5.12);
      EXPECT_LE(p.position[d], 5.12);
    }
  }
}

TEST(Init, LambdaDrawAndOverrides) {
  const auto obj = qdds::make_sphere(2);
  auto c = small(2, 2, 10, 77);
  c.init_range = qdds::Interval{-1, 1};
  const auto a = qdds::init_swarm(c, obj);
  EXPECT_NE(a.lambda, 0.0);
  EXPECT_LT(std::abs(a.lambda), 1e-2);
  c.lambda_abs = true;
  EXPECT_EQ(qdds::init_swarm(c, obj).lambda, std::abs(a.lambda));
  c.fixed_lambda = -0.25;
  EXPECT_EQ(qdds::init_swarm(c, obj).lambda, 0.25);
  c.lambda_abs = false;
  EXPECT_EQ(qdds::init_swarm(c, obj).lambda, -0.25);
}

TEST(Run, DeterministicPerSeed) {
  const auto obj = qdds::make_rosenbrock(5);
  for (auto mode : {qdds::UpdateMode::kLiteral, qdds::UpdateMode::kSweep}) {
    auto c = small(8, 5, 60, 42);
    c.mode = mode;
    const auto a = qdds::run(c, obj);
    const auto b = qdds::run(c, obj);
    EXPECT_EQ(a.best_cost, b.best_cost);
    EXPECT_EQ(a.best_solution, b.best_solution);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.events, b.events);
    c.seed = 43;
    EXPECT_NE(qdds::run(c, obj).best_solution, a.best_solution);
  }
}

TEST(Run, DegenerateRangeCollapsesToPoint) {
  const auto obj = qdds::make_sphere(3);
  auto c = small(4, 3, 20);
  c.init_range = qdds::Interval{0.1, 0.1};
  const auto s = qdds::init_swarm(c, obj);
  for (const auto& p : s.particles) {
    for (const auto& h : p.history) {
      EXPECT_EQ(h.delta_prev, qdds::delta_of_r(0.1, 5.0));
      EXPECT_EQ(h.delta_prev2, qdds::delta_of_r(0.1, 5.0));
    }
  }
  EXPECT_NEAR(qdds::run(c, obj).best_cost, 0.03, 1e-9);
}

TEST(Run, TraceShapeAndMonotoneBest) {
  const auto obj = qdds::make_griewank(6);
  for (std::size_t iters : {3u, 4u, 50u, 250u}) {
    const auto r = qdds::run(small(5, 6, iters, iters), obj);
    ASSERT_EQ(r.trace.size(), iters);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      EXPECT_EQ(r.trace[i].iter, i + 1);
      if (i > 0) {
        EXPECT_LE(r.trace[i].best_cost, r.trace[i - 1].best_cost);
        EXPECT_GE(r.trace[i].eval_count, r.trace[i - 1].eval_count);
      }
    }
    EXPECT_EQ(r.trace.back().best_cost, r.best_cost);
    EXPECT_EQ(r.best_cost, obj(r.best_solution));
  }
}

TEST(Run, ThreeIterationBudgetDoesNoUpdates) {
  const auto obj = qdds::make_sphere(2);
  const auto r = qdds::run(small(7, 2, 3), obj);
  EXPECT_EQ(r.eval_count, 14u);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[2].eval_count, 14u);
  EXPECT_THROW(qdds::run(small(7, 2, 2), obj), qdds::ConfigError);
}

TEST(Run, EvaluationCounts) {
  const auto obj = qdds::make_rastrigin(3);
  auto c = small(9, 3, 40);
  EXPECT_EQ(qdds::run(c, obj).eval_count, 2u * 9u + 37u);
  c.mode = qdds::UpdateMode::kSweep;
  EXPECT_EQ(qdds::run(c, obj).eval_count, 2u * 9u + 37u * 9u);
}

TEST(Run, TinyRangeSphereConverges) {
  const auto obj = qdds::make_sphere(1);
  auto c = small(10, 1, 100);
  c.init_range = qdds::Interval{-0.01, 0.01};
  EXPECT_LE(qdds::run(c, obj).best_cost, 1e-4);
}

TEST(Run, InitRangeResolution) {
  const auto obj = qdds::make_griewank(2);
  auto c = small(2, 2, 5);
  EXPECT_EQ(qdds::run(c, obj).init_range, (qdds::Interval{-70.0, 70.0}));
  c.init_range = qdds::Interval{-100, 100};
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  c.init_range = qdds::Interval{1, -1};
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
}

TEST(Config, Errors) {
  const auto obj = qdds::make_sphere(3);
  auto c = small(0, 3, 10);
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  c = small(3, 4, 10);
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  c = small(3, 3, 10);
  c.well.k = 0.0;
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  c = small(3, 3, 10);
  c.well.epsilon = 1.0;
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  c = small(3, 3, 10);
  c.fixed_lambda = NAN;
  EXPECT_THROW(qdds::run(c, obj), qdds::ConfigError);
  EXPECT_THROW(qdds::parse_update_mode("batch"), qdds::ConfigError);
  EXPECT_THROW(qdds::parse_rebind_policy("mid"), qdds::ConfigError);
}

TEST(Step, LiteralModeTouchesOneParticle) {
  const auto obj = qdds::make_rastrigin(3);
  auto s = qdds::init_swarm(small(6, 3, 40), obj);
  while (s.iteration < s.config.well.max_iter) {
    const auto before = s.particles;
    const auto evals = s.eval_count;
    qdds::step(s, obj);
    ASSERT_EQ(s.last_updates.size(), 1u);
    ASSERT_EQ(s.eval_count, evals + 1);
    const std::size_t chosen = s.last_updates[0].particle;
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
      if (i == chosen) continue;
      ASSERT_EQ(s.particles[i].position, before[i].position);
      ASSERT_EQ(s.particles[i].history, before[i].history);
    }
  }
  EXPECT_THROW(qdds::step(s, obj), qdds::ContractViolation);
}

TEST(Step, BlendStaysBetweenRawAndBest) {
  const auto obj = qdds::make_rosenbrock(4);
  auto c = small(5, 4, 80);
  c.mode = qdds::UpdateMode::kSweep;
  auto s = qdds::init_swarm(c, obj);
  while (s.iteration < c.well.max_iter) {
    const auto gbest = s.best_solution;
    qdds::step(s, obj);
    ASSERT_EQ(s.last_updates.size(), 5u);
    const auto& first = s.last_updates.front();
    ASSERT_GE(first.rho, 0.0);
    ASSERT_LT(first.rho, 1.0);
    for (std::size_t d = 0; d < 4; ++d) {
      ASSERT_GE(first.blended[d], std::min(first.raw[d], gbest[d]));
      ASSERT_LE(first.blended[d], std::max(first.raw[d], gbest[d]));
    }
  }
}

TEST(Step, InBandPreBlendKeepsRawPosition) {
  // With pre-blend rebinding a carried delta maps back to the same raw
  // position the particle had before its previous blend.
  const auto obj = qdds::make_sphere(2);
  auto c = small(1, 2, 10);
  c.init_range = qdds::Interval{0.5, 0.6};
  c.rebind = qdds::RebindPolicy::kPreBlend;
  auto s = qdds::init_swarm(c, obj);
  auto& p = s.particles[0];
  for (std::size_t d = 0; d < 2; ++d) {
    p.history[d] = {qdds::delta_of_r(0.55, 5.0), qdds::delta_of_r(0.54, 5.0)};
  }
  qdds::step(s, obj);
  const auto& rec = s.last_updates[0];
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_EQ(rec.branches[d], qdds::DeltaBranch::kInBand);
    EXPECT_NEAR(rec.raw[d], 0.55, 1e-12);
    EXPECT_EQ(p.history[d].delta_prev, qdds::delta_of_r(0.55, 5.0));
  }
  EXPECT_EQ(s.events.in_band_noops, 2u);
}

TEST(Step, ZeroLambdaFreezesDeltaRecursion) {
  const auto obj = qdds::make_rastrigin(3);
  auto c = small(4, 3, 30);
  c.fixed_lambda = 0.0;
  c.rebind = qdds::RebindPolicy::kPreBlend;
  auto s = qdds::init_swarm(c, obj);
  std::vector<V> start;
  for (const auto& p : s.particles) start.push_back(p.position);
  while (s.iteration < c.well.max_iter) {
    std::vector<std::vector<double>> before;
    for (const auto& p : s.particles) {
      V dp;
      for (const auto& h : p.history) dp.push_back(h.delta_prev);
      before.push_back(dp);
    }
    qdds::step(s, obj);
    const auto& rec = s.last_updates[0];
    for (std::size_t d = 0; d < 3; ++d) {
      ASSERT_EQ(s.particles[rec.particle].history[d].delta_prev,
                before[rec.particle][d]);
      ASSERT_NEAR(rec.raw[d], start[rec.particle][d], 1e-9);
    }
  }
}

TEST(Step, UnsolvableDeltaKeepsPositionAndCounts) {
  const auto obj = qdds::make_sphere(1);
  auto c = small(1, 1, 10);
  c.init_range = qdds::Interval{69.0, 70.0};
  c.fixed_lambda = -1.0;
  auto s = qdds::init_swarm(c, obj);
  auto& p = s.particles[0];
  p.position = {70.0};
  p.history[0] = {qdds::delta_of_r(70.0, 5.0), qdds::delta_of_r(69.0, 5.0)};
  s.best_solution = {70.0};
  qdds::step(s, obj);
  EXPECT_EQ(s.events.guard_clamps, 1u);
  EXPECT_EQ(s.last_updates[0].branches[0], qdds::DeltaBranch::kHighRising);
  EXPECT_EQ(s.last_updates[0].raw[0], 70.0);
  EXPECT_EQ(p.position[0], 70.0);
}

TEST(Blend, ClampedConvexCombination) {
  EXPECT_EQ(qdds::blend_with_gbest(V{1.0}, V{3.0}, 0.25), (V{2.5}));
  EXPECT_EQ(qdds::blend_with_gbest(V{1.0}, V{3.0}, 0.0), (V{3.0}));
  EXPECT_EQ(qdds::blend_with_gbest(V{1.0}, V{3.0}, 1.0), (V{1.0}));
  EXPECT_THROW(qdds::blend_with_gbest(V{1.0}, V{1.0, 2.0}, 0.5),
               qdds::ContractViolation);
  EXPECT_THROW(qdds::blend_with_gbest(V{1.0}, V{2.0}, 1.5),
               qdds::ContractViolation);
}

}  // namespace
