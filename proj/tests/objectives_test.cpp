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

#include <qdds/objectives.hpp>
#include <qdds/random.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

namespace {

using V = std::vector<double>;

TEST(Rastrigin, Values) {
  EXPECT_EQ(qdds::rastrigin(V(7, 0.0)), 0.0);
  EXPECT_NEAR(qdds::rastrigin(V{1.0, 1.0}), 2.0, 1e-12);
  EXPECT_NEAR(qdds::rastrigin(V{0.5}), 20.25, 1e-12);
}

TEST(Rosenbrock, Values) {
  EXPECT_EQ(qdds::rosenbrock(V(5, 1.0)), 0.0);
  EXPECT_EQ(qdds::rosenbrock(V{0.0, 0.0}), 1.0);
  EXPECT_EQ(qdds::rosenbrock(V(10, 0.0)), 9.0);
  EXPECT_THROW(qdds::rosenbrock(V{1.0}), qdds::ConfigError);
  EXPECT_THROW(qdds::make_rosenbrock(1), qdds::ConfigError);
}

TEST(Sphere, Values) {
  EXPECT_EQ(qdds::sphere(V(3, 0.0)), 0.0);
  EXPECT_EQ(qdds::sphere(V{3.0, 4.0}), 25.0);
  qdds::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    V x(6);
    for (auto& v : x) v = rng.uniform(-10, 10);
    V x2 = x;
    for (auto& v : x2) v *= 2;
    EXPECT_NEAR(qdds::sphere(x2), 4 * qdds::sphere(x), 1e-12 * qdds::sphere(x2));
  }
}

TEST(Griewank, Values) {
  EXPECT_EQ(qdds::griewank(V(4, 0.0)), 0.0);
  EXPECT_NEAR(qdds::griewank(V{std::numbers::pi}),
              2.0 + std::numbers::pi * std::numbers::pi / 4000.0, 1e-12);
  EXPECT_NEAR(qdds::griewank(V{std::numbers::pi}), 2.0024674, 1e-7);
}

TEST(Benchmarks, KnownMinimaAndRanges) {
  for (const auto& name : qdds::benchmark_names()) {
    for (std::size_t dim : {2u, 10u, 30u}) {
      const auto obj = qdds::make_benchmark(name, dim);
      EXPECT_EQ(obj.name, name);
      EXPECT_EQ(obj.dimension, dim);
      ASSERT_TRUE(obj.known_min.has_value());
      EXPECT_NEAR(obj(obj.known_min->location), obj.known_min->value, 1e-12);
      EXPECT_FALSE(obj.init_range.empty());
    }
  }
  EXPECT_EQ(qdds::make_rastrigin(2).init_range, (qdds::Interval{-5.12, 5.12}));
  EXPECT_EQ(qdds::make_rosenbrock(2).init_range,
            (qdds::Interval{-2.048, 2.048}));
  EXPECT_EQ(qdds::make_sphere(2).init_range, (qdds::Interval{-100, 100}));
  EXPECT_EQ(qdds::make_griewank(2).init_range, (qdds::Interval{-600, 600}));
}

TEST(Benchmarks, UnknownNameAndZeroDimension) {
  EXPECT_THROW(qdds::make_benchmark("ackley", 3), qdds::ConfigError);
  EXPECT_THROW(qdds::make_benchmark("sphere", 0), qdds::ConfigError);
}

TEST(Benchmarks, Pure) {
  qdds::Rng rng(9);
  for (const auto& name : qdds::benchmark_names()) {
    const auto obj = qdds::make_benchmark(name, 8);
    V x(8);
    for (auto& v : x) v = rng.uniform(-3, 3);
    const double a = obj(x);
    const double b = obj(x);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a), std::bit_cast<std::uint64_t>(b));
  }
}

}  // namespace
