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

#ifndef QDDS_OBJECTIVES_HPP
#define QDDS_OBJECTIVES_HPP

#include <qdds/errors.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qdds {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo <= hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct KnownMinimum {
  std::vector<double> location;
  double value = 0.0;
};

/// A named cost function to be minimised.
struct Objective {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> evaluate;
  Interval init_range;
  std::optional<KnownMinimum> known_min;

  double operator()(std::span<const double> x) const { return evaluate(x); }
};

// Benchmarks -----------------------------------------------------------------

inline double rastrigin(std::span<const double> x) {
  constexpr double a = 10.0;
  double sum = a * static_cast<double>(x.size());
  for (double xi : x) {
    sum += xi * xi - a * std::cos(2.0 * std::numbers::pi * xi);
  }
  return sum;
}

inline double rosenbrock(std::span<const double> x) {
  if (x.size() < 2) {
    throw ConfigError("rosenbrock needs at least two dimensions");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

inline double sphere(std::span<const double> x) {
  double sum = 0.0;
  for (double xi : x) sum += xi * xi;
  return sum;
}

inline double griewank(std::span<const double> x) {
  double sum = 0.0;
  double prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return 1.0 + sum / 4000.0 - prod;
}

namespace detail {

inline Objective make_benchmark(std::string name, std::size_t dim,
                                double (*fn)(std::span<const double>),
                                Interval range, double optimum_coord) {
  if (dim == 0) throw ConfigError(name + ": dimension must be positive");
  Objective obj;
  obj.name = std::move(name);
  obj.dimension = dim;
  obj.evaluate = fn;
  obj.init_range = range;
  obj.known_min = KnownMinimum{std::vector<double>(dim, optimum_coord), 0.0};
  return obj;
}

}  // namespace detail

inline Objective make_rastrigin(std::size_t dim) {
  return detail::make_benchmark("rastrigin", dim, &rastrigin, {-5.12, 5.12},
                                0.0);
}

inline Objective make_rosenbrock(std::size_t dim) {
  if (dim < 2) throw ConfigError("rosenbrock needs at least two dimensions");
  return detail::make_benchmark("rosenbrock", dim, &rosenbrock,
                                {-2.048, 2.048}, 1.0);
}

inline Objective make_sphere(std::size_t dim) {
  return detail::make_benchmark("sphere", dim, &sphere, {-100.0, 100.0}, 0.0);
}

inline Objective make_griewank(std::size_t dim) {
  return detail::make_benchmark("griewank", dim, &griewank, {-600.0, 600.0},
                                0.0);
}

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"rosenbrock", "rastrigin",
                                                 "sphere", "griewank"};
  return names;
}

/// Looks a benchmark up by name; throws ConfigError for unknown names.
inline Objective make_benchmark(std::string_view name, std::size_t dim) {
  if (name == "rastrigin") return make_rastrigin(dim);
  if (name == "rosenbrock") return make_rosenbrock(dim);
  if (name == "sphere") return make_sphere(dim);
  if (name == "griewank") return make_griewank(dim);
  throw ConfigError("unknown benchmark function '" + std::string(name) + "'");
}

}  // namespace qdds

#endif  // QDDS_OBJECTIVES_HPP
