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

#ifndef QDDS_STATS_HPP
#define QDDS_STATS_HPP

#include <qdds/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace qdds {

struct TrialStats {
  double mean = 0.0;
  double std = 0.0;  // sample deviation, n - 1 denominator; 0 for one trial
  double best = 0.0;
  double worst = 0.0;
  std::size_t count = 0;
};

inline TrialStats aggregate_stats(std::span<const double> costs) {
  if (costs.empty()) {
    throw ContractViolation("aggregate_stats: no trial costs");
  }
  const auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
  TrialStats s;
  s.count = costs.size();
  s.best = *lo;
  s.worst = *hi;

  // Shifted by the minimum so identical samples give an exact mean.
  const double n = static_cast<double>(costs.size());
  double shifted = 0.0;
  for (double c : costs) shifted += c - s.best;
  s.mean = std::clamp(s.best + shifted / n, s.best, s.worst);

  if (costs.size() > 1) {
    double ss = 0.0;
    for (double c : costs) ss += (c - s.mean) * (c - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace qdds

#endif  // QDDS_STATS_HPP
