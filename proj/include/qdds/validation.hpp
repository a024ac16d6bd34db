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

// Math-identity checks behind `qdds validate`.

#ifndef QDDS_VALIDATION_HPP
#define QDDS_VALIDATION_HPP

#include <qdds/delta_well.hpp>
#include <qdds/fir.hpp>
#include <qdds/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qdds {

/// Free halves of the published linear-phase low-pass designs
/// (wp = 0.3 pi, ws = 0.6 pi) and their reported stopband attenuation.
inline constexpr std::array<double, 5> kPublishedTenTapHalf = {
    0.070824792496751651, -0.063184376757871669, -0.038806613903081974,
    0.013227497402604124, 0.39889122413816075};
inline constexpr double kPublishedTenTapAttenuationDb = -13.6466;

inline constexpr std::array<double, 10> kPublishedTwentyTapHalf = {
    0.011566963779404912,  0.0077331878563942523, -0.0094736298940968737,
    -0.0068424142182682956, 0.024047530227972496, 0.04099248691610477,
    0.14983102243854188,   0.0057626071427242216, -0.0038505536917844913,
    0.28023279944300716};
inline constexpr double kPublishedTwentyTapAttenuationDb = -17.7398;

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst observed error / value
  double tolerance = 0.0;
  std::string detail;
};

/// r -> delta -> r for \a samples random (r, k), r in [-5, 5], k in [1, 10].
/// worst is the largest |r' - r| / max(1, |r|).
inline CheckResult check_inverse_round_trip(std::size_t samples,
                                            std::uint64_t seed = 7) {
  Rng rng(seed);
  CheckResult out{"inverse round trip", true, 0.0, 1e-9, ""};
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = rng.uniform(-5.0, 5.0);
    const double k = rng.uniform(1.0, 10.0);
    const double back = r_of_delta(delta_of_r(r, k), k);
    out.worst = std::max(out.worst, std::abs(back - r) / std::max(1.0, std::abs(r)));
  }
  out.passed = out.worst <= out.tolerance;
  out.detail = std::to_string(samples) + " samples";
  return out;
}

/// Quadrature of psi^2 against g/2 for random probes r in (0, 2],
/// g in (1, 2), k in [1, 10]. worst is the largest relative error.
inline CheckResult check_confinement(std::size_t probes,
                                     std::size_t quad_points,
                                     std::uint64_t seed = 11) {
  Rng rng(seed);
  CheckResult out{"confinement integral", true, 0.0, 1e-6, ""};
  for (std::size_t i = 0; i < probes; ++i) {
    const double r = 2.0 * (1.0 - rng.uniform01());
    double g = rng.uniform(1.0, 2.0);
    if (g == 1.0) g = 1.5;
    const double k = rng.uniform(1.0, 10.0);
    const double mass = confinement_integral(make_wave_probe(r, g, k), quad_points);
    out.worst = std::max(out.worst, std::abs(mass - 0.5 * g) / (0.5 * g));
  }
  out.passed = out.worst <= out.tolerance;
  out.detail = std::to_string(probes) + " probes, " +
               std::to_string(quad_points) + " points";
  return out;
}

inline CheckResult check_published_attenuation(std::span<const double> half,
                                               double expected_db,
                                               const std::string& name,
                                               double tol_db = 0.1) {
  const std::vector<double> h = expand_symmetric(half);
  FilterSpec spec;
  spec.order_label = h.size();
  const double got = stopband_attenuation_db(h, spec, kAttenuationGrid);
  const double lobe = stopband_sidelobe_db(h, spec, kAttenuationGrid);
  CheckResult out{name, false, got, tol_db, ""};
  out.passed = std::abs(got - expected_db) <= tol_db;
  out.detail = "expected " + std::to_string(expected_db) + " dB, got " +
               std::to_string(got) + " dB (tallest interior sidelobe " +
               std::to_string(lobe) + " dB)";
  return out;
}

inline std::vector<CheckResult> run_validation_suite(
    std::size_t round_trips = 100000, std::size_t probes = 100,
    std::size_t quad_points = 100000) {
  return {check_inverse_round_trip(round_trips),
          check_confinement(probes, quad_points),
          check_published_attenuation(kPublishedTenTapHalf,
                                      kPublishedTenTapAttenuationDb,
                                      "10-tap attenuation"),
          check_published_attenuation(kPublishedTwentyTapHalf,
                                      kPublishedTwentyTapAttenuationDb,
                                      "20-tap attenuation")};
}

}  // namespace qdds

#endif  // QDDS_VALIDATION_HPP
