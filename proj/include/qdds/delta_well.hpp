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
 * \file qdds/delta_well.hpp
 *
 * \brief Physics core of the double delta swarm: the transcendental
 *  delta(r) map, its inverse, the learning-rate schedule, the gated delta
 *  update and the even bound-state wavefunction used to validate them.
 *
 * Two attractive delta wells sit at the origin. For a bound particle with
 * well stiffness k, the probability of finding it inside (-r, r) is
 *
 *   int_{-r}^{r} psi(x)^2 dx = B^2 * delta(r) / (2k),
 *   delta(r) = e^{2kr} - 5 e^{-2kr} + 4kr + 4,
 *
 * so demanding a confinement mass of g/2 fixes B^2 = k g / delta(r). Holding
 * B^2 fixed between iterations turns the ratio of consecutive g values into a
 * ratio of consecutive deltas, which must stay within (1/2, 2).
 */

#ifndef QDDS_DELTA_WELL_HPP
#define QDDS_DELTA_WELL_HPP

#include <qdds/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>

namespace qdds {

/// Largest admissible |2 k r|; keeps e^{2kr} inside double range.
inline constexpr double kExponentGuard = 700.0;

/// Default relative tolerance of the inverse solve.
inline constexpr double kDefaultInverseTolerance = 1e-12;

/// Constants of one optimizer run.
struct WellParams {
  double k = 5.0;
  double epsilon = 0.3;
  double lambda = 0.0;
  std::size_t max_iter = 250;

  void validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw ConfigError("well stiffness k must be positive and finite");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw ConfigError("learning-rate floor epsilon must lie in [0, 1)");
    }
    if (!std::isfinite(lambda)) {
      throw ConfigError("step scale lambda must be finite");
    }
    if (max_iter < 3) {
      throw ConfigError("max_iter must be at least 3");
    }
  }
};

/// Two-deep delta memory of one coordinate.
struct DeltaHistory {
  double delta_prev = 0.0;   // delta at t-1
  double delta_prev2 = 0.0;  // delta at t-2

  /// Discrete gradient delta_{t-1} - delta_{t-2}.
  double gradient() const { return delta_prev - delta_prev2; }

  friend bool operator==(const DeltaHistory&, const DeltaHistory&) = default;
};

/// Half-width of the position interval on which delta(r) is evaluated.
inline double guard_radius(double k) { return kExponentGuard / (2.0 * k); }

inline bool within_guard(double r, double k) {
  return std::abs(2.0 * k * r) <= kExponentGuard;
}

namespace detail {

inline double delta_unchecked(double r, double k) {
  const double kr = k * r;
  return std::exp(2.0 * kr) - 5.0 * std::exp(-2.0 * kr) + 4.0 * kr + 4.0;
}

inline double delta_slope_unchecked(double r, double k) {
  const double kr = k * r;
  return 2.0 * k * std::exp(2.0 * kr) + 10.0 * k * std::exp(-2.0 * kr) +
         4.0 * k;
}

inline std::string describe(double r, double k) {
  std::ostringstream oss;
  oss.precision(17);
  oss << "(r=" << r << ", k=" << k << ")";
  return oss.str();
}

}  // namespace detail

/// delta(r) = e^{2kr} - 5 e^{-2kr} + 4kr + 4. Strictly increasing for k > 0.
inline double delta_of_r(double r, double k) {
  if (!std::isfinite(r) || !std::isfinite(k) || !within_guard(r, k)) {
    throw DomainError("delta_of_r: |2kr| exceeds the overflow guard at " +
                      detail::describe(r, k));
  }
  return detail::delta_unchecked(r, k);
}

/// d delta / dr = 2k e^{2kr} + 10k e^{-2kr} + 4k, always positive for k > 0.
inline double delta_slope(double r, double k) {
  if (!std::isfinite(r) || !std::isfinite(k) || !within_guard(r, k)) {
    throw DomainError("delta_slope: |2kr| exceeds the overflow guard at " +
                      detail::describe(r, k));
  }
  return detail::delta_slope_unchecked(r, k);
}

/// Outcome of an inverse solve, with the work it took.
struct InverseSolution {
  double r = 0.0;
  int iterations = 0;
  int bisections = 0;  // steps where Newton left the bracket
};

/**
 * Solves delta_of_r(r, k) == delta for r.
 *
 * Safeguarded Newton inside a bracket that is grown geometrically from the
 * origin towards the sign of \a delta. The bracket never leaves the overflow
 * guard; a target beyond delta(+-guard_radius(k)) throws UnsolvableInput.
 * Converged when |delta(r) - delta| <= tol * max(1, |delta|), or when the
 * bracket has shrunk to a few ulps.
 */
inline InverseSolution solve_r_of_delta(double delta, double k,
                                        double tol = kDefaultInverseTolerance) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ContractViolation("r_of_delta: k must be positive");
  }
  if (!(tol > 0.0)) {
    throw ContractViolation("r_of_delta: tolerance must be positive");
  }
  if (!std::isfinite(delta)) {
    throw UnsolvableInput("r_of_delta: delta is not finite");
  }

  InverseSolution out;
  if (delta == 0.0) return out;

  const double limit = guard_radius(k);
  const double sign = delta > 0.0 ? 1.0 : -1.0;

  // Bracket [lo, hi] with delta(lo) <= target <= delta(hi).
  double inner = 0.0;
  double outer = std::min(0.5 / k, limit);
  while (sign * (detail::delta_unchecked(sign * outer, k) - delta) < 0.0) {
    if (outer >= limit) {
      std::ostringstream oss;
      oss.precision(17);
      oss << "r_of_delta: delta=" << delta << " lies beyond the guarded range"
          << " for k=" << k;
      throw UnsolvableInput(oss.str());
    }
    inner = outer;
    outer = std::min(2.0 * outer, limit);
  }
  double lo = sign > 0.0 ? inner : -outer;
  double hi = sign > 0.0 ? outer : -inner;

  const double target_scale = tol * std::max(1.0, std::abs(delta));
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    ++out.iterations;
    const double f = detail::delta_unchecked(r, k) - delta;
    if (std::abs(f) <= target_scale) break;
    if (f < 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::abs(r))) {
      break;
    }
    const double next = r - f / detail::delta_slope_unchecked(r, k);
    if (next > lo && next < hi) {
      r = next;
    } else {
      r = 0.5 * (lo + hi);
      ++out.bisections;
    }
  }
  out.r = r;
  return out;
}

inline double r_of_delta(double delta, double k,
                         double tol = kDefaultInverseTolerance) {
  return solve_r_of_delta(delta, k, tol).r;
}

/// theta = (1 - eps) (max_iter - iter) / max_iter + eps; decays linearly 1 -> eps.
inline double learning_rate(std::size_t iter, std::size_t max_iter,
                            double epsilon) {
  if (max_iter == 0 || iter > max_iter) {
    throw ContractViolation("learning_rate: iteration outside [0, max_iter]");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw ContractViolation("learning_rate: epsilon outside [0, 1)");
  }
  const double remaining = static_cast<double>(max_iter - iter) /
                           static_cast<double>(max_iter);
  return (1.0 - epsilon) * remaining + epsilon;
}

/// Which arm of the gated update fired.
enum class DeltaBranch {
  kInBand,       // no arm matched; delta carried over
  kHighRising,   // delta_{t-1} > 2 delta_{t-2}, gradient > 0
  kHighFalling,  // delta_{t-1} > 2 delta_{t-2}, gradient < 0
  kLowFalling,   // delta_{t-1} < delta_{t-2} / 2, gradient < 0
  kLowRising,    // delta_{t-1} < delta_{t-2} / 2, gradient > 0
};

struct DeltaStep {
  double delta = 0.0;
  DeltaBranch branch = DeltaBranch::kInBand;
};

/**
 * Gated delta recursion. Outside the band (delta_{t-2}/2, 2 delta_{t-2}) the
 * previous delta is corrected by theta * gradient * lambda, with the sign
 * picked so that the correction pushes the ratio back towards the band when
 * theta * lambda >= 0. Inside the band, or with a zero gradient, the previous
 * delta is returned unchanged.
 */
inline DeltaStep delta_update_step(const DeltaHistory& hist, double theta,
                                   double lambda) {
  const double prev = hist.delta_prev;
  const double grad = hist.gradient();
  const double correction = theta * grad * lambda;
  if (prev > 2.0 * hist.delta_prev2) {
    if (grad > 0.0) return {prev - correction, DeltaBranch::kHighRising};
    if (grad < 0.0) return {prev + correction, DeltaBranch::kHighFalling};
  } else if (prev < 0.5 * hist.delta_prev2) {
    if (grad < 0.0) return {prev - correction, DeltaBranch::kLowFalling};
    if (grad > 0.0) return {prev + correction, DeltaBranch::kLowRising};
  }
  return {prev, DeltaBranch::kInBand};
}

inline double delta_update(const DeltaHistory& hist, double theta,
                           double lambda) {
  return delta_update_step(hist, theta, lambda).delta;
}

/// Even bound state of the co-located wells, normalised for confinement g/2.
struct WaveProbe {
  double r_boundary = 0.0;
  double g = 0.0;
  double k = 0.0;
  double b_squared = 0.0;

  double amplitude() const { return std::sqrt(b_squared); }
};

/// Builds a probe with B^2 = k g / delta(r). Requires r > 0 and 1 <= g <= 2.
inline WaveProbe make_wave_probe(double r_boundary, double g, double k) {
  if (!(k > 0.0)) throw DomainError("wave probe: k must be positive");
  if (!(r_boundary > 0.0)) {
    throw DomainError("wave probe: vicinity half-width must be positive");
  }
  if (!(g >= 1.0 && g <= 2.0)) {
    throw DomainError("wave probe: confinement factor g must lie in [1, 2]");
  }
  const double d = delta_of_r(r_boundary, k);
  return {r_boundary, g, k, k * g / d};
}

namespace detail {

inline void check_probe(const WaveProbe& probe) {
  if (!(probe.k > 0.0) || !(probe.r_boundary > 0.0) ||
      !(probe.b_squared > 0.0) || !std::isfinite(probe.b_squared)) {
    throw DomainError("invalid wave probe");
  }
}

// psi on the closed vicinity; x == 0 returns the common limit 2B.
inline double psi_even_closed(double x, const WaveProbe& probe) {
  const double b = probe.amplitude();
  if (x >= 0.0) return 2.0 * b * std::exp(-probe.k * x);
  return b * (std::exp(-probe.k * x) + std::exp(probe.k * x));
}

}  // namespace detail

/// psi(x) = 2B e^{-kx} on (0, r) and B (e^{-kx} + e^{kx}) on (-r, 0).
inline double psi_even(double x, const WaveProbe& probe) {
  detail::check_probe(probe);
  if (!(std::abs(x) < probe.r_boundary)) {
    throw DomainError("psi_even: |x| must be below the vicinity half-width");
  }
  return detail::psi_even_closed(x, probe);
}

/**
 * Composite trapezoidal integral of psi^2 over (-r, r), split at the origin
 * where psi has a kink. \a quad_points is the total number of subintervals,
 * shared evenly between the two halves. Equals g/2 up to quadrature error.
 */
inline double confinement_integral(const WaveProbe& probe,
                                   std::size_t quad_points) {
  detail::check_probe(probe);
  if (quad_points == 0) {
    throw ContractViolation("confinement_integral: quad_points must be > 0");
  }
  const std::size_t half = std::max<std::size_t>(1, quad_points / 2);
  const double h = probe.r_boundary / static_cast<double>(half);

  auto density = [&](double x) {
    const double psi = detail::psi_even_closed(x, probe);
    return psi * psi;
  };
  auto trapezoid = [&](double a) {
    double sum = 0.5 * (density(a) + density(a + probe.r_boundary));
    for (std::size_t i = 1; i < half; ++i) {
      sum += density(a + h * static_cast<double>(i));
    }
    return sum * h;
  };
  // The negative half uses the left-hand limit at 0, which is also 2B.
  return trapezoid(-probe.r_boundary) + trapezoid(0.0);
}

}  // namespace qdds

#endif  // QDDS_DELTA_WELL_HPP
