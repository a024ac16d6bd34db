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
 * \file qdds/fir.hpp
 *
 * \brief Low-pass FIR design objective.
 *
 * The ideal response is 1 on [0, wp] and 0 on [ws, pi]. For coefficients h,
 *
 *   Ep = 1/pi int_0^wp (1 - |H(w)|)^2 dw,   Es = 1/pi int_ws^pi |H(w)|^2 dw,
 *   gamma = eta Ep + (1 - eta) Es,
 *
 * with both integrals taken by the composite trapezoidal rule.
 */

#ifndef QDDS_FIR_HPP
#define QDDS_FIR_HPP

#include <qdds/errors.hpp>
#include <qdds/objectives.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qdds {

struct FilterSpec {
  std::size_t order_label = 10;  // total coefficient count
  double omega_p = 0.3 * std::numbers::pi;
  double omega_s = 0.6 * std::numbers::pi;
  double eta = 0.5;
  std::size_t grid_points = 2048;  // samples per band for the cost integrals
  bool symmetric = true;

  std::size_t free_variables() const {
    return symmetric ? (order_label + 1) / 2 : order_label;
  }

  void validate() const {
    if (order_label == 0) throw ConfigError("filter needs at least one tap");
    if (symmetric && order_label % 2 != 0) {
      throw ConfigError("symmetric filters need an even coefficient count");
    }
    if (!(omega_p > 0.0 && omega_p < omega_s &&
          omega_s < std::numbers::pi)) {
      throw ConfigError("band edges must satisfy 0 < wp < ws < pi");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw ConfigError("band weight eta must lie in [0, 1]");
    }
    if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
  }
};

struct BandErrors {
  double e_p = 0.0;
  double e_s = 0.0;
};

struct FilterEval {
  double e_p = 0.0;
  double e_s = 0.0;
  double gamma = 0.0;
  double delta_db = 0.0;
};

/// Default grid for the stopband attenuation statistic.
inline constexpr std::size_t kAttenuationGrid = 8192;

namespace detail {

// |sum_n h(n) e^{-j w n}|, accumulated in index order.
inline double response_magnitude(std::span<const double> h, double omega) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    const double phase = omega * static_cast<double>(n);
    re += h[n] * std::cos(phase);
    im -= h[n] * std::sin(phase);
  }
  return std::hypot(re, im);
}

inline double band_sample(double lo, double hi, std::size_t i,
                          std::size_t points) {
  if (i + 1 == points) return hi;
  return lo + (hi - lo) * static_cast<double>(i) /
                  static_cast<double>(points - 1);
}

template <class F>
double trapezoid(double lo, double hi, std::size_t points, F&& f) {
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double sum = 0.5 * (f(band_sample(lo, hi, 0, points)) +
                      f(band_sample(lo, hi, points - 1, points)));
  for (std::size_t i = 1; i + 1 < points; ++i) {
    sum += f(band_sample(lo, hi, i, points));
  }
  return sum * step;
}

}  // namespace detail

/// Magnitude of the frequency response at omega in [0, pi].
inline double fir_response_magnitude(std::span<const double> h,
                                     double omega) {
  if (!(omega >= 0.0 && omega <= std::numbers::pi)) {
    throw ContractViolation("fir_response_magnitude: omega outside [0, pi]");
  }
  return detail::response_magnitude(h, omega);
}

inline BandErrors fir_band_errors(std::span<const double> h,
                                  const FilterSpec& spec) {
  spec.validate();
  const double pi = std::numbers::pi;
  BandErrors out;
  out.e_p = detail::trapezoid(0.0, spec.omega_p, spec.grid_points,
                              [&](double w) {
                                const double d =
                                    1.0 - detail::response_magnitude(h, w);
                                return d * d;
                              }) /
            pi;
  out.e_s = detail::trapezoid(spec.omega_s, pi, spec.grid_points,
                              [&](double w) {
                                const double m =
                                    detail::response_magnitude(h, w);
                                return m * m;
                              }) /
            pi;
  return out;
}

inline double fir_cost(std::span<const double> h, const FilterSpec& spec) {
  const BandErrors e = fir_band_errors(h, spec);
  return spec.eta * e.e_p + (1.0 - spec.eta) * e.e_s;
}

/// 20 log10 of the largest |H| on a uniform stopband grid; -inf if |H| == 0.
inline double stopband_attenuation_db(std::span<const double> h,
                                      const FilterSpec& spec,
                                      std::size_t grid = kAttenuationGrid) {
  spec.validate();
  if (grid < 2) throw ContractViolation("attenuation grid must be >= 2");
  double peak = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double w =
        detail::band_sample(spec.omega_s, std::numbers::pi, i, grid);
    peak = std::max(peak, detail::response_magnitude(h, w));
  }
  if (peak == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak);
}

/**
 * Highest local maximum of |H| strictly inside the stopband grid, in dB.
 * Ignores the monotone roll-off at the band edge, so it reports the tallest
 * sidelobe only. Returns -inf when no interior lobe exists.
 */
inline double stopband_sidelobe_db(std::span<const double> h,
                                   const FilterSpec& spec,
                                   std::size_t grid = kAttenuationGrid) {
  spec.validate();
  if (grid < 3) throw ContractViolation("sidelobe grid must be >= 3");
  std::vector<double> mag(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    mag[i] = detail::response_magnitude(
        h, detail::band_sample(spec.omega_s, std::numbers::pi, i, grid));
  }
  double peak = -1.0;
  for (std::size_t i = 1; i + 1 < grid; ++i) {
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) {
      peak = std::max(peak, mag[i]);
    }
  }
  if (peak <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak);
}

/// Mirrors the free half so that h(n) == h(N - 1 - n); output length 2 * size.
inline std::vector<double> expand_symmetric(std::span<const double> half) {
  if (half.empty()) {
    throw ContractViolation("expand_symmetric: empty coefficient list");
  }
  std::vector<double> full(half.begin(), half.end());
  full.insert(full.end(), half.rbegin(), half.rend());
  return full;
}

/// Full coefficient vector for a point in the optimizer's search space.
inline std::vector<double> coefficients_from_variables(
    std::span<const double> vars, const FilterSpec& spec) {
  if (vars.size() != spec.free_variables()) {
    throw ContractViolation("filter variable count does not match the spec");
  }
  if (spec.symmetric) return expand_symmetric(vars);
  return {vars.begin(), vars.end()};
}

inline FilterEval evaluate_filter(std::span<const double> h,
                                  const FilterSpec& spec,
                                  std::size_t atten_grid = kAttenuationGrid) {
  const BandErrors e = fir_band_errors(h, spec);
  FilterEval out;
  out.e_p = e.e_p;
  out.e_s = e.e_s;
  out.gamma = spec.eta * e.e_p + (1.0 - spec.eta) * e.e_s;
  out.delta_db = stopband_attenuation_db(h, spec, atten_grid);
  return out;
}

/**
 * fir_cost with the cos/sin tables of both band grids cached. Produces the
 * same bits as fir_cost on the expanded coefficients.
 */
class FirCostEvaluator {
 public:
  explicit FirCostEvaluator(FilterSpec spec) : spec_(spec) {
    spec_.validate();
    const double pi = std::numbers::pi;
    const std::size_t taps = spec_.order_label;
    const std::size_t pts = spec_.grid_points;
    pass_ = Table(pts, taps);
    stop_ = Table(pts, taps);
    for (std::size_t i = 0; i < pts; ++i) {
      const double wp = detail::band_sample(0.0, spec_.omega_p, i, pts);
      const double ws = detail::band_sample(spec_.omega_s, pi, i, pts);
      for (std::size_t n = 0; n < taps; ++n) {
        pass_.cos[i * taps + n] = std::cos(wp * static_cast<double>(n));
        pass_.sin[i * taps + n] = std::sin(wp * static_cast<double>(n));
        stop_.cos[i * taps + n] = std::cos(ws * static_cast<double>(n));
        stop_.sin[i * taps + n] = std::sin(ws * static_cast<double>(n));
      }
    }
  }

  const FilterSpec& spec() const { return spec_; }

  double operator()(std::span<const double> vars) const {
    const std::vector<double> h = coefficients_from_variables(vars, spec_);
    const double pi = std::numbers::pi;
    const std::size_t pts = spec_.grid_points;
    const double pass_step = spec_.omega_p / static_cast<double>(pts - 1);
    const double stop_step =
        (pi - spec_.omega_s) / static_cast<double>(pts - 1);

    auto integrate = [&](const Table& t, double step, bool passband) {
      auto sample = [&](std::size_t i) {
        const double m = magnitude(t, i, h);
        const double d = passband ? 1.0 - m : m;
        return d * d;
      };
      double sum = 0.5 * (sample(0) + sample(pts - 1));
      for (std::size_t i = 1; i + 1 < pts; ++i) sum += sample(i);
      return sum * step / pi;
    };
    const double e_p = integrate(pass_, pass_step, true);
    const double e_s = integrate(stop_, stop_step, false);
    return spec_.eta * e_p + (1.0 - spec_.eta) * e_s;
  }

 private:
  struct Table {
    Table() = default;
    Table(std::size_t points, std::size_t taps)
        : taps(taps), cos(points * taps), sin(points * taps) {}
    std::size_t taps = 0;
    std::vector<double> cos;
    std::vector<double> sin;
  };

  static double magnitude(const Table& t, std::size_t i,
                          const std::vector<double>& h) {
    double re = 0.0;
    double im = 0.0;
    const double* c = t.cos.data() + i * t.taps;
    const double* s = t.sin.data() + i * t.taps;
    for (std::size_t n = 0; n < t.taps; ++n) {
      re += h[n] * c[n];
      im -= h[n] * s[n];
    }
    return std::hypot(re, im);
  }

  FilterSpec spec_;
  Table pass_;
  Table stop_;
};

/// Objective over the free variables of \a spec, initialised in [-1, 1].
inline Objective make_fir_objective(const FilterSpec& spec) {
  auto evaluator = std::make_shared<const FirCostEvaluator>(spec);
  Objective obj;
  obj.name = "fir";
  obj.dimension = spec.free_variables();
  obj.evaluate = [evaluator](std::span<const double> x) {
    return (*evaluator)(x);
  };
  obj.init_range = {-1.0, 1.0};
  return obj;
}

// Coefficient files: one value per line, %.17g. -----------------------------

inline void write_coefficients_csv(const std::string& path,
                                   std::span<const double> h) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  char buf[64];
  for (double v : h) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::vector<double> read_coefficients_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<double> h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      h.push_back(std::stod(line.substr(first), &used));
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": not a coefficient: '" + line + "'");
    }
  }
  return h;
}

}  // namespace qdds

#endif  // QDDS_FIR_HPP
