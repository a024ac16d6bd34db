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

// Test-only reference computations. Nothing here calls into the library's
// solver or quadrature, so they can be used to check them.

#ifndef QDDS_TESTS_ORACLES_HPP
#define QDDS_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

inline double delta(double r, double k) {
  return std::exp(2 * k * r) - 5 * std::exp(-2 * k * r) + 4 * k * r + 4;
}

// Plain bisection on [-350/k, 350/k]; 200 halvings reach the ulp floor.
inline double bisect_inverse(double target, double k) {
  double lo = -350.0 / k;
  double hi = 350.0 / k;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (delta(mid, k) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Closed-form integral of psi^2 over (-r, r) for the even state with
// amplitude B^2, from the antiderivatives of each piece.
inline double psi_squared_mass(double r, double k, double b2) {
  const double right = 4 * b2 * (1 - std::exp(-2 * k * r)) / (2 * k);
  const double left = b2 * ((std::exp(2 * k * r) - 1) / (2 * k) + 2 * r +
                            (1 - std::exp(-2 * k * r)) / (2 * k));
  return left + right;
}

inline double response(const std::vector<double>& h, double w) {
  std::complex<double> acc = 0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    acc += h[n] * std::polar(1.0, -w * static_cast<double>(n));
  }
  return std::abs(acc);
}

}  // namespace oracle

#endif  // QDDS_TESTS_ORACLES_HPP
