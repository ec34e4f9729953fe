// Copyright 2026 The qpdual Authors
// SPDX-License-Identifier: Apache-2.0
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

// Maximally localized basis inside a degenerate eigenspace.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

namespace qpdual::detail {

/// Sums over sites that fix the pair objective for every relative phase.
struct PairMoments {
  double pp = 0, qq = 0, pq = 0;
  double xx = 0, yy = 0, xy = 0;
  double px = 0, py = 0, qx = 0, qy = 0;

  /// B and C of the rotation objective once column j carries the phase e^{i phi}.
  std::pair<double, double> coefficients(double phi) const {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double rr = c * c * xx + s * s * yy + 2.0 * c * s * xy;
    const double b = 0.25 * (pp + qq) - rr - 0.5 * pq;
    return {b, c * (px - qx) + s * (py - qy)};
  }
  double gain(double phi) const {
    const auto [b, c] = coefficients(phi);
    return std::hypot(b, c) - b;
  }
};

/// Relative phase in [0, pi) with the largest attainable gain: a coarse
/// scan followed by golden-section refinement around the best sample.
inline double best_phase(const PairMoments& m) {
  constexpr int kSamples = 24;
  const double step = std::numbers::pi / kSamples;
  int best = 0;
  double best_gain = -1.0;
  for (int k = 0; k < kSamples; ++k) {
    const double g = m.gain(k * step);
    if (g > best_gain) {
      best_gain = g;
      best = k;
    }
  }
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double g1 = m.gain(x1);
  double g2 = m.gain(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + ratio * (hi - lo);
      g2 = m.gain(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - ratio * (hi - lo);
      g1 = m.gain(x1);
    }
  }
  const double phi = 0.5 * (lo + hi);
  return m.gain(phi) >= best_gain ? phi : best * step;
}

/// Jacobi sweeps of complex plane rotations that maximize the summed IPR
/// of the columns. For a pair with fixed relative phase the objective is
/// C0 + B cos 4t + C sin 4t, so the angle is closed form; the phase comes
/// from a one-dimensional search. Real eigenspaces are promoted to complex
/// because their most localized basis need not be real, and both the
/// real-space and the dual-space bases must come from the same search.
inline void localize_columns(Eigen::MatrixXcd& w, int max_sweeps = 100) {
  const Eigen::Index r = w.cols();
  if (r < 2) return;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double largest = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = i + 1; j < r; ++j) {
        PairMoments m;
        for (Eigen::Index n = 0; n < w.rows(); ++n) {
          const double p = std::norm(w(n, i));
          const double q = std::norm(w(n, j));
          const std::complex<double> z = w(n, i) * std::conj(w(n, j));
          m.pp += p * p;
          m.qq += q * q;
          m.pq += p * q;
          m.xx += z.real() * z.real();
          m.yy += z.imag() * z.imag();
          m.xy += z.real() * z.imag();
          m.px += p * z.real();
          m.py += p * z.imag();
          m.qx += q * z.real();
          m.qy += q * z.imag();
        }
        const double phi = best_phase(m);
        if (!(m.gain(phi) > 1e-14 * (m.pp + m.qq))) continue;
        const auto [b, c] = m.coefficients(phi);
        const double t = 0.25 * std::atan2(c, b);
        largest = std::max(largest, std::abs(t));
        const double ct = std::cos(t);
        const double st = std::sin(t);
        const std::complex<double> phase = std::polar(1.0, phi);
        for (Eigen::Index n = 0; n < w.rows(); ++n) {
          const std::complex<double> a = w(n, i);
          const std::complex<double> e = phase * w(n, j);
          w(n, i) = ct * a + st * e;
          w(n, j) = -st * a + ct * e;
        }
      }
    }
    if (largest < 1e-10) return;
  }
}

}  // namespace qpdual::detail
