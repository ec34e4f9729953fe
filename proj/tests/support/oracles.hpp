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

// Independent reference implementations used by the unit and acceptance
// tests. None of these call into the library: each one is written from
// the defining formula with plain loops so that agreement is meaningful.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qpdual/model.hpp"

namespace qpdual::oracle {

enum class Modulation { Power, Nearest };

// H_{mn} = f_{dist}(a) * F_{x}(b) from the literal double sums with 1-based
// sites. Periodic bonds across the boundary use the image x = m + n + N.
// a_inf keeps only s = 1 in the distance factor, b_inf only s = 1 in F.
inline Eigen::MatrixXd power_law_matrix(double a, double b, int d, int n_sites, long p, bool periodic,
                                        bool a_inf = false, bool b_inf = false) {
  const double tau = static_cast<double>(p) / n_sites;
  const int d_dist = a_inf ? 1 : d;
  const int d_mod = b_inf ? 1 : d;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int m = 1; m <= n_sites; ++m) {
    for (int n = 1; n <= n_sites; ++n) {
      int direct = std::abs(m - n);
      int dist = direct;
      double x = m + n;
      if (periodic && n_sites - direct < direct) {
        dist = n_sites - direct;
        x += n_sites;
      }
      if (dist < 1 || dist > d_dist) continue;
      double f_dist = std::pow(static_cast<double>(dist), -a);
      double big_f = 0.0;
      for (int s = 1; s <= d_mod; ++s) big_f += std::pow(static_cast<double>(s), -b) *
                                                 std::cos(tau * s * std::numbers::pi * x);
      h(m - 1, n - 1) = f_dist * big_f;
    }
  }
  return h;
}

// Diagonal AAH: t on every bond, V cos(2 pi tau m) on site m.
inline Eigen::MatrixXd diagonal_aah_matrix(double t, double v, int n_sites, long p, bool periodic) {
  const double tau = static_cast<double>(p) / n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int m = 1; m <= n_sites; ++m) {
    h(m - 1, m - 1) = v * std::cos(2.0 * std::numbers::pi * tau * m);
    if (m < n_sites) h(m - 1, m) = h(m, m - 1) = t;
  }
  if (periodic) h(0, n_sites - 1) = h(n_sites - 1, 0) = t;
  return h;
}

struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass is below
// 1e-15 of the total. Values ascending, vectors as columns.
inline Eigensystem jacobi(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double total = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) < 1e-15 * total) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
  Eigensystem out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

inline double fractal_dimension(const Eigen::VectorXd& psi) {
  double ipr = 0.0;
  for (int i = 0; i < psi.size(); ++i) ipr += std::pow(psi(i), 4);
  return -std::log(ipr) / std::log(static_cast<double>(psi.size()));
}

// exp(-i H t) by scaling and squaring with a degree-30 Taylor series.
inline Eigen::MatrixXcd propagator(const Eigen::MatrixXd& h, double t) {
  const int n = static_cast<int>(h.rows());
  Eigen::MatrixXcd a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  a /= std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// gamma for the constant chain t_n = 1, eps = 0 at energy E with |E| > 2:
// the larger root of z^2 - E z + 1 = 0 gives ln((|E| + sqrt(E^2 - 4)) / 2).
inline double constant_chain_gamma(double energy) {
  const double e = std::abs(energy);
  return std::log((e + std::sqrt(e * e - 4.0)) / 2.0);
}

/// The convenience constructors only accept Fibonacci sizes; small oracle
/// lattices such as N = 12 are reached by building at a Fibonacci size and
/// overriding the size and the approximant.
inline ModelSpec at_size(ModelSpec spec, int n, long p) {
  spec.size = n;
  spec.tau = make_tau(p, n);
  return spec;
}

}  // namespace qpdual::oracle
