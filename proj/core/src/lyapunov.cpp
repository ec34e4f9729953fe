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

#include "qpdual/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qpdual/error.hpp"

namespace qpdual {

TransferChain transfer_chain(const ModelSpec& spec) {
  require(spec.is_nearest_neighbor(), "lyapunov: transfer matrices need a nearest-neighbour model");
  TransferChain chain;
  chain.bonds = bond_amplitudes(spec);
  chain.onsite = nearest_neighbor_form(spec).diagonal;
  return chain;
}

namespace {

/// Largest |eigenvalue| of the residual 2x2 product when it is resolved in
/// floating point, its largest singular value otherwise. At an exact ring
/// eigenvalue the monodromy has unit spectral radius whatever the state, so
/// the computed radius is pure cancellation noise of order eps*|M| and only
/// the singular value carries the growth rate.
double final_norm(const Eigen::Matrix2d& m) {
  const double half_trace = 0.5 * m.trace();
  const double det = m.determinant();
  const double disc = half_trace * half_trace - det;
  double radius;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    radius = std::max(std::abs(half_trace + root), std::abs(half_trace - root));
  } else {
    radius = std::sqrt(std::abs(det));  // complex pair, |lambda|^2 = det
  }
  const double sigma = Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
  if (std::isfinite(radius) && radius >= 1e-8 * sigma) return radius;
  return sigma;
}

}  // namespace

LyapunovResult lyapunov_exponent(const TransferChain& chain, const LyapunovOptions& options) {
  const int n = chain.size();
  require(n >= 1, "lyapunov: empty chain");
  require(chain.bonds.size() == n + 1, "lyapunov: need N+1 bond amplitudes t_0..t_N");
  require(options.rescale_interval >= 1, "lyapunov: rescale interval must be positive");
  require(chain.bonds.allFinite() && chain.onsite.allFinite(), "lyapunov: non-finite chain");

  const double cutoff = options.relative_cutoff * chain.bonds.cwiseAbs().maxCoeff();
  require(cutoff > 0.0, "lyapunov: all bonds vanish");
  LyapunovResult result;
  result.energy = chain.energy;
  result.steps = n;
  Eigen::VectorXd t = chain.bonds;
  for (Eigen::Index i = 0; i <= n; ++i) {
    if (std::abs(t(i)) < cutoff) {
      t(i) = t(i) < 0.0 ? -cutoff : cutoff;
      if (i >= 1) ++result.regularized_bonds;
    }
  }
  result.warning = result.regularized_bonds > options.warning_fraction * n;

  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  double log_scale = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double a = (chain.energy - chain.onsite(i - 1)) / t(i);
    const double b = -t(i - 1) / t(i);
    // [[a, b], [1, 0]] * m
    const Eigen::RowVector2d top = a * m.row(0) + b * m.row(1);
    m.row(1) = m.row(0);
    m.row(0) = top;
    if (i % options.rescale_interval == 0 || i == n) {
      const double s = m.cwiseAbs().maxCoeff();
      if (!(s > 0.0) || !std::isfinite(s)) throw ComputationError("lyapunov: transfer product degenerated");
      // Scale by the power of two nearest the max entry: exact in floating
      // point, so the product is bitwise the same for every interval k.
      // At an eigenvalue of the ring, rounding decides how far the growing and
      // decaying directions cancel, and any inexact rescale would leak into gamma.
      int exponent = 0;
      std::frexp(s, &exponent);
      m = (m.array() * std::ldexp(1.0, -exponent)).matrix();
      log_scale += exponent * std::numbers::ln2;
    }
  }
  result.gamma = (log_scale + std::log(final_norm(m))) / n;
  return result;
}

std::vector<LyapunovResult> lyapunov_spectrum(const ModelSpec& spec, const Eigen::VectorXd& eigenvalues,
                                              const LyapunovOptions& options) {
  TransferChain chain = transfer_chain(spec);
  std::vector<LyapunovResult> out;
  out.reserve(static_cast<std::size_t>(eigenvalues.size()));
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    chain.energy = eigenvalues(j);
    out.push_back(lyapunov_exponent(chain, options));
  }
  return out;
}

}  // namespace qpdual
