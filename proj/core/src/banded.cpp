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

// Banded eigensolver for finite-range models.

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qpdual/error.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {

namespace {

/// Symmetric band in LAPACK upper storage, rows reordered so that a
/// periodic ring of range d has half-bandwidth 2d.
struct FoldedBand {
  int n = 0;
  int kd = 0;
  std::vector<int> site_of;  // position -> site
  Eigen::MatrixXd upper;     // (kd+1) x n, upper(kd + i - j, j) = A(i, j), i <= j
  double norm = 0.0;         // max absolute row sum
};

FoldedBand fold(const HamiltonianTerms& terms) {
  FoldedBand band;
  band.n = terms.size;
  const int n = band.n;
  band.site_of.resize(static_cast<std::size_t>(n));
  std::vector<int> pos_of(static_cast<std::size_t>(n));
  const bool periodic = terms.boundary == Boundary::Periodic;
  for (int p = 0; p < n; ++p) {
    // 1, N, 2, N-1, ... interleaves the two halves of the ring.
    const int site = !periodic ? p : (p % 2 == 0 ? p / 2 : n - 1 - p / 2);
    band.site_of[static_cast<std::size_t>(p)] = site;
    pos_of[static_cast<std::size_t>(site)] = p;
  }
  int kd = 0;
  for (const MatrixEntry& e : terms.entries) {
    kd = std::max(kd, std::abs(pos_of[static_cast<std::size_t>(e.row)] - pos_of[static_cast<std::size_t>(e.col)]));
  }
  band.kd = kd;
  band.upper = Eigen::MatrixXd::Zero(kd + 1, n);
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n);
  for (const MatrixEntry& e : terms.entries) {
    require(std::isfinite(e.value), "diagonalize_banded: non-finite matrix entry");
    const int a = pos_of[static_cast<std::size_t>(e.row)];
    const int b = pos_of[static_cast<std::size_t>(e.col)];
    const int i = std::min(a, b);
    const int j = std::max(a, b);
    band.upper(kd + i - j, j) = e.value;
    row_sum(e.row) += std::abs(e.value);
    if (e.row != e.col) row_sum(e.col) += std::abs(e.value);
  }
  band.norm = n ? row_sum.maxCoeff() : 0.0;
  return band;
}

Eigen::VectorXd band_eigenvalues(const FoldedBand& band) {
  const lapack_int n = band.n;
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  Eigen::MatrixXd ab = band.upper;
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'U', n, band.kd, ab.data(),
                                         band.kd + 1, w.data(), &dummy, 1);
  if (info != 0) throw ComputationError("diagonalize_banded: LAPACK dsbevd failed (info=" + std::to_string(info) + ")");
  return w;
}

/// LU factors of (A - shift I) in LAPACK general-band storage.
class ShiftedBandLU {
 public:
  explicit ShiftedBandLU(const FoldedBand& band)
      : band_(band), ld_(3 * band.kd + 1), factors_(ld_, band.n), pivots_(static_cast<std::size_t>(band.n)) {}

  void factor(double shift) {
    const int n = band_.n;
    const int kd = band_.kd;
    factors_.setZero();
    // General band layout: A(i, j) at row kl + ku + i - j.
    for (int j = 0; j < n; ++j) {
      for (int i = std::max(0, j - kd); i <= j; ++i) {
        double v = band_.upper(kd + i - j, j);
        if (i == j) v -= shift;
        factors_(2 * kd + i - j, j) = v;
        factors_(2 * kd + j - i, i) = v;
      }
    }
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, factors_.data(), ld_,
                                           pivots_.data());
    if (info < 0) throw ComputationError("diagonalize_banded: dgbtrf argument error");
    // An exactly singular shift is expected when the shift hits an eigenvalue.
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(band_.norm, 1.0);
    for (int j = 0; j < n; ++j) {
      double& u = factors_(2 * kd, j);
      if (u == 0.0) u = tiny;
    }
  }

  void solve(Eigen::VectorXd& rhs) const {
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', band_.n, band_.kd, band_.kd, 1,
                                           factors_.data(), ld_, pivots_.data(), rhs.data(), band_.n);
    if (info != 0) throw ComputationError("diagonalize_banded: dgbtrs failed");
  }

 private:
  const FoldedBand& band_;
  int ld_;
  Eigen::MatrixXd factors_;
  std::vector<lapack_int> pivots_;
};

double band_residual(const FoldedBand& band, const Eigen::VectorXd& x, double lambda) {
  const int n = band.n;
  const int kd = band.kd;
  Eigen::VectorXd r = -lambda * x;
  for (int j = 0; j < n; ++j) {
    for (int i = std::max(0, j - kd); i <= j; ++i) {
      const double a = band.upper(kd + i - j, j);
      if (a == 0.0) continue;
      r(i) += a * x(j);
      if (i != j) r(j) += a * x(i);
    }
  }
  return r.lpNorm<Eigen::Infinity>();
}

}  // namespace

Eigen::VectorXd eigenvalues_banded(const HamiltonianTerms& terms) { return band_eigenvalues(fold(terms)); }

SpectrumResult diagonalize_banded(const HamiltonianTerms& terms, const SolverOptions& options) {
  const FoldedBand band = fold(terms);
  const int n = band.n;
  SpectrumResult result;
  if (n == 0) return result;
  result.eigenvalues = band_eigenvalues(band);
  result.eigenvectors.resize(n, n);

  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(band.norm, std::numeric_limits<double>::min());
  const double shift_step = 10.0 * eps * scale;
  // Eigenvalue gaps below this are treated as one cluster and
  // reorthogonalised; above it the perturbation error eps*|A|/gap < 1e-11.
  const double cluster_gap = 1e-5 * scale;
  const double target = 1e-12 * scale * std::sqrt(static_cast<double>(n));

  // Vectors are built in folded order directly in the result and permuted
  // back in place at the end, so only one N x N buffer is live.
  Eigen::MatrixXd& local = result.eigenvectors;
  ShiftedBandLU lu(band);
  Eigen::VectorXd x(n);
  double previous_shift = -std::numeric_limits<double>::infinity();
  int cluster_start = 0;
  for (int j = 0; j < n; ++j) {
    const double lambda = result.eigenvalues(j);
    if (j > 0 && lambda - result.eigenvalues(j - 1) > cluster_gap) cluster_start = j;
    double shift = lambda;
    if (shift - previous_shift < shift_step) shift = previous_shift + shift_step;
    previous_shift = shift;
    lu.factor(shift);

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(j));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i) x(i) = uniform(rng);
    x.normalize();

    bool converged = false;
    double residual = 0.0;
    for (int iteration = 0; iteration < 8; ++iteration) {
      lu.solve(x);
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = cluster_start; k < j; ++k) x -= local.col(k).dot(x) * local.col(k);
      }
      const double norm = x.norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ComputationError("diagonalize_banded: inverse iteration broke down at eigenvalue " +
                               std::to_string(j));
      }
      x /= norm;
      if (iteration >= 1) {
        residual = band_residual(band, x, lambda);
        if (residual <= target) {
          converged = true;
          break;
        }
      }
    }
    if (!converged) {
      throw ComputationError("diagonalize_banded: eigenvector " + std::to_string(j) +
                             " did not converge (residual " + std::to_string(residual) + ")");
    }
    local.col(j) = x;
  }

  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> to_sites(n);
  for (int p = 0; p < n; ++p) to_sites.indices()(p) = band.site_of[static_cast<std::size_t>(p)];
  result.eigenvectors = to_sites * result.eigenvectors;
  canonicalize_signs(result.eigenvectors);
  if (options.compute_residual) result.residual = eigen_residual(terms, result.eigenvalues, result.eigenvectors);
  return result;
}

}  // namespace qpdual
