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

#include "qpdual/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "qpdual/error.hpp"

namespace qpdual {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
}

lapack_int dsyevr_vectors(Eigen::MatrixXd& work, Eigen::VectorXd& w, Eigen::MatrixXd& z) {
  const lapack_int n = static_cast<lapack_int>(work.rows());
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, work.data(), n, 0.0, 0.0, 0, 0,
                                         LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, support.data());
  return info != 0 ? info : (found != n ? -1000 : 0);
}

// Some OpenBLAS builds select level-3 kernels that return garbage on CPUs
// (or hypervisors) where the advertised AVX-512 subset is not fully
// honoured. Small problems never reach the blocked code, so the probe uses
// a matrix large enough for the blocked reduction and the back transform.
bool probe_dense_lapack() {
  const int n = 320;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? 0.01 * i : 0.0);
  }
  Eigen::MatrixXd work = a;
  Eigen::MatrixXd z(n, n);
  Eigen::VectorXd w(n);
  if (dsyevr_vectors(work, w, z) != 0) return false;
  const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
  if ((a * z - z * w.asDiagonal()).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
  work = a;
  Eigen::VectorXd v(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, v.data()) != 0) return false;
  return (v - w).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

}  // namespace

bool dense_lapack_reliable() {
  static const bool reliable = probe_dense_lapack();
  return reliable;
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double v = vectors(i, j);
      if (std::abs(v) > 1e-10) {
        if (v < 0.0) vectors.col(j) *= -1.0;
        break;
      }
    }
  }
}

std::vector<std::pair<int, int>> degenerate_clusters(const Eigen::VectorXd& eigenvalues,
                                                     double rel_tol) {
  std::vector<std::pair<int, int>> clusters;
  const int n = static_cast<int>(eigenvalues.size());
  if (n == 0) return clusters;
  const double bw = eigenvalues(n - 1) - eigenvalues(0);
  const double tol = rel_tol * bw;
  int first = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == n || eigenvalues(j) - eigenvalues(j - 1) > tol) {
      clusters.emplace_back(first, j);
      first = j;
    }
  }
  return clusters;
}

double eigen_residual(const HamiltonianMatrix& h, const Eigen::VectorXd& values,
                      const Eigen::MatrixXd& vectors) {
  double worst = 0.0;
  // Blocked to bound the temporary at 256 columns.
  const Eigen::Index n = vectors.cols();
  for (Eigen::Index j0 = 0; j0 < n; j0 += 256) {
    const Eigen::Index cols = std::min<Eigen::Index>(256, n - j0);
    Eigen::MatrixXd r = h.values * vectors.middleCols(j0, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      r.col(c) -= values(j0 + c) * vectors.col(j0 + c);
      worst = std::max(worst, r.col(c).lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

double eigen_residual(const HamiltonianTerms& terms, const Eigen::VectorXd& values,
                      const Eigen::MatrixXd& vectors) {
  double worst = 0.0;
  Eigen::VectorXd r(terms.size);
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const auto v = vectors.col(j);
    r = -values(j) * v;
    for (const MatrixEntry& e : terms.entries) {
      r(e.row) += e.value * v(e.col);
      if (e.row != e.col) r(e.col) += e.value * v(e.row);
    }
    worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

SpectrumResult diagonalize(const HamiltonianMatrix& h, const SolverOptions& options) {
  require_finite(h.values, "diagonalize");
  const lapack_int n = h.size();
  SpectrumResult result;
  if (n == 0) return result;
  if (dense_lapack_reliable()) {
    Eigen::MatrixXd work = h.values;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    const lapack_int info = dsyevr_vectors(work, result.eigenvalues, result.eigenvectors);
    if (info != 0) {
      throw ComputationError("diagonalize: LAPACK dsyevr failed (info=" + std::to_string(info) + ")");
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.values);
    if (solver.info() != Eigen::Success) throw ComputationError("diagonalize: Eigen solver did not converge");
    result.eigenvalues = solver.eigenvalues();
    result.eigenvectors = solver.eigenvectors();
  }
  canonicalize_signs(result.eigenvectors);
  if (options.compute_residual) result.residual = eigen_residual(h, result.eigenvalues, result.eigenvectors);
  return result;
}

Eigen::VectorXd eigenvalues_dense(const HamiltonianMatrix& h) {
  require_finite(h.values, "eigenvalues_dense");
  const lapack_int n = h.size();
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  if (!dense_lapack_reliable()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.values, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ComputationError("eigenvalues_dense: Eigen solver did not converge");
    return solver.eigenvalues();
  }
  Eigen::MatrixXd work = h.values;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, w.data());
  if (info != 0) throw ComputationError("eigenvalues_dense: LAPACK dsyevd failed (info=" + std::to_string(info) + ")");
  return w;
}

SpectrumResult diagonalize_tridiagonal(const Eigen::VectorXd& diagonal,
                                       const Eigen::VectorXd& offdiagonal, double wrap,
                                       const SolverOptions& options) {
  const lapack_int n = static_cast<lapack_int>(diagonal.size());
  require(n == 0 || offdiagonal.size() == n - 1,
          "diagonalize_tridiagonal: offdiagonal must have length N-1");
  require(diagonal.allFinite() && offdiagonal.allFinite() && std::isfinite(wrap),
          "diagonalize_tridiagonal: non-finite entries");

  HamiltonianTerms terms;
  terms.size = n;
  terms.range = 1;
  terms.boundary = wrap != 0.0 ? Boundary::Periodic : Boundary::Open;
  for (lapack_int i = 0; i < n; ++i) {
    if (diagonal(i) != 0.0) {
      terms.entries.push_back({i, i, diagonal(i)});
      terms.has_diagonal = true;
    }
  }
  for (lapack_int i = 0; i + 1 < n; ++i) terms.entries.push_back({i, i + 1, offdiagonal(i)});

  if (wrap != 0.0) {
    require(n >= 3, "diagonalize_tridiagonal: a wrap term needs N >= 3");
    terms.entries.push_back({0, n - 1, wrap});
    return diagonalize_banded(terms, options);
  }

  SpectrumResult result;
  if (n == 0) return result;
  Eigen::VectorXd d = diagonal;
  Eigen::VectorXd e(n);
  e.head(n - 1) = offdiagonal;
  e(n - 1) = 0.0;
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0,
                                         0.0, 0, 0, LAPACKE_dlamch('S'), &found,
                                         result.eigenvalues.data(), result.eigenvectors.data(), n,
                                         support.data());
  if (info != 0 || found != n) {
    throw ComputationError("diagonalize_tridiagonal: LAPACK dstevr failed (info=" +
                           std::to_string(info) + ")");
  }
  canonicalize_signs(result.eigenvectors);
  if (options.compute_residual)
    result.residual = eigen_residual(terms, result.eigenvalues, result.eigenvectors);
  return result;
}

namespace {

SolverPath resolve_path(const ModelSpec& spec, SolverPath path) {
  if (path != SolverPath::Auto) return path;
  // The folded band has half-width 2d; it wins whenever that is small.
  const int half_width = spec.boundary == Boundary::Periodic ? 2 * spec.range() : spec.range();
  return 4 * (2 * half_width + 1) <= spec.size ? SolverPath::Banded : SolverPath::Dense;
}

}  // namespace

SpectrumResult solve(const ModelSpec& spec, SolverPath path, int vector_cap,
                     const SolverOptions& options) {
  spec.validate();
  if (spec.size > vector_cap) {
    throw InvalidArgument("solve: N=" + std::to_string(spec.size) + " exceeds the eigenvector size cap " +
                          std::to_string(vector_cap));
  }
  if (resolve_path(spec, path) == SolverPath::Dense) return diagonalize(build_hamiltonian(spec), options);
  return diagonalize_banded(assemble_terms(spec), options);
}

Eigen::VectorXd solve_values(const ModelSpec& spec, SolverPath path) {
  spec.validate();
  if (resolve_path(spec, path) == SolverPath::Dense) return eigenvalues_dense(build_hamiltonian(spec));
  return eigenvalues_banded(assemble_terms(spec));
}

void write_eigenvalues_binary(std::ostream& out, const Eigen::VectorXd& values) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes little-endian host");
  const std::uint64_t n = static_cast<std::uint64_t>(values.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}

Eigen::VectorXd read_eigenvalues_binary(std::istream& in) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  require(static_cast<bool>(in), "read_eigenvalues_binary: truncated header");
  require(n < (std::uint64_t{1} << 32), "read_eigenvalues_binary: implausible length");
  Eigen::VectorXd values(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  require(static_cast<bool>(in), "read_eigenvalues_binary: truncated payload");
  return values;
}

}  // namespace qpdual
