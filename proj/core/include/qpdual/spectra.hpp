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

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "qpdual/model.hpp"

namespace qpdual {

/// Ascending eigenvalues with orthonormal eigenvectors (column j pairs
/// with eigenvalue j). Each column has its first nonzero component positive.
struct SpectrumResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  /// max_j ||H v_j - E_j v_j||_inf
  double residual = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  bool has_vectors() const { return eigenvectors.cols() == eigenvalues.size() && eigenvalues.size() > 0; }
  double bandwidth() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) - eigenvalues(0) : 0.0;
  }
};

struct SolverOptions {
  bool compute_residual = true;
};

/// Dense symmetric eigendecomposition (Householder tridiagonalisation plus
/// MRRR, via LAPACK dsyevr). Falls back to Eigen's self-adjoint solver when
/// dense_lapack_reliable() is false.
SpectrumResult diagonalize(const HamiltonianMatrix& h, const SolverOptions& options = {});

/// One-time probe of the linked LAPACK/BLAS on a 320 x 320 problem. False
/// means the blocked kernels produced wrong results on this machine.
bool dense_lapack_reliable();

/// Values only; does not touch \p h.
Eigen::VectorXd eigenvalues_dense(const HamiltonianMatrix& h);

/// Nearest-neighbour chain with diagonal, bonds (n, n+1) and a corner term
/// coupling sites 1 and N. Without the corner term this is a pure
/// tridiagonal solve; with it, the ring is folded into a band of width 2
/// and handled by the banded path.
SpectrumResult diagonalize_tridiagonal(const Eigen::VectorXd& diagonal,
                                       const Eigen::VectorXd& offdiagonal, double wrap,
                                       const SolverOptions& options = {});

/// Finite-range models without forming the dense matrix. Periodic rings are
/// reordered (1, N, 2, N-1, ...) into a band of half-width 2d; eigenvalues
/// come from band reduction, eigenvectors from inverse iteration with
/// reorthogonalisation inside clusters. Memory O(N^2) for the vectors only.
SpectrumResult diagonalize_banded(const HamiltonianTerms& terms, const SolverOptions& options = {});
Eigen::VectorXd eigenvalues_banded(const HamiltonianTerms& terms);

/// Auto picks the banded path when the folded half-bandwidth is small
/// compared with N, the dense path otherwise.
enum class SolverPath { Auto, Dense, Banded };

/// Eigenvectors are only computed up to vector_cap sites; larger sizes
/// must go through solve_values.
SpectrumResult solve(const ModelSpec& spec, SolverPath path = SolverPath::Auto,
                     int vector_cap = 10946, const SolverOptions& options = {});
Eigen::VectorXd solve_values(const ModelSpec& spec, SolverPath path = SolverPath::Auto);

std::vector<std::pair<int, int>> degenerate_clusters(const Eigen::VectorXd& eigenvalues,
                                                     double rel_tol = 1e-12);

/// Makes the first component with |v_i| > 1e-10 positive in each column.
void canonicalize_signs(Eigen::MatrixXd& vectors);

/// max_j ||H v_j - E_j v_j||_inf for a dense matrix.
double eigen_residual(const HamiltonianMatrix& h, const Eigen::VectorXd& values,
                      const Eigen::MatrixXd& vectors);
double eigen_residual(const HamiltonianTerms& terms, const Eigen::VectorXd& values,
                      const Eigen::MatrixXd& vectors);

/// Little-endian: uint64 length followed by that many IEEE-754 doubles.
void write_eigenvalues_binary(std::ostream& out, const Eigen::VectorXd& values);
Eigen::VectorXd read_eigenvalues_binary(std::istream& in);

}  // namespace qpdual
