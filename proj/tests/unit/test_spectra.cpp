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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "qpdual/diagnostics.hpp"
#include "qpdual/error.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {
namespace {

double orthonormality_error(const Eigen::MatrixXd& v) {
  return (v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
}

// Projector distance per degenerate cluster, so basis freedom inside a
// cluster does not matter.
double subspace_error(const Eigen::VectorXd& values, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (const auto& [first, last] : degenerate_clusters(values, 1e-9)) {
    const Eigen::MatrixXd pa = a.middleCols(first, last - first) * a.middleCols(first, last - first).transpose();
    const Eigen::MatrixXd pb = b.middleCols(first, last - first) * b.middleCols(first, last - first).transpose();
    worst = std::max(worst, (pa - pb).cwiseAbs().maxCoeff());
  }
  return worst;
}

TEST(SpectraOracle, DenseSolverMatchesJacobiOnSmallLattices) {
  struct Case {
    int n;
    long p;
    int d;
    double a;
    double b;
  };
  for (const Case c : {Case{8, 5, 2, 3.0, 1.0}, Case{8, 3, 3, 1.5, 2.5}, Case{12, 7, 2, 3.0, 1.0},
                       Case{12, 5, 5, 2.0, 2.0}, Case{5, 3, 1, 1.0, 1.0}}) {
    const Eigen::MatrixXd h = oracle::power_law_matrix(c.a, c.b, c.d, c.n, c.p, true);
    const oracle::Eigensystem ref = oracle::jacobi(h);
    const ModelSpec spec = oracle::at_size(power_law_model(c.a, c.b, c.d, 13), c.n, c.p);
    const SpectrumResult got = diagonalize(build_hamiltonian(spec));
    EXPECT_LT((got.eigenvalues - ref.values).cwiseAbs().maxCoeff(), 1e-10) << "N=" << c.n;
    EXPECT_LT(subspace_error(ref.values, got.eigenvectors, ref.vectors), 1e-8) << "N=" << c.n;
    EXPECT_LT(orthonormality_error(got.eigenvectors), 1e-12);
  }
}

TEST(SpectraOracle, BandedAndTridiagonalMatchJacobi) {
  const Eigen::MatrixXd h = oracle::power_law_matrix(0.0, 3.0, 2, 12, 7, true, true, false);
  const oracle::Eigensystem ref = oracle::jacobi(h);
  const ModelSpec spec = oracle::at_size(power_law_a_infinity(3.0, 2, 13), 12, 7);
  const NearestNeighborForm form = nearest_neighbor_form(spec);
  const SpectrumResult tri = diagonalize_tridiagonal(form.diagonal, form.offdiagonal, form.wrap);
  EXPECT_LT((tri.eigenvalues - ref.values).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(subspace_error(ref.values, tri.eigenvectors, ref.vectors), 1e-8);
  const SpectrumResult band = diagonalize_banded(assemble_terms(spec));
  EXPECT_LT((band.eigenvalues - ref.values).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(subspace_error(ref.values, band.eigenvectors, ref.vectors), 1e-8);
}

TEST(Spectra, OpenChainTridiagonal) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd off = Eigen::VectorXd::Ones(9);
  const SpectrumResult r = diagonalize_tridiagonal(diag, off, 0.0);
  for (int k = 1; k <= 10; ++k) {
    EXPECT_NEAR(r.eigenvalues(k - 1), -2.0 * std::cos(std::numbers::pi * k / 11.0), 1e-13);
  }
}

class PathEquivalence : public ::testing::TestWithParam<int> {};

TEST_P(PathEquivalence, BandedAgreesWithDense) {
  const std::vector<ModelSpec> specs = {power_law_model(3, 1, 2, 233), power_law_b_infinity(3, 4, 233),
                                        power_law_a_infinity(3, 3, 233), off_diagonal_aah_model(1, 1, 233),
                                        diagonal_aah_model(1, 2, 233), power_law_model(2, 2, 3, 233),
                                        power_law_model(3, 1, 2, 233, Boundary::Open)};
  const ModelSpec& spec = specs[static_cast<std::size_t>(GetParam())];
  const SpectrumResult dense = solve(spec, SolverPath::Dense);
  const SpectrumResult band = solve(spec, SolverPath::Banded);
  const double bw = dense.bandwidth();
  EXPECT_LT((dense.eigenvalues - band.eigenvalues).cwiseAbs().maxCoeff(), 1e-12 * bw);
  EXPECT_LT(band.residual, 1e-10 * bw);
  EXPECT_LT(orthonormality_error(band.eigenvectors), 1e-10);
  EXPECT_LT(subspace_error(dense.eigenvalues, dense.eigenvectors, band.eigenvectors), 1e-6);
  const auto a = compute_diagnostics(dense);
  const auto b = compute_diagnostics(band);
  // Within a near-degenerate pair either solver's vectors are only fixed to
  // about eps * |H| / gap, so the tolerance follows the gap to the neighbours
  // that were not merged into the same cluster.
  const Eigen::VectorXd& e = dense.eigenvalues;
  const auto n = static_cast<Eigen::Index>(a.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    double gap = bw;
    if (j > 0) gap = std::min(gap, e(j) - e(j - 1));
    if (j + 1 < n) gap = std::min(gap, e(j + 1) - e(j));
    const double tol = std::max(1e-8, 1e3 * std::numeric_limits<double>::epsilon() * bw / std::max(gap, 1e-300));
    const auto k = static_cast<std::size_t>(j);
    EXPECT_NEAR(a[k].fd, b[k].fd, tol) << "state " << j << " gap " << gap;
    EXPECT_NEAR(a[k].dual_fd, b[k].dual_fd, tol) << "state " << j << " gap " << gap;
  }
  EXPECT_LT((solve_values(spec, SolverPath::Banded) - dense.eigenvalues).cwiseAbs().maxCoeff(), 1e-12 * bw);
}

INSTANTIATE_TEST_SUITE_P(Families, PathEquivalence, ::testing::Range(0, 7));

TEST(Spectra, DeterministicAcrossRuns) {
  const ModelSpec spec = power_law_model(2.5, 1.5, 2, 610);
  const SpectrumResult a = solve(spec);
  const SpectrumResult b = solve(spec);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Spectra, SignConvention) {
  const SpectrumResult r = solve(power_law_model(3, 1, 2, 89));
  for (int j = 0; j < r.size(); ++j) {
    int i = 0;
    while (std::abs(r.eigenvectors(i, j)) <= 1e-10) ++i;
    EXPECT_GT(r.eigenvectors(i, j), 0.0);
  }
}

TEST(Spectra, VectorCapEnforced) {
  EXPECT_THROW(solve(power_law_model(3, 1, 2, 233), SolverPath::Auto, 144), InvalidArgument);
  EXPECT_EQ(solve_values(power_law_model(3, 1, 2, 233)).size(), 233);
}

TEST(Spectra, DegenerateClusters) {
  Eigen::VectorXd e(6);
  e << -1.0, -1.0 + 1e-14, 0.0, 0.5, 0.5, 1.0;
  const auto clusters = degenerate_clusters(e, 1e-12);
  ASSERT_EQ(clusters.size(), 4u);
  EXPECT_EQ(clusters[0], std::make_pair(0, 2));
  EXPECT_EQ(clusters[2], std::make_pair(3, 5));
}

TEST(Spectra, BinaryEigenvalueRoundTrip) {
  const Eigen::VectorXd e = solve_values(power_law_model(3, 1, 2, 144));
  std::stringstream io;
  write_eigenvalues_binary(io, e);
  EXPECT_EQ(io.str().size(), 8u + 8u * 144u);
  EXPECT_EQ(read_eigenvalues_binary(io), e);
}

}  // namespace
}  // namespace qpdual
