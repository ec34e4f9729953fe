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
#include <numbers>

#include "oracles.hpp"
#include "qpdual/diagnostics.hpp"
#include "qpdual/error.hpp"
#include "qpdual/rydberg.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {
namespace {

TEST(Rydberg, HamiltonianIsScaledIdealModel) {
  const RydbergModelSpec spec = rydberg_model(2.5, 3, 89);
  const Eigen::MatrixXd h = build_rydberg_hamiltonian(spec).values;
  const Eigen::MatrixXd ideal = build_hamiltonian(power_law_b_infinity(3.0, 3, 89)).values;
  EXPECT_LT((h - 2.5 * ideal).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(spec.dual().limit, LimitFlag::AInfinity);
  EXPECT_THROW(rydberg_model(0.0, 3, 89).validate(), InvalidArgument);
  EXPECT_THROW(rydberg_model(1.0, 0, 89).validate(), InvalidArgument);
}

TEST(Rydberg, RangeOneIsCosineChain) {
  const Eigen::MatrixXd h = build_rydberg_hamiltonian(rydberg_model(1.0, 1, 34)).values;
  const double tau = 21.0 / 34.0;
  for (int n = 1; n < 34; ++n) EXPECT_NEAR(h(n - 1, n), std::cos(std::numbers::pi * tau * (2 * n + 1)), 1e-13);
  EXPECT_LT((h - build_hamiltonian(off_diagonal_aah_model(1, 1, 34)).values).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Rydberg, ScaleOnlyStretchesTheSpectrum) {
  const SpectrumResult one = solve_rydberg(rydberg_model(1.0, 3, 233));
  const SpectrumResult two = solve_rydberg(rydberg_model(2.0, 3, 233));
  EXPECT_LT((two.eigenvalues - 2.0 * one.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
  const auto a = compute_diagnostics(one);
  const auto b = compute_diagnostics(two);
  const Thresholds t = default_thresholds();
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_NEAR(a[j].fd, b[j].fd, 1e-9);
    EXPECT_EQ(classify_state(a[j], 233, t), classify_state(b[j], 233, t));
  }
}

TEST(Quench, ZeroHamiltonianIsStatic) {
  SpectrumResult s;
  s.eigenvalues = Eigen::VectorXd::Zero(5);
  s.eigenvectors = Eigen::MatrixXd::Identity(5, 5);
  const QuenchResult q = quench(s, site_excitation(5, 2), default_quench_times(1.0, 10));
  for (Eigen::Index t = 0; t < q.times.size(); ++t) {
    EXPECT_NEAR(q.return_probability(t), 1.0, 1e-15);
    EXPECT_NEAR(q.populations(1, t), 1.0, 1e-15);
    EXPECT_NEAR(q.participation_ratio(t), 1.0, 1e-15);
  }
}

TEST(Quench, TwoSiteRabiOscillation) {
  const double bond = 0.7;
  SpectrumResult s;
  s.eigenvalues = Eigen::Vector2d(-bond, bond);
  s.eigenvectors.resize(2, 2);
  s.eigenvectors << 1, 1, -1, 1;
  s.eigenvectors /= std::sqrt(2.0);
  Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(50, 0.0, 10.0);
  const QuenchResult q = quench(s, site_excitation(2, 1), times);
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double c = std::cos(bond * times(k));
    EXPECT_NEAR(q.return_probability(k), c * c, 1e-12);
    EXPECT_NEAR(q.populations(1, k), 1.0 - c * c, 1e-12);
  }
}

TEST(Quench, MatchesMatrixExponentialOracle) {
  for (int n : {8, 34}) {
    const RydbergModelSpec spec = rydberg_model(1.3, 3, n);
    const Eigen::MatrixXd h = build_rydberg_hamiltonian(spec).values;
    const Eigen::VectorXd psi0 = site_excitation(n, 3);
    Eigen::VectorXd times(6);
    times << 0.0, 0.01, 0.5, 3.0, 17.0, 120.0;
    const QuenchResult q = quench(spec, psi0, times);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
      const Eigen::VectorXcd psi = oracle::propagator(h, times(k)) * psi0.cast<std::complex<double>>();
      for (int i = 0; i < n; ++i) EXPECT_NEAR(q.populations(i, k), std::norm(psi(i)), 1e-8) << "t=" << times(k);
      EXPECT_NEAR(q.return_probability(k), std::norm(psi(2)), 1e-8);
      const double pr = 1.0 / psi.cwiseAbs2().array().square().sum();
      EXPECT_NEAR(q.participation_ratio(k), pr, 1e-8 * pr);
    }
  }
}

TEST(Quench, ConservesTotalPopulation) {
  const RydbergModelSpec spec = rydberg_model(1.0, 3, 233);
  const QuenchResult q = quench(spec, site_excitation(233, 100), default_quench_times(1.0));
  ASSERT_EQ(q.times.size(), 200);
  EXPECT_EQ(q.times(0), 0.0);
  EXPECT_NEAR(q.times(199), 1e3, 1e-9);
  EXPECT_NEAR(q.return_probability(0), 1.0, 1e-12);
  for (Eigen::Index t = 0; t < q.times.size(); ++t) EXPECT_NEAR(q.populations.col(t).sum(), 1.0, 1e-9);
}

TEST(Quench, RejectsBadInitialStates) {
  const RydbergModelSpec spec = rydberg_model(1.0, 3, 34);
  EXPECT_THROW(quench(spec, 2.0 * site_excitation(34, 1), default_quench_times(1.0, 5)), InvalidArgument);
  EXPECT_THROW(quench(spec, site_excitation(21, 1), default_quench_times(1.0, 5)), InvalidArgument);
  EXPECT_THROW(site_excitation(34, 0), InvalidArgument);
}

TEST(Rydberg, RangeComparison) {
  const RydbergModelSpec spec = rydberg_model(1.0, 3, 610);
  const auto table = compare_to_ideal(spec, {1, 2, 3}, default_thresholds());
  ASSERT_EQ(table.size(), 3u);
  EXPECT_TRUE(table[0].edges.empty());
  EXPECT_TRUE(table[0].dual_edges.empty());
  ASSERT_EQ(table[1].edges.size(), 2u);
  EXPECT_FALSE(table[2].moved);
  EXPECT_FALSE(table[2].dual_moved);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(table[1].edges[i], table[2].edges[i], 2.0 / 610);
  EXPECT_GT(table[2].mfd_outer, table[2].mfd_inner);
  EXPECT_LT(table[2].dual_mfd_outer, table[2].dual_mfd_inner);
}

}  // namespace
}  // namespace qpdual
