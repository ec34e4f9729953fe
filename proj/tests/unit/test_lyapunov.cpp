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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qpdual/error.hpp"
#include "qpdual/lyapunov.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {
namespace {

TransferChain constant_chain(int n, double energy) {
  TransferChain c;
  c.bonds = Eigen::VectorXd::Ones(n + 1);
  c.onsite = Eigen::VectorXd::Zero(n);
  c.energy = energy;
  return c;
}

TEST(Lyapunov, ConstantChainClosedForm) {
  for (double e : {3.0, -3.0, 2.5, 6.0}) {
    for (int n : {89, 2584}) {
      const LyapunovResult r = lyapunov_exponent(constant_chain(n, e));
      EXPECT_NEAR(r.gamma, oracle::constant_chain_gamma(e), 1e-8) << "E=" << e << " N=" << n;
      EXPECT_EQ(r.regularized_bonds, 0);
      EXPECT_FALSE(r.warning);
    }
  }
  EXPECT_NEAR(lyapunov_exponent(constant_chain(2584, 3.0)).gamma, std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-8);
}

TEST(Lyapunov, InsideTheBandVanishes) {
  for (double e : {0.0, 0.7, -1.9}) EXPECT_NEAR(lyapunov_exponent(constant_chain(2584, e)).gamma, 0.0, 1e-10);
}

TEST(Lyapunov, RescalingIntervalDoesNotChangeGamma) {
  const ModelSpec spec = power_law_a_infinity(3.0, 2, 610);
  const Eigen::VectorXd e = solve_values(spec);
  for (Eigen::Index j = 0; j < e.size(); j += 37) {
    TransferChain c = transfer_chain(spec);
    c.energy = e(j);
    LyapunovOptions o;
    o.rescale_interval = 4;
    const double base = lyapunov_exponent(c, o).gamma;
    for (int k : {8, 16}) {
      o.rescale_interval = k;
      EXPECT_NEAR(lyapunov_exponent(c, o).gamma, base, 1e-8) << "j=" << j << " k=" << k;
    }
  }
}

TEST(Lyapunov, AubryAndreMatchesThoulessFormula) {
  // det(E - H_open) is the (1,1) entry of the transfer product when t = 1, so
  // gamma(E) = mean ln|E - E_k| over the open-chain levels up to O(1/N)
  // boundary terms. Energies outside the spectrum keep the product free of
  // the cancellations that occur at ring eigenvalues.
  const int n = 987;
  const ModelSpec spec = diagonal_aah_model(1.0, 4.0, n);
  const Eigen::VectorXd open =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(oracle::diagonal_aah_matrix(1.0, 4.0, n, 610, false),
                                                     Eigen::EigenvaluesOnly)
          .eigenvalues();
  TransferChain chain = transfer_chain(spec);
  for (const double energy : {-9.0, -6.5, -6.1, 6.1, 6.5, 9.0}) {
    chain.energy = energy;
    const double thouless = (open.array() - energy).abs().log().mean();
    EXPECT_NEAR(lyapunov_exponent(chain).gamma, thouless, 3.0 / n) << "E=" << energy;
  }
  // At the eigenvalues themselves gamma sits below ln(V / 2t) by finite-size
  // terms plus up to ln(1/eps) / N of cancelled growth; only a clear gap from
  // zero and the absence of overshoot are asserted.
  const auto results = lyapunov_spectrum(spec, solve_values(spec));
  for (const LyapunovResult& r : results) {
    EXPECT_GT(r.gamma, 0.5 * std::log(2.0)) << "E=" << r.energy;
    EXPECT_LT(r.gamma, std::log(2.0) + 0.03) << "E=" << r.energy;
  }
}

TEST(Lyapunov, VanishingBondsAreRegularized) {
  TransferChain c = constant_chain(100, 3.0);
  c.bonds(40) = 0.0;
  c.bonds(41) = 0.0;
  const LyapunovResult r = lyapunov_exponent(c);
  EXPECT_EQ(r.regularized_bonds, 2);
  EXPECT_TRUE(r.warning);
  EXPECT_TRUE(std::isfinite(r.gamma));
}

TEST(Lyapunov, TransferChainOfDualFamily) {
  const ModelSpec spec = power_law_a_infinity(3.0, 2, 89);
  const TransferChain c = transfer_chain(spec);
  EXPECT_EQ(c.size(), 89);
  EXPECT_EQ(c.bonds.size(), 90);
  EXPECT_EQ(c.onsite.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(transfer_chain(power_law_model(3, 1, 2, 89)), InvalidArgument);
  EXPECT_THROW(lyapunov_spectrum(power_law_b_infinity(3, 2, 89), Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST(Lyapunov, RejectsMalformedChains) {
  TransferChain c = constant_chain(10, 3.0);
  c.bonds.resize(5);
  EXPECT_THROW(lyapunov_exponent(c), InvalidArgument);
  c = constant_chain(10, 3.0);
  c.bonds.setZero();
  EXPECT_THROW(lyapunov_exponent(c), InvalidArgument);
  c = constant_chain(10, 3.0);
  LyapunovOptions o;
  o.rescale_interval = 0;
  EXPECT_THROW(lyapunov_exponent(c, o), InvalidArgument);
}

}  // namespace
}  // namespace qpdual
