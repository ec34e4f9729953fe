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
#include <sstream>

#include "oracles.hpp"
#include "qpdual/error.hpp"
#include "qpdual/model.hpp"

namespace qpdual {
namespace {

struct AssemblyCase {
  double a;
  double b;
  int d;
  int n;
  long p;
  bool periodic;
};

class AssemblyOracle : public ::testing::TestWithParam<AssemblyCase> {};

TEST_P(AssemblyOracle, MatchesLiteralDoubleSum) {
  const AssemblyCase c = GetParam();
  const Boundary bc = c.periodic ? Boundary::Periodic : Boundary::Open;
  const ModelSpec spec = oracle::at_size(power_law_model(c.a, c.b, c.d, 13, bc), c.n, c.p);
  const Eigen::MatrixXd expected = oracle::power_law_matrix(c.a, c.b, c.d, c.n, c.p, c.periodic);
  EXPECT_LT((build_hamiltonian(spec).values - expected).cwiseAbs().maxCoeff(), 1e-12);

  const ModelSpec b_inf = oracle::at_size(power_law_b_infinity(c.a, c.d, 13, bc), c.n, c.p);
  EXPECT_LT((build_hamiltonian(b_inf).values -
             oracle::power_law_matrix(c.a, 0.0, c.d, c.n, c.p, c.periodic, false, true))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);

  const ModelSpec a_inf = oracle::at_size(power_law_a_infinity(c.b, c.d, 13, bc), c.n, c.p);
  EXPECT_LT((build_hamiltonian(a_inf).values -
             oracle::power_law_matrix(0.0, c.b, c.d, c.n, c.p, c.periodic, true, false))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallLattices, AssemblyOracle,
                         ::testing::Values(AssemblyCase{3.0, 1.0, 2, 8, 5, true},
                                           AssemblyCase{1.5, 2.5, 3, 8, 3, true},
                                           AssemblyCase{2.0, 2.0, 1, 5, 3, true},
                                           AssemblyCase{3.0, 1.0, 2, 12, 7, true},
                                           AssemblyCase{0.7, 4.0, 5, 12, 5, true},
                                           AssemblyCase{3.0, 1.0, 2, 8, 5, false},
                                           AssemblyCase{1.0, 3.0, 4, 12, 7, false}));

TEST(Model, DiagonalAahMatchesOracle) {
  for (bool periodic : {true, false}) {
    const ModelSpec spec = diagonal_aah_model(1.0, 2.5, 8, periodic ? Boundary::Periodic : Boundary::Open);
    EXPECT_LT((build_hamiltonian(spec).values - oracle::diagonal_aah_matrix(1.0, 2.5, 8, 5, periodic))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-13);
  }
}

TEST(Model, OffDiagonalAahIsUnitAmplitudeCosineChain) {
  const ModelSpec spec = off_diagonal_aah_model(1.0, 1.0, 8);
  EXPECT_LT((build_hamiltonian(spec).values - oracle::power_law_matrix(0, 0, 1, 8, 5, true)).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(Model, MatricesAreSymmetric) {
  for (const ModelSpec& spec : {power_law_model(3, 1, 2, 89), power_law_b_infinity(2, 7, 89),
                                power_law_a_infinity(3, 4, 89), exponential_model(0.5, 1.5, 3, 55)}) {
    const Eigen::MatrixXd h = build_hamiltonian(spec).values;
    EXPECT_EQ((h - h.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Model, PeriodicRowsCarryTwoDNeighbours) {
  for (int d : {1, 2, 5}) {
    const HamiltonianTerms terms = assemble_terms(power_law_model(3.0, 1.0, d, 144));
    EXPECT_EQ(terms.entries.size(), static_cast<std::size_t>(144 * d));
    const Eigen::MatrixXd h = to_dense(terms).values;
    for (int m = 0; m < 144; ++m) {
      int count = 0;
      for (int n = 0; n < 144; ++n) count += h(m, n) != 0.0;
      EXPECT_LE(count, 2 * d);
    }
    EXPECT_EQ(terms.range, d);
  }
}

TEST(Model, OpenBoundaryHasNoWrappedBonds) {
  const HamiltonianTerms terms = assemble_terms(power_law_model(3.0, 1.0, 3, 55, Boundary::Open));
  for (const MatrixEntry& e : terms.entries) EXPECT_LE(e.col - e.row, 3);
  EXPECT_EQ(terms.entries.size(), static_cast<std::size_t>(55 * 3 - 6));
}

TEST(Model, DualSwapsRolesAndLimits) {
  const ModelSpec spec = power_law_b_infinity(3.0, 2, 89);
  const ModelSpec dual = spec.dual();
  EXPECT_EQ(dual.limit, LimitFlag::AInfinity);
  EXPECT_DOUBLE_EQ(dual.modulation_kernel.parameter(), 3.0);
  EXPECT_EQ(dual.dual().limit, LimitFlag::BInfinity);
  EXPECT_THROW(diagonal_aah_model(1, 2, 89).dual(), InvalidArgument);
}

TEST(Model, ValidationRejectsBadSpecs) {
  EXPECT_THROW(build_hamiltonian(power_law_model(3, 1, 4, 8)), InvalidArgument);
  ModelSpec coprime = power_law_model(3, 1, 2, 8);
  coprime.tau = TauApproximant{2, 8, 0};
  EXPECT_THROW(build_hamiltonian(coprime), InvalidArgument);
  ModelSpec mismatch = power_law_model(3, 1, 2, 13);
  mismatch.tau = make_tau(5, 8);
  EXPECT_THROW(build_hamiltonian(mismatch), InvalidArgument);
  mismatch.boundary = Boundary::Open;
  EXPECT_NO_THROW(build_hamiltonian(mismatch));
  ModelSpec ranges = power_law_model(3, 1, 2, 89);
  ranges.modulation_kernel = HoppingKernel::power_law(1, 3);
  EXPECT_THROW(build_hamiltonian(ranges), InvalidArgument);
}

TEST(Model, NearestNeighbourFormAndBonds) {
  const ModelSpec spec = power_law_a_infinity(3.0, 2, 21);
  const NearestNeighborForm form = nearest_neighbor_form(spec);
  const Eigen::MatrixXd h = build_hamiltonian(spec).values;
  const Eigen::VectorXd t = bond_amplitudes(spec);
  ASSERT_EQ(t.size(), 22);
  EXPECT_DOUBLE_EQ(t(0), t(21));
  for (int n = 1; n < 21; ++n) {
    EXPECT_DOUBLE_EQ(form.offdiagonal(n - 1), h(n - 1, n));
    EXPECT_DOUBLE_EQ(t(n), h(n - 1, n));
  }
  EXPECT_DOUBLE_EQ(form.wrap, h(0, 20));
  EXPECT_DOUBLE_EQ(t(21), form.wrap);
  EXPECT_THROW(nearest_neighbor_form(power_law_model(3, 1, 2, 21)), InvalidArgument);
}

TEST(Model, DenseTextRoundTrip) {
  const HamiltonianMatrix h = build_hamiltonian(power_law_model(2.5, 1.5, 3, 34));
  std::stringstream io;
  write_dense_text(io, h);
  const HamiltonianMatrix back = read_dense_text(io);
  EXPECT_EQ((back.values - h.values).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(back.range, 3);
}

}  // namespace
}  // namespace qpdual
