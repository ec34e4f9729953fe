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
#include <string>
#include <vector>

#include "qpdual/diagnostics.hpp"
#include "qpdual/model.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {

/// Single-excitation dipolar array: H = A sum cos[pi tau (m+n)] / |m-n|^3.
struct RydbergModelSpec {
  double scale = 1.0;  // A
  int size = 0;
  TauApproximant tau;
  int range = 3;
  Boundary boundary = Boundary::Periodic;

  void validate() const;
  /// The unscaled ideal-family model H(3, b -> infinity).
  ModelSpec ideal() const;
  /// Its dual partner H(a -> infinity, 3).
  ModelSpec dual() const;
};

RydbergModelSpec rydberg_model(double scale, int range, int size, Boundary boundary = Boundary::Periodic);

HamiltonianMatrix build_rydberg_hamiltonian(const RydbergModelSpec& spec);

/// Eigenpairs of the scaled Hamiltonian.
SpectrumResult solve_rydberg(const RydbergModelSpec& spec);

struct QuenchResult {
  Eigen::VectorXd times;
  /// |psi_n(t)|^2, one column per time.
  Eigen::MatrixXd populations;
  Eigen::VectorXd return_probability;
  Eigen::VectorXd participation_ratio;
};

/// t = 0 followed by count - 1 log-spaced points on [1e-2, 1e3] / A.
Eigen::VectorXd default_quench_times(double scale, int count = 200);

QuenchResult quench(const SpectrumResult& spectrum, const Eigen::VectorXd& initial, const Eigen::VectorXd& times);
QuenchResult quench(const RydbergModelSpec& spec, const Eigen::VectorXd& initial, const Eigen::VectorXd& times);
QuenchResult quench(const ModelSpec& spec, const Eigen::VectorXd& initial, const Eigen::VectorXd& times);

Eigen::VectorXd site_excitation(int size, int site);

struct RangeComparison {
  int range = 0;
  std::vector<double> edges;
  std::vector<double> dual_edges;
  /// Mean FD inside [P4, 1 - P4] and outside it.
  double mfd_inner = 0.0;
  double mfd_outer = 0.0;
  double dual_mfd_inner = 0.0;
  double dual_mfd_outer = 0.0;
  /// Edge set changed by more than 2/N relative to the previous range.
  bool moved = false;
  bool dual_moved = false;
};

std::vector<RangeComparison> compare_to_ideal(const RydbergModelSpec& spec, const std::vector<int>& ranges,
                                              const Thresholds& thresholds);

std::string to_json(const RydbergModelSpec& spec, const std::vector<RangeComparison>& table);

}  // namespace qpdual
