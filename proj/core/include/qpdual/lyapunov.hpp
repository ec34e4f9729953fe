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
#include <vector>

#include "qpdual/model.hpp"

namespace qpdual {

/// Nearest-neighbour chain E psi_n = t_n psi_{n+1} + t_{n-1} psi_{n-1} + eps_n psi_n.
struct TransferChain {
  /// t_0 ... t_N; t_n is the bond (n, n+1) and t_0 closes the ring.
  Eigen::VectorXd bonds;
  /// eps_1 ... eps_N (zero for purely off-diagonal models).
  Eigen::VectorXd onsite;
  double energy = 0.0;

  int size() const { return static_cast<int>(onsite.size()); }
};

/// Bonds and on-site terms of a nearest-neighbour spec at energy 0.
TransferChain transfer_chain(const ModelSpec& spec);

struct LyapunovOptions {
  /// Rescale the running product every k steps.
  int rescale_interval = 8;
  /// Bonds with |t| below this times max|t| are replaced by the signed cutoff.
  double relative_cutoff = 1e-12;
  /// Regularized fraction above which the result carries a warning.
  double warning_fraction = 0.01;
};

struct LyapunovResult {
  double gamma = 0.0;
  double energy = 0.0;
  int steps = 0;
  int regularized_bonds = 0;
  bool warning = false;
};

LyapunovResult lyapunov_exponent(const TransferChain& chain, const LyapunovOptions& options = {});

std::vector<LyapunovResult> lyapunov_spectrum(const ModelSpec& spec, const Eigen::VectorXd& eigenvalues,
                                              const LyapunovOptions& options = {});

}  // namespace qpdual
