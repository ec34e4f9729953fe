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
#include <complex>
#include <string>

#include "qpdual/model.hpp"

namespace qpdual {

/// U[k][m] = exp(-2 i pi p m k / N) / sqrt(N) on 1-based labels.
struct DualTransform {
  int size = 0;
  TauApproximant tau;
  Eigen::MatrixXcd matrix;
  /// max |U^dagger U - I|
  double unitarity_residual = 0.0;
};

DualTransform make_transform(int size, const TauApproximant& tau);

/// U * state using the stored matrix.
Eigen::VectorXcd dual_state(const DualTransform& transform, const Eigen::VectorXcd& state);
/// Same result through an FFT; U is a permuted discrete Fourier transform.
Eigen::VectorXcd dual_state_fft(const TauApproximant& tau, const Eigen::VectorXcd& state);

/// Dual-space IPR of every column. The permutation inside U drops out of
/// the IPR, so only |FFT|^4 is needed and U is never formed.
Eigen::VectorXd dual_ipr(const Eigen::MatrixXd& vectors);

/// Dual-space IPRs of the maximally localized orthonormal basis of the
/// span of the given (degenerate) columns, in ascending order.
Eigen::VectorXd dual_ipr_localized(const Eigen::MatrixXd& cluster);

/// U H U^dagger through a two-dimensional FFT of H.
Eigen::MatrixXcd conjugate(const HamiltonianMatrix& h, const TauApproximant& tau);

struct DualityReport {
  int size = 0;
  TauApproximant tau;
  double a = 0.0;  // +inf for the AInfinity limit
  double b = 0.0;  // +inf for the BInfinity limit
  int range = 0;
  double spectral_deviation = 0.0;
  /// NaN when N is above the conjugation cap.
  double conjugation_residual = 0.0;
  bool self_dual = false;
};

struct DualityOptions {
  /// Largest N for which U H U^dagger is formed (two N x N complex buffers).
  int conjugation_cap = 6765;
};

/// Distance and modulation parameters as used in reports (+inf for limit flags).
double parameter_a(const ModelSpec& spec);
double parameter_b(const ModelSpec& spec);

/// a == b with identical kernels on both roles.
bool is_self_dual(const ModelSpec& spec);

DualityReport check_duality(const ModelSpec& spec_a, const ModelSpec& spec_b,
                            const DualityOptions& options = {});

std::string to_json(const DualityReport& report);
DualityReport duality_report_from_json(const std::string& text);

}  // namespace qpdual
