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

#include <span>
#include <string>
#include <vector>

#include "qpdual/tau.hpp"

namespace qpdual {

enum class KernelFamily { PowerLaw, Exponential, OffDiagonalAAH, DiagonalAAH, CustomTable };

std::string to_string(KernelFamily family);

/// The hopping sequence f_1 ... f_d of the self-dual construction.
///
/// The same kernel type plays two roles in a model: as the distance decay
/// f_{|m-n|} and, through modulation_F(), as the quasiperiodic modulation.
/// f_s = 0 for s > range().
///
/// Normalisations: PowerLaw f_s = s^-a; Exponential f_s = exp(-rate (s-1));
/// OffDiagonalAAH f_1 = amplitude; CustomTable takes the values verbatim.
/// DiagonalAAH is a calibration model that is not generated by the
/// construction; its weights() are the single hopping t.
class HoppingKernel {
 public:
  HoppingKernel() = default;

  static HoppingKernel power_law(double exponent, int range);
  static HoppingKernel exponential(double rate, int range);
  static HoppingKernel off_diagonal_aah(double amplitude);
  static HoppingKernel diagonal_aah(double hopping, double potential);
  static HoppingKernel custom(std::vector<double> values);

  KernelFamily family() const { return family_; }
  int range() const { return static_cast<int>(weights_.size()); }

  /// f_s, zero outside 1 <= s <= range().
  double weight(int s) const {
    return (s >= 1 && s <= range()) ? weights_[static_cast<std::size_t>(s - 1)] : 0.0;
  }
  std::span<const double> weights() const { return weights_; }

  /// Exponent, rate or amplitude (family dependent); hopping t for DiagonalAAH.
  double parameter() const { return parameter_; }
  /// On-site amplitude V; only meaningful for DiagonalAAH.
  double potential() const { return potential_; }

  /// Same family and parameter truncated to s = 1 (the a -> infinity limit
  /// of PowerLaw and Exponential).
  HoppingKernel nearest_only() const;

  /// Sum of |f_s|; finite for every well-formed kernel.
  double absolute_sum() const;

 private:
  HoppingKernel(KernelFamily family, double parameter, double potential,
                std::vector<double> weights);

  KernelFamily family_ = KernelFamily::CustomTable;
  double parameter_ = 0.0;
  double potential_ = 0.0;
  std::vector<double> weights_;
};

/// cos(pi * p * k / q) with the argument reduced exactly in integers,
/// k taken modulo 2q.
double cos_pi_rational(std::int64_t p, std::int64_t k, std::int64_t q);

/// F_x = sum_{s=1}^{d} f_s cos(tau s pi x) with tau = p/q.
double modulation_F(const HoppingKernel& kernel, const TauApproximant& tau, std::int64_t x);

}  // namespace qpdual
