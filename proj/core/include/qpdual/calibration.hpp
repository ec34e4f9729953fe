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

#include <string>

#include "qpdual/diagnostics.hpp"

namespace qpdual {

/// Threshold constants fitted to models with known phases.
///
/// All FD values are expressed in units of 2/ln N, so a state at scaled
/// value s has fd = s * 2/ln N. The duality-aware constant c_loc sits
/// midway between the largest scaled FD of the anchored localized states
/// (diagonal AAH at V = 4t in real space, V = t in dual space) and the
/// smallest scaled FD of the all-critical off-diagonal AAH model in either
/// space. c_ext is the analogous midpoint for 1 - fd, used only by the
/// fractal-only rule.
struct Calibration {
  int size = 2584;
  double localized_anchor_max = 0.0;
  double critical_anchor_min = 0.0;
  double extended_anchor_max = 0.0;  // scaled 1 - fd at V = t
  double critical_extended_min = 0.0;  // scaled 1 - fd of off-diagonal AAH
  Thresholds thresholds;
  /// Whether the fractal-only rule separates the anchors at all.
  bool fractal_only_separable = false;
  /// Localized states need gamma > lyapunov_floor * ln N / N.
  double lyapunov_floor = 10.0;
  /// Critical states need |gamma| <= lyapunov_critical * ln N / N.
  double lyapunov_critical = 1.0;

  /// FD drift allowed for critical states between sizes n1 < n2:
  /// theta_loc(n1) - theta_loc(n2).
  double drift_bound(int n1, int n2) const;
  double lyapunov_floor_at(int n) const;
  double lyapunov_critical_at(int n) const;
};

Calibration calibrate(int size = 2584);

/// Shipped constants (generated from data/calibration.json at build time).
Calibration shipped_calibration();

std::string to_json(const Calibration& calibration);
Calibration calibration_from_json(const std::string& text);

}  // namespace qpdual
