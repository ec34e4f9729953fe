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

#include "qpdual/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "qpdual/calibration_data.hpp"
#include "qpdual/error.hpp"

namespace qpdual {

double Calibration::drift_bound(int n1, int n2) const {
  return std::abs(thresholds.theta_loc(n1) - thresholds.theta_loc(n2));
}

double Calibration::lyapunov_floor_at(int n) const { return lyapunov_floor * std::log(n) / n; }
double Calibration::lyapunov_critical_at(int n) const { return lyapunov_critical * std::log(n) / n; }

namespace {

std::vector<StateDiagnostics> anchor(const ModelSpec& spec) { return compute_diagnostics(solve(spec)); }

}  // namespace

Calibration calibrate(int size) {
  require(size >= 100, "calibrate: anchor size must be at least 100");
  Calibration c;
  c.size = size;
  const double unit = 2.0 / std::log(static_cast<double>(size));
  const auto localized = anchor(diagonal_aah_model(1.0, 4.0, size));
  const auto extended = anchor(diagonal_aah_model(1.0, 1.0, size));
  const auto critical = anchor(off_diagonal_aah_model(1.0, 1.0, size));

  double loc_max = 0.0, ext_max = 0.0;
  for (const auto& s : localized) loc_max = std::max(loc_max, s.fd);
  for (const auto& s : extended) {
    loc_max = std::max(loc_max, s.dual_fd);
    ext_max = std::max(ext_max, 1.0 - s.fd);
  }
  double crit_min = std::numeric_limits<double>::infinity();
  double crit_ext_min = std::numeric_limits<double>::infinity();
  for (const auto& s : critical) {
    crit_min = std::min({crit_min, s.fd, s.dual_fd});
    crit_ext_min = std::min(crit_ext_min, 1.0 - std::max(s.fd, s.dual_fd));
  }
  c.localized_anchor_max = loc_max / unit;
  c.critical_anchor_min = crit_min / unit;
  c.extended_anchor_max = ext_max / unit;
  c.critical_extended_min = crit_ext_min / unit;
  if (!(c.localized_anchor_max < c.critical_anchor_min)) {
    throw ComputationError("calibrate: localized and critical anchors overlap");
  }
  c.thresholds.rule = ClassifierRule::DualityAware;
  c.thresholds.c_loc = 0.5 * (c.localized_anchor_max + c.critical_anchor_min);
  c.thresholds.c_ext = 0.5 * (c.extended_anchor_max + c.critical_extended_min);
  c.fractal_only_separable = c.extended_anchor_max < c.critical_extended_min;
  return c;
}

Calibration shipped_calibration() {
  static const Calibration shipped = calibration_from_json(detail::kCalibrationJson);
  return shipped;
}

Thresholds default_thresholds() { return shipped_calibration().thresholds; }

std::string to_json(const Calibration& c) {
  nlohmann::json j;
  j["size"] = c.size;
  j["rule"] = to_string(c.thresholds.rule);
  j["c_loc"] = c.thresholds.c_loc;
  j["c_ext"] = c.thresholds.c_ext;
  j["localized_anchor_max"] = c.localized_anchor_max;
  j["critical_anchor_min"] = c.critical_anchor_min;
  j["extended_anchor_max"] = c.extended_anchor_max;
  j["critical_extended_min"] = c.critical_extended_min;
  j["fractal_only_separable"] = c.fractal_only_separable;
  j["lyapunov_floor"] = c.lyapunov_floor;
  j["lyapunov_critical"] = c.lyapunov_critical;
  return j.dump(2);
}

Calibration calibration_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    Calibration c;
    c.size = j.at("size").get<int>();
    c.thresholds.rule = classifier_rule_from_string(j.at("rule").get<std::string>());
    c.thresholds.c_loc = j.at("c_loc").get<double>();
    c.thresholds.c_ext = j.at("c_ext").get<double>();
    c.localized_anchor_max = j.at("localized_anchor_max").get<double>();
    c.critical_anchor_min = j.at("critical_anchor_min").get<double>();
    c.extended_anchor_max = j.at("extended_anchor_max").get<double>();
    c.critical_extended_min = j.at("critical_extended_min").get<double>();
    c.fractal_only_separable = j.at("fractal_only_separable").get<bool>();
    c.lyapunov_floor = j.at("lyapunov_floor").get<double>();
    c.lyapunov_critical = j.at("lyapunov_critical").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("calibration json: ") + e.what());
  }
}

}  // namespace qpdual
