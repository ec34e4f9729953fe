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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qpdual/diagnostics.hpp"
#include "qpdual/plan.hpp"

namespace qpdual {

struct GridResult {
  int index = 0;
  int size = 0;
  ModelParams params;
  bool ok = false;
  std::string error;
  double wall_seconds = 0.0;
  /// diagnostic name -> file path relative to the output directory
  std::map<std::string, std::string> files;
  /// window name ("inner" = [P4, 1 - P4], "outer" = its complement) -> MFD
  std::map<std::string, double> mfd;
};

struct SweepManifest {
  std::string plan;
  std::string output;
  std::vector<GridResult> points;
  /// FNV-1a over every output file, in gridpoint order.
  std::string content_hash;
};

struct MfdRecord {
  int size = 0;
  std::string window;
  double mfd = 0.0;
};

/// Ordinary least squares of MFD against x = 1 / log10(N).
struct ScalingFit {
  std::string window;
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double residual_norm = 0.0;
};

/// Peak bytes one gridpoint needs; used to admit work under the budget.
std::size_t estimated_bytes(const SweepPlan& plan, const GridPoint& point);

GridResult run_gridpoint(const SweepPlan& plan, const GridPoint& point, const Thresholds& thresholds);

/// Runs every gridpoint on a pool of plan.concurrency workers. Failures are
/// recorded per gridpoint and never stop the sweep. Writes manifest.json,
/// plus mfd.csv and scaling.json when MFDs were requested.
SweepManifest run_sweep(const SweepPlan& plan, const Thresholds& thresholds, std::ostream* log = nullptr);

ScalingFit scaling_fit(const std::vector<MfdRecord>& records, const std::string& window);
std::vector<ScalingFit> scaling_fits(const std::vector<MfdRecord>& records);

std::string to_json(const SweepManifest& manifest);
SweepManifest manifest_from_json(const std::string& text);
std::string to_json(const std::vector<ScalingFit>& fits);

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace qpdual
