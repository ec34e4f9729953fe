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

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qpdual/model.hpp"
#include "qpdual/rydberg.hpp"

namespace qpdual {

/// Named model parameters; a or b may be +inf to select a limit.
struct ModelParams {
  std::string family = "power-law";
  double a = 0.0;
  double b = 0.0;
  int d = 1;
  double t = 1.0;  // diag-aah hopping
  double V = 0.0;  // diag-aah potential
  double A = 1.0;  // rydberg scale
  /// q = N unless set; p then follows from the Fibonacci pair.
  std::int64_t p = 0;
};

/// Families: power-law, dual-power (H(inf, a)), exponential, offdiag-aah,
/// diag-aah, rydberg.
ModelSpec make_model(const ModelParams& params, int size);
bool is_rydberg(const ModelParams& params);
RydbergModelSpec make_rydberg(const ModelParams& params, int size);

enum class Diagnostic { States, Spacings, Edges, Lyapunov, Mfd, Duality, Values };
std::string to_string(Diagnostic d);
Diagnostic diagnostic_from_string(const std::string& text);

struct Axis {
  std::string name;
  std::vector<double> values;
};

/// b = offset + sign * (axis value), e.g. "b = 4 - a".
struct Constraint {
  std::string target;
  std::string source;
  double offset = 0.0;
  double sign = -1.0;
};

struct SweepPlan {
  std::string name;
  ModelParams base;
  std::vector<Axis> axes;
  std::vector<Constraint> constraints;
  std::vector<int> sizes;
  std::vector<Diagnostic> diagnostics;
  std::string output = ".";
  int concurrency = 1;
  std::size_t memory_budget = std::size_t{2} << 30;
  /// Largest N for which eigenvectors are computed.
  int vector_cap = 10946;

  void validate() const;
};

struct GridPoint {
  int index = 0;
  int size = 0;
  ModelParams params;
};

/// Sizes vary fastest, then axes in declaration order (last axis fastest).
std::vector<GridPoint> expand_grid(const SweepPlan& plan);

/// Parses the plan grammar documented in docs/formats.md. Unknown keys
/// and malformed values are rejected with the offending line number.
SweepPlan parse_plan(std::istream& in, const std::string& name = "plan");
SweepPlan read_plan_file(const std::string& path);

void set_param(ModelParams& params, const std::string& key, double value);
double get_param(const ModelParams& params, const std::string& key);

}  // namespace qpdual
