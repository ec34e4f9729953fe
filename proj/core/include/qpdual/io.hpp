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
#include <string>
#include <vector>

#include "qpdual/diagnostics.hpp"
#include "qpdual/lyapunov.hpp"
#include "qpdual/model.hpp"
#include "qpdual/rydberg.hpp"

namespace qpdual {

/// Model columns repeated on every CSV row.
struct ModelTag {
  int size = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  double a = 0.0;  // +inf for the AInfinity limit
  double b = 0.0;  // +inf for the BInfinity limit
  int range = 0;   // kernel range d

  friend bool operator==(const ModelTag&, const ModelTag&) = default;
};

ModelTag model_tag(const ModelSpec& spec);

/// Shortest decimal that parses back to the same double; "inf"/"-inf"/"nan".
std::string format_double(double v);
double parse_double(const std::string& text);

struct StateRow {
  ModelTag tag;
  StateDiagnostics state;
};

void write_states_csv(std::ostream& out, const ModelTag& tag, const std::vector<StateDiagnostics>& states);
std::vector<StateRow> read_states_csv(std::istream& in);

struct SpacingRow {
  int size = 0;
  SpacingRecord record;
};

void write_spacings_csv(std::ostream& out, int size, const std::vector<SpacingRecord>& records);
std::vector<SpacingRow> read_spacings_csv(std::istream& in);

struct LyapunovRow {
  int size = 0;
  double a = 0.0;
  int range = 0;
  int j = 0;
  double energy = 0.0;
  double gamma = 0.0;
  int regularized_bonds = 0;
};

void write_lyapunov_csv(std::ostream& out, const ModelTag& tag, const std::vector<LyapunovResult>& results);
std::vector<LyapunovRow> read_lyapunov_csv(std::istream& in);

std::string to_json(const MobilityEdgeSet& edges);
MobilityEdgeSet edges_from_json(const std::string& text);

void write_populations_csv(std::ostream& out, const QuenchResult& result);
void write_quench_summary_csv(std::ostream& out, const QuenchResult& result);
/// Rebuilds a QuenchResult from the long-format and summary files.
QuenchResult read_quench_csv(std::istream& populations, std::istream& summary);

/// Splits one CSV line; the formats here never quote fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace qpdual
