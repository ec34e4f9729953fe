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

#include "qpdual/spectra.hpp"
#include "qpdual/tau.hpp"

namespace qpdual {

enum class Phase { Extended, Critical, Localized, Unclassified };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& text);

struct StateDiagnostics {
  int index = 0;  // 1-based, ascending energy
  double energy = 0.0;
  double ipr = 0.0;
  double fd = 0.0;
  /// IPR and FD of the state after the dual transform.
  double dual_ipr = 0.0;
  double dual_fd = 0.0;
  Phase label = Phase::Unclassified;
};

struct FractalDimension {
  double ipr = 0.0;
  double fd = 0.0;
};

/// Rejects states whose norm differs from 1 by more than 1e-10.
FractalDimension fractal_dimension(const Eigen::Ref<const Eigen::VectorXd>& state);

struct DiagnosticsOptions {
  /// Levels closer than this times the bandwidth form one cluster.
  double degeneracy_tolerance = 1e-12;
  /// Replace each degenerate cluster by its maximally localized basis, in
  /// real and in dual space separately, so values do not depend on the
  /// solver's arbitrary choice of basis.
  bool localize_clusters = true;
};

/// Per-state IPR/FD in both spaces; labels are left Unclassified.
std::vector<StateDiagnostics> compute_diagnostics(const SpectrumResult& spectrum,
                                                  const DiagnosticsOptions& options = {});

enum class ClassifierRule {
  /// Localized when fd < theta_loc, Extended when dual_fd < theta_loc.
  DualityAware,
  /// fd < theta_loc Localized, fd > theta_ext Extended, otherwise Critical.
  FractalOnly,
};

std::string to_string(ClassifierRule rule);
ClassifierRule classifier_rule_from_string(const std::string& text);

struct Thresholds {
  double c_loc = 1.0;
  double c_ext = 1.0;
  ClassifierRule rule = ClassifierRule::DualityAware;

  double theta_loc(int n) const;
  double theta_ext(int n) const;
};

/// Constants produced by the calibration run and compiled into the library.
Thresholds default_thresholds();

void classify_phases(std::vector<StateDiagnostics>& states, int n, const Thresholds& thresholds);
Phase classify_state(const StateDiagnostics& state, int n, const Thresholds& thresholds);

/// Mean fd over states with lo <= j/N <= hi, or outside that interval when
/// complement is set.
double mean_fd(const std::vector<StateDiagnostics>& states, double lo, double hi, bool complement = false);

enum class SpacingParity { EvenOdd, OddEven };
std::string to_string(SpacingParity parity);
SpacingParity spacing_parity_from_string(const std::string& text);

struct SpacingRecord {
  int j = 0;
  double spacing = 0.0;
  SpacingParity parity = SpacingParity::EvenOdd;
};

std::vector<SpacingRecord> even_odd_spacings(const Eigen::VectorXd& eigenvalues);

struct ParityGap {
  double even_odd_median = 0.0;
  double odd_even_median = 0.0;
  /// larger median / smaller median (inf when the smaller one is 0)
  double ratio = 1.0;
  /// Family whose spacings are the small ones.
  SpacingParity small_family = SpacingParity::EvenOdd;
};

/// Median-ratio statistic over records with lo <= j/N <= hi.
ParityGap parity_gap(const std::vector<SpacingRecord>& records, int n, double lo, double hi);

/// max_j |E_j + E_{N+1-j}| / bandwidth
double spectral_symmetry_check(const Eigen::VectorXd& eigenvalues);

struct ReferenceEdge {
  std::string name;
  double value = 0.0;
};

/// P1 = 1 - tau, P2 = 20 tau - 12, P3 = 7 tau - 4, P4 = 2 tau - 1, their
/// mirrors 1 - P, and 2 - 2 tau, evaluated on the approximant.
std::vector<ReferenceEdge> reference_edges(const TauApproximant& tau);

struct MobilityEdge {
  /// j/N with j the last state of the left-hand run.
  double position = 0.0;
  int index = 0;
  Phase below = Phase::Unclassified;
  Phase above = Phase::Unclassified;
  /// Closest reference edge within the match tolerance, empty when none.
  std::string matched;
  double matched_value = 0.0;
};

struct MobilityEdgeSet {
  int size = 0;
  TauApproximant tau;
  std::vector<MobilityEdge> edges;

  std::vector<double> positions() const;
};

/// Absorbs runs shorter than min_run into the longer neighbour, shortest
/// run first, until every run has at least min_run states.
std::vector<Phase> merge_short_runs(std::vector<Phase> labels, int min_run);

MobilityEdgeSet detect_mobility_edges(const std::vector<StateDiagnostics>& states, const TauApproximant& tau,
                                      int min_plateau = 5);

/// Same number of edges as expected and each sorted pair within tolerance.
bool edges_match(const MobilityEdgeSet& found, const std::vector<double>& expected, double tolerance);

}  // namespace qpdual
