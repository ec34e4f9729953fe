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

#include "qpdual/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "localize.hpp"
#include "qpdual/duality.hpp"
#include "qpdual/error.hpp"

namespace qpdual {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::Extended: return "extended";
    case Phase::Critical: return "critical";
    case Phase::Localized: return "localized";
    case Phase::Unclassified: return "unclassified";
  }
  return "unclassified";
}

Phase phase_from_string(const std::string& text) {
  if (text == "extended") return Phase::Extended;
  if (text == "critical") return Phase::Critical;
  if (text == "localized") return Phase::Localized;
  if (text == "unclassified") return Phase::Unclassified;
  throw InvalidArgument("unknown phase label '" + text + "'");
}

std::string to_string(ClassifierRule rule) {
  return rule == ClassifierRule::DualityAware ? "duality-aware" : "fractal-only";
}

ClassifierRule classifier_rule_from_string(const std::string& text) {
  if (text == "duality-aware") return ClassifierRule::DualityAware;
  if (text == "fractal-only") return ClassifierRule::FractalOnly;
  throw InvalidArgument("unknown classifier rule '" + text + "'");
}

std::string to_string(SpacingParity parity) { return parity == SpacingParity::EvenOdd ? "even-odd" : "odd-even"; }

SpacingParity spacing_parity_from_string(const std::string& text) {
  if (text == "even-odd") return SpacingParity::EvenOdd;
  if (text == "odd-even") return SpacingParity::OddEven;
  throw InvalidArgument("unknown spacing parity '" + text + "'");
}

namespace {

double fd_from_ipr(double ipr, int n) {
  // Rounding can push a flat state a hair past 1/N.
  return std::clamp(-std::log(ipr) / std::log(static_cast<double>(n)), 0.0, 1.0);
}

}  // namespace

FractalDimension fractal_dimension(const Eigen::Ref<const Eigen::VectorXd>& state) {
  const int n = static_cast<int>(state.size());
  require(n >= 2, "fractal_dimension: need at least two sites");
  require(std::abs(state.squaredNorm() - 1.0) <= 1e-10, "fractal_dimension: state is not normalized");
  FractalDimension r;
  r.ipr = state.array().square().square().sum();
  r.fd = fd_from_ipr(r.ipr, n);
  return r;
}

std::vector<StateDiagnostics> compute_diagnostics(const SpectrumResult& spectrum, const DiagnosticsOptions& options) {
  require(spectrum.has_vectors(), "compute_diagnostics: eigenvectors are required");
  const int n = spectrum.size();
  require(n >= 2, "compute_diagnostics: need at least two sites");
  const Eigen::MatrixXd& v = spectrum.eigenvectors;

  Eigen::VectorXd ipr(n);
  for (int j = 0; j < n; ++j) ipr(j) = v.col(j).array().square().square().sum();
  Eigen::VectorXd dual = dual_ipr(v);

  if (options.localize_clusters) {
    for (const auto& [first, last] : degenerate_clusters(spectrum.eigenvalues, options.degeneracy_tolerance)) {
      const int count = last - first;
      if (count < 2) continue;
      Eigen::MatrixXcd block = v.middleCols(first, count).cast<std::complex<double>>();
      detail::localize_columns(block);
      Eigen::VectorXd local(count);
      for (int c = 0; c < count; ++c) local(c) = block.col(c).cwiseAbs2().array().square().sum();
      std::sort(local.data(), local.data() + count);
      ipr.segment(first, count) = local;
      dual.segment(first, count) = dual_ipr_localized(v.middleCols(first, count));
    }
  }

  std::vector<StateDiagnostics> states(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    StateDiagnostics& s = states[static_cast<std::size_t>(j)];
    s.index = j + 1;
    s.energy = spectrum.eigenvalues(j);
    s.ipr = ipr(j);
    s.fd = fd_from_ipr(ipr(j), n);
    s.dual_ipr = dual(j);
    s.dual_fd = fd_from_ipr(dual(j), n);
  }
  return states;
}

double Thresholds::theta_loc(int n) const { return c_loc * 2.0 / std::log(static_cast<double>(n)); }
double Thresholds::theta_ext(int n) const { return 1.0 - c_ext * 2.0 / std::log(static_cast<double>(n)); }

Phase classify_state(const StateDiagnostics& state, int n, const Thresholds& thresholds) {
  const double loc = thresholds.theta_loc(n);
  if (thresholds.rule == ClassifierRule::FractalOnly) {
    if (state.fd < loc) return Phase::Localized;
    if (state.fd > thresholds.theta_ext(n)) return Phase::Extended;
    return Phase::Critical;
  }
  const bool localized = state.fd < loc;
  const bool extended = state.dual_fd < loc;
  if (localized && extended) return Phase::Unclassified;
  if (localized) return Phase::Localized;
  if (extended) return Phase::Extended;
  return Phase::Critical;
}

void classify_phases(std::vector<StateDiagnostics>& states, int n, const Thresholds& thresholds) {
  require(n >= 2, "classify_phases: need at least two sites");
  for (StateDiagnostics& s : states) s.label = classify_state(s, n, thresholds);
}

double mean_fd(const std::vector<StateDiagnostics>& states, double lo, double hi, bool complement) {
  require(lo <= hi && lo >= 0.0 && hi <= 1.0, "mean_fd: window must satisfy 0 <= lo <= hi <= 1");
  const double n = static_cast<double>(states.size());
  // Slack so rational window ends such as 610/2584 include their own state.
  const double slack = 1e-12;
  double sum = 0.0;
  int count = 0;
  for (const StateDiagnostics& s : states) {
    const double x = s.index / n;
    const bool inside = x >= lo - slack && x <= hi + slack;
    if (inside != complement) {
      sum += s.fd;
      ++count;
    }
  }
  require(count > 0, "mean_fd: empty window");
  return sum / count;
}

std::vector<SpacingRecord> even_odd_spacings(const Eigen::VectorXd& eigenvalues) {
  const int n = static_cast<int>(eigenvalues.size());
  require(n >= 3, "even_odd_spacings: need at least three levels");
  std::vector<SpacingRecord> records;
  records.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 2; j <= n; ++j) {
    SpacingRecord r;
    r.j = j;
    r.spacing = eigenvalues(j - 1) - eigenvalues(j - 2);
    r.parity = j % 2 == 0 ? SpacingParity::EvenOdd : SpacingParity::OddEven;
    records.push_back(r);
  }
  return records;
}

namespace {

double median(std::vector<double> v) {
  require(!v.empty(), "median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

}  // namespace

ParityGap parity_gap(const std::vector<SpacingRecord>& records, int n, double lo, double hi) {
  std::vector<double> even, odd;
  for (const SpacingRecord& r : records) {
    const double x = static_cast<double>(r.j) / n;
    if (x < lo || x > hi) continue;
    (r.parity == SpacingParity::EvenOdd ? even : odd).push_back(r.spacing);
  }
  require(!even.empty() && !odd.empty(), "parity_gap: window holds fewer than two spacings of each parity");
  ParityGap g;
  g.even_odd_median = median(std::move(even));
  g.odd_even_median = median(std::move(odd));
  const double small = std::min(g.even_odd_median, g.odd_even_median);
  const double large = std::max(g.even_odd_median, g.odd_even_median);
  g.small_family = g.even_odd_median <= g.odd_even_median ? SpacingParity::EvenOdd : SpacingParity::OddEven;
  g.ratio = small > 0.0 ? large / small : (large > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  return g;
}

double spectral_symmetry_check(const Eigen::VectorXd& eigenvalues) {
  const Eigen::Index n = eigenvalues.size();
  if (n == 0) return 0.0;
  const double bandwidth = eigenvalues(n - 1) - eigenvalues(0);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) worst = std::max(worst, std::abs(eigenvalues(j) + eigenvalues(n - 1 - j)));
  return bandwidth > 0.0 ? worst / bandwidth : worst;
}

std::vector<ReferenceEdge> reference_edges(const TauApproximant& tau) {
  const double t = tau.value();
  const std::vector<ReferenceEdge> base = {
      {"P1", 1.0 - t}, {"P2", 20.0 * t - 12.0}, {"P3", 7.0 * t - 4.0}, {"P4", 2.0 * t - 1.0}};
  std::vector<ReferenceEdge> all = base;
  for (const ReferenceEdge& e : base) all.push_back({"1-" + e.name, 1.0 - e.value});
  return all;
}

std::vector<double> MobilityEdgeSet::positions() const {
  std::vector<double> p;
  p.reserve(edges.size());
  for (const MobilityEdge& e : edges) p.push_back(e.position);
  return p;
}

std::vector<Phase> merge_short_runs(std::vector<Phase> labels, int min_run) {
  struct Run {
    std::size_t begin, end;
  };
  while (true) {
    std::vector<Run> runs;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= labels.size(); ++i) {
      if (i == labels.size() || labels[i] != labels[start]) {
        runs.push_back({start, i});
        start = i;
      }
    }
    if (runs.size() <= 1) return labels;
    std::size_t k = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (runs[r].end - runs[r].begin < runs[k].end - runs[k].begin) k = r;
    }
    if (runs[k].end - runs[k].begin >= static_cast<std::size_t>(min_run)) return labels;
    Phase fill;
    if (k == 0) {
      fill = labels[runs[1].begin];
    } else if (k + 1 == runs.size()) {
      fill = labels[runs[k - 1].begin];
    } else {
      const std::size_t left = runs[k - 1].end - runs[k - 1].begin;
      const std::size_t right = runs[k + 1].end - runs[k + 1].begin;
      fill = labels[left >= right ? runs[k - 1].begin : runs[k + 1].begin];
    }
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(runs[k].begin),
              labels.begin() + static_cast<std::ptrdiff_t>(runs[k].end), fill);
  }
}

MobilityEdgeSet detect_mobility_edges(const std::vector<StateDiagnostics>& states, const TauApproximant& tau,
                                      int min_plateau) {
  require(min_plateau >= 1, "detect_mobility_edges: plateau must be positive");
  MobilityEdgeSet set;
  set.size = static_cast<int>(states.size());
  set.tau = tau;
  std::vector<Phase> labels;
  labels.reserve(states.size());
  for (const StateDiagnostics& s : states) labels.push_back(s.label);
  labels = merge_short_runs(std::move(labels), min_plateau);
  const std::vector<ReferenceEdge> refs = reference_edges(tau);
  const double tolerance = 2.0 / std::max(set.size, 1);
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    if (labels[i] == labels[i + 1]) continue;
    MobilityEdge e;
    e.index = static_cast<int>(i) + 1;
    e.position = static_cast<double>(e.index) / set.size;
    e.below = labels[i];
    e.above = labels[i + 1];
    double best = tolerance;
    for (const ReferenceEdge& r : refs) {
      const double gap = std::abs(r.value - e.position);
      if (gap <= best) {
        best = gap;
        e.matched = r.name;
        e.matched_value = r.value;
      }
    }
    set.edges.push_back(e);
  }
  return set;
}

bool edges_match(const MobilityEdgeSet& found, const std::vector<double>& expected, double tolerance) {
  std::vector<double> a = found.positions();
  std::vector<double> b = expected;
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tolerance) return false;
  }
  return true;
}

}  // namespace qpdual
