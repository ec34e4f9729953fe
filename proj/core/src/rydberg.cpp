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

#include "qpdual/rydberg.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qpdual/error.hpp"

namespace qpdual {

void RydbergModelSpec::validate() const {
  require(scale > 0.0 && std::isfinite(scale), "rydberg: scale A must be positive");
  require(range >= 1, "rydberg: range must be at least 1");
  ideal().validate();
}

ModelSpec RydbergModelSpec::ideal() const {
  ModelSpec s = power_law_b_infinity(3.0, range, size, boundary);
  s.tau = tau;
  return s;
}

ModelSpec RydbergModelSpec::dual() const { return ideal().dual(); }

RydbergModelSpec rydberg_model(double scale, int range, int size, Boundary boundary) {
  RydbergModelSpec s;
  s.scale = scale;
  s.range = range;
  s.size = size;
  s.tau = tau_for_size(size);
  s.boundary = boundary;
  s.validate();
  return s;
}

HamiltonianMatrix build_rydberg_hamiltonian(const RydbergModelSpec& spec) {
  spec.validate();
  HamiltonianMatrix h = build_hamiltonian(spec.ideal());
  h.values *= spec.scale;
  return h;
}

SpectrumResult solve_rydberg(const RydbergModelSpec& spec) {
  spec.validate();
  HamiltonianTerms terms = assemble_terms(spec.ideal());
  for (MatrixEntry& e : terms.entries) e.value *= spec.scale;
  return diagonalize_banded(terms);
}

Eigen::VectorXd default_quench_times(double scale, int count) {
  require(scale > 0.0, "quench: scale must be positive");
  require(count >= 2, "quench: need at least two times");
  Eigen::VectorXd t(count);
  t(0) = 0.0;
  const double lo = std::log10(1e-2 / scale);
  const double hi = std::log10(1e3 / scale);
  const int intervals = std::max(count - 2, 1);
  for (int i = 1; i < count; ++i) t(i) = std::pow(10.0, lo + (hi - lo) * (i - 1) / intervals);
  return t;
}

Eigen::VectorXd site_excitation(int size, int site) {
  require(site >= 1 && site <= size, "quench: site out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v(site - 1) = 1.0;
  return v;
}

QuenchResult quench(const SpectrumResult& spectrum, const Eigen::VectorXd& initial, const Eigen::VectorXd& times) {
  require(spectrum.has_vectors(), "quench: eigenvectors are required");
  const Eigen::Index n = spectrum.size();
  require(initial.size() == n, "quench: initial state has the wrong size");
  require(std::abs(initial.squaredNorm() - 1.0) <= 1e-10, "quench: initial state is not normalized");
  require(times.allFinite(), "quench: non-finite time");
  const Eigen::Index nt = times.size();
  const Eigen::MatrixXd& v = spectrum.eigenvectors;
  const Eigen::VectorXd overlap = v.transpose() * initial;

  // psi(t) = V (c .* exp(-i E t)); real and imaginary parts as two products.
  Eigen::MatrixXd re(n, nt), im(n, nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const Eigen::ArrayXd phase = spectrum.eigenvalues.array() * times(k);
    re.col(k) = overlap.array() * phase.cos();
    im.col(k) = -overlap.array() * phase.sin();
  }
  const Eigen::MatrixXd psi_re = v * re;
  const Eigen::MatrixXd psi_im = v * im;

  QuenchResult r;
  r.times = times;
  r.populations = psi_re.array().square() + psi_im.array().square();
  r.return_probability.resize(nt);
  r.participation_ratio.resize(nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const double a = initial.dot(psi_re.col(k));
    const double b = initial.dot(psi_im.col(k));
    r.return_probability(k) = a * a + b * b;
    r.participation_ratio(k) = 1.0 / r.populations.col(k).array().square().sum();
  }
  return r;
}

QuenchResult quench(const RydbergModelSpec& spec, const Eigen::VectorXd& initial, const Eigen::VectorXd& times) {
  return quench(solve_rydberg(spec), initial, times);
}

QuenchResult quench(const ModelSpec& spec, const Eigen::VectorXd& initial, const Eigen::VectorXd& times) {
  return quench(solve(spec), initial, times);
}

namespace {

struct Summary {
  std::vector<double> edges;
  double inner = 0.0;
  double outer = 0.0;
};

Summary summarize(const SpectrumResult& spectrum, const TauApproximant& tau, const Thresholds& thresholds) {
  std::vector<StateDiagnostics> states = compute_diagnostics(spectrum);
  const int n = spectrum.size();
  classify_phases(states, n, thresholds);
  Summary s;
  s.edges = detect_mobility_edges(states, tau).positions();
  const double p4 = 2.0 * tau.value() - 1.0;
  s.inner = mean_fd(states, p4, 1.0 - p4);
  s.outer = mean_fd(states, p4, 1.0 - p4, true);
  return s;
}

bool moved(const std::vector<double>& a, const std::vector<double>& b, double tolerance) {
  if (a.size() != b.size()) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tolerance) return true;
  }
  return false;
}

}  // namespace

std::vector<RangeComparison> compare_to_ideal(const RydbergModelSpec& spec, const std::vector<int>& ranges,
                                              const Thresholds& thresholds) {
  std::vector<RangeComparison> table;
  const double tolerance = 2.0 / spec.size;
  for (int d : ranges) {
    RydbergModelSpec at = spec;
    at.range = d;
    at.validate();
    const Summary direct = summarize(solve_rydberg(at), at.tau, thresholds);
    const Summary dual = summarize(solve(at.dual()), at.tau, thresholds);
    RangeComparison row;
    row.range = d;
    row.edges = direct.edges;
    row.dual_edges = dual.edges;
    row.mfd_inner = direct.inner;
    row.mfd_outer = direct.outer;
    row.dual_mfd_inner = dual.inner;
    row.dual_mfd_outer = dual.outer;
    if (!table.empty()) {
      row.moved = moved(row.edges, table.back().edges, tolerance);
      row.dual_moved = moved(row.dual_edges, table.back().dual_edges, tolerance);
    }
    table.push_back(row);
  }
  return table;
}

std::string to_json(const RydbergModelSpec& spec, const std::vector<RangeComparison>& table) {
  nlohmann::json j;
  j["N"] = spec.size;
  j["p"] = spec.tau.p;
  j["q"] = spec.tau.q;
  j["A"] = spec.scale;
  j["a"] = 3.0;
  j["reference"] = {{"2tau-1", 2.0 * spec.tau.value() - 1.0}, {"2-2tau", 2.0 - 2.0 * spec.tau.value()}};
  nlohmann::json rows = nlohmann::json::array();
  for (const RangeComparison& r : table) {
    rows.push_back({{"d", r.range},
                    {"edges", r.edges},
                    {"dual_edges", r.dual_edges},
                    {"mfd_inner", r.mfd_inner},
                    {"mfd_outer", r.mfd_outer},
                    {"dual_mfd_inner", r.dual_mfd_inner},
                    {"dual_mfd_outer", r.dual_mfd_outer},
                    {"moved", r.moved},
                    {"dual_moved", r.dual_moved}});
  }
  j["ranges"] = rows;
  return j.dump(2);
}

}  // namespace qpdual
