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

#include "qpdual/model.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "qpdual/error.hpp"

namespace qpdual {

std::string to_string(Boundary boundary) {
  return boundary == Boundary::Periodic ? "periodic" : "open";
}

std::string to_string(LimitFlag flag) {
  switch (flag) {
    case LimitFlag::None: return "none";
    case LimitFlag::AInfinity: return "a-infinity";
    case LimitFlag::BInfinity: return "b-infinity";
  }
  return "unknown";
}

HoppingKernel ModelSpec::effective_distance() const {
  return limit == LimitFlag::AInfinity ? distance_kernel.nearest_only() : distance_kernel;
}

HoppingKernel ModelSpec::effective_modulation() const {
  return limit == LimitFlag::BInfinity ? modulation_kernel.nearest_only() : modulation_kernel;
}

int ModelSpec::range() const {
  if (is_diagonal_aah()) return 1;
  return effective_distance().range();
}

void ModelSpec::validate() const {
  require(size >= 2, "model: size must be >= 2");
  require(tau.q > 0 && tau.p > 0 && tau.p < tau.q, "model: invalid tau approximant");
  require(std::gcd(tau.p, tau.q) == 1, "model: tau numerator and denominator must be coprime");
  if (boundary == Boundary::Periodic) {
    require(size % tau.q == 0,
            "model: periodic boundary needs q to divide N (q=" + std::to_string(tau.q) +
                ", N=" + std::to_string(size) + ")");
  }
  if (is_diagonal_aah()) {
    require(size >= 3 || boundary == Boundary::Open, "model: periodic AAH chain needs N >= 3");
    return;
  }
  require(distance_kernel.range() >= 1 && modulation_kernel.range() >= 1,
          "model: kernels need range >= 1");
  if (limit == LimitFlag::None) {
    require(distance_kernel.range() == modulation_kernel.range(),
            "model: distance and modulation kernels have different ranges (" +
                std::to_string(distance_kernel.range()) + " vs " +
                std::to_string(modulation_kernel.range()) + ") and no limit flag is set");
  }
  // d < N/2 keeps every periodic pair (m, m+s) distinct from (m, m+N-s).
  require(2 * range() < size, "model: hopping range d=" + std::to_string(range()) +
                                  " must satisfy d < N/2 (N=" + std::to_string(size) + ")");
  for (double w : distance_kernel.weights()) require(std::isfinite(w), "model: non-finite f_s");
  for (double w : modulation_kernel.weights()) require(std::isfinite(w), "model: non-finite f_s");
}

ModelSpec ModelSpec::dual() const {
  require(!is_diagonal_aah(), "model: the diagonal AAH calibration model has no a<->b dual here");
  ModelSpec d = *this;
  std::swap(d.distance_kernel, d.modulation_kernel);
  if (limit == LimitFlag::AInfinity) d.limit = LimitFlag::BInfinity;
  else if (limit == LimitFlag::BInfinity) d.limit = LimitFlag::AInfinity;
  return d;
}

namespace {

ModelSpec base_spec(int size, Boundary boundary) {
  ModelSpec spec;
  spec.size = size;
  spec.boundary = boundary;
  spec.tau = tau_for_size(size);
  return spec;
}

}  // namespace

ModelSpec power_law_model(double a, double b, int range, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::power_law(a, range);
  spec.modulation_kernel = HoppingKernel::power_law(b, range);
  return spec;
}

ModelSpec power_law_b_infinity(double a, int range, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::power_law(a, range);
  spec.modulation_kernel = HoppingKernel::power_law(0.0, 1);
  spec.limit = LimitFlag::BInfinity;
  return spec;
}

ModelSpec power_law_a_infinity(double b, int range, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::power_law(0.0, 1);
  spec.modulation_kernel = HoppingKernel::power_law(b, range);
  spec.limit = LimitFlag::AInfinity;
  return spec;
}

ModelSpec exponential_model(double a, double b, int range, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::exponential(a, range);
  spec.modulation_kernel = HoppingKernel::exponential(b, range);
  return spec;
}

ModelSpec off_diagonal_aah_model(double a, double b, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::off_diagonal_aah(a);
  spec.modulation_kernel = HoppingKernel::off_diagonal_aah(b);
  return spec;
}

ModelSpec diagonal_aah_model(double hopping, double potential, int size, Boundary boundary) {
  ModelSpec spec = base_spec(size, boundary);
  spec.distance_kernel = HoppingKernel::diagonal_aah(hopping, potential);
  spec.modulation_kernel = HoppingKernel::diagonal_aah(hopping, potential);
  return spec;
}

HamiltonianTerms assemble_terms(const ModelSpec& spec) {
  spec.validate();
  HamiltonianTerms terms;
  terms.size = spec.size;
  terms.range = spec.range();
  terms.boundary = spec.boundary;
  const int n_sites = spec.size;
  const bool periodic = spec.boundary == Boundary::Periodic;

  if (spec.is_diagonal_aah()) {
    const double t = spec.distance_kernel.parameter();
    const double v = spec.distance_kernel.potential();
    terms.has_diagonal = v != 0.0;
    terms.entries.reserve(static_cast<std::size_t>(2 * n_sites));
    for (int m = 1; m <= n_sites; ++m) {
      // V cos(2 pi tau m)
      const double onsite = v * cos_pi_rational(spec.tau.p, 2 * static_cast<std::int64_t>(m), spec.tau.q);
      if (onsite != 0.0) terms.entries.push_back({m - 1, m - 1, onsite});
    }
    for (int m = 1; m < n_sites; ++m) terms.entries.push_back({m - 1, m, t});
    if (periodic && n_sites > 2) terms.entries.push_back({0, n_sites - 1, t});
    return terms;
  }

  const HoppingKernel dist = spec.effective_distance();
  const HoppingKernel mod = spec.effective_modulation();
  const int d = dist.range();
  terms.entries.reserve(static_cast<std::size_t>(n_sites) * static_cast<std::size_t>(d));
  for (int m = 1; m <= n_sites; ++m) {
    for (int s = 1; s <= d; ++s) {
      int n = m + s;
      const std::int64_t x = static_cast<std::int64_t>(m) + n;
      if (n > n_sites) {
        if (!periodic) break;
        n -= n_sites;
      }
      const double value = dist.weight(s) * modulation_F(mod, spec.tau, x);
      const int row = std::min(m, n) - 1;
      const int col = std::max(m, n) - 1;
      terms.entries.push_back({row, col, value});
    }
  }
  return terms;
}

HamiltonianMatrix to_dense(const HamiltonianTerms& terms) {
  HamiltonianMatrix h;
  h.values = Eigen::MatrixXd::Zero(terms.size, terms.size);
  h.range = terms.range;
  h.boundary = terms.boundary;
  h.has_diagonal = terms.has_diagonal;
  for (const MatrixEntry& e : terms.entries) {
    h.values(e.row, e.col) = e.value;
    h.values(e.col, e.row) = e.value;
  }
  return h;
}

HamiltonianMatrix build_hamiltonian(const ModelSpec& spec) { return to_dense(assemble_terms(spec)); }

NearestNeighborForm nearest_neighbor_form(const ModelSpec& spec) {
  require(spec.is_nearest_neighbor(), "nearest_neighbor_form: model has hopping range " +
                                          std::to_string(spec.range()) + " > 1");
  const HamiltonianTerms terms = assemble_terms(spec);
  const int n = terms.size;
  NearestNeighborForm form;
  form.diagonal = Eigen::VectorXd::Zero(n);
  form.offdiagonal = Eigen::VectorXd::Zero(n - 1);
  for (const MatrixEntry& e : terms.entries) {
    if (e.row == e.col) form.diagonal(e.row) = e.value;
    else if (e.col == e.row + 1) form.offdiagonal(e.row) = e.value;
    else form.wrap = e.value;  // (0, N-1)
  }
  return form;
}

Eigen::VectorXd bond_amplitudes(const ModelSpec& spec) {
  spec.validate();
  require(spec.is_nearest_neighbor(), "bond_amplitudes: model is not nearest-neighbour");
  const int n_sites = spec.size;
  Eigen::VectorXd t(n_sites + 1);
  if (spec.is_diagonal_aah()) {
    t.setConstant(spec.distance_kernel.parameter());
    return t;
  }
  const HoppingKernel dist = spec.effective_distance();
  const HoppingKernel mod = spec.effective_modulation();
  for (int n = 1; n <= n_sites; ++n) {
    t(n) = dist.weight(1) * modulation_F(mod, spec.tau, 2 * static_cast<std::int64_t>(n) + 1);
  }
  t(0) = t(n_sites);
  return t;
}

void write_dense_text(std::ostream& out, const HamiltonianMatrix& h) {
  std::ostringstream line;
  line << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int m = 0; m < h.size(); ++m) {
    line.str({});
    for (int n = 0; n < h.size(); ++n) {
      if (n) line << ' ';
      line << h.values(m, n);
    }
    out << line.str() << '\n';
  }
}

HamiltonianMatrix read_dense_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  HamiltonianMatrix h;
  h.values = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    require(static_cast<int>(rows[static_cast<std::size_t>(m)].size()) == n,
            "read_dense_text: row " + std::to_string(m + 1) + " has wrong length");
    for (int k = 0; k < n; ++k) h.values(m, k) = rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  }
  int range = 0;
  for (int m = 0; m < n; ++m)
    for (int k = m + 1; k < n; ++k)
      if (h.values(m, k) != 0.0) range = std::max(range, std::min(k - m, n - (k - m)));
  h.range = range;
  for (int m = 0; m < n; ++m) h.has_diagonal = h.has_diagonal || h.values(m, m) != 0.0;
  return h;
}

}  // namespace qpdual
