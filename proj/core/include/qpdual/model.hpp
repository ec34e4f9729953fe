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
#include <iosfwd>
#include <string>
#include <vector>

#include "qpdual/kernel.hpp"
#include "qpdual/tau.hpp"

namespace qpdual {

enum class Boundary { Periodic, Open };
enum class LimitFlag { None, AInfinity, BInfinity };

std::string to_string(Boundary boundary);
std::string to_string(LimitFlag flag);

/// One Hamiltonian instance H(a, b) of the self-dual family.
///
/// distance_kernel supplies f_{|m-n|}(a) and modulation_kernel supplies
/// F_{m+n}(b). AInfinity keeps only the s = 1 distance term (nearest-neighbour
/// chain with t_n = F_{2n+1}(b)); BInfinity keeps only the s = 1 modulation
/// term (F_x = cos(tau pi x)).
struct ModelSpec {
  HoppingKernel distance_kernel;
  HoppingKernel modulation_kernel;
  int size = 0;
  TauApproximant tau;
  Boundary boundary = Boundary::Periodic;
  LimitFlag limit = LimitFlag::None;

  /// Maximum hopping distance of the assembled matrix.
  int range() const;
  bool is_diagonal_aah() const { return distance_kernel.family() == KernelFamily::DiagonalAAH; }
  bool is_nearest_neighbor() const { return range() == 1; }

  /// Effective kernels after applying the limit flag.
  HoppingKernel effective_distance() const;
  HoppingKernel effective_modulation() const;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;

  /// Same model with the roles of a and b exchanged (the dual partner).
  ModelSpec dual() const;
};

// Convenience constructors; tau defaults to the Fibonacci approximant with q = size.
ModelSpec power_law_model(double a, double b, int range, int size,
                          Boundary boundary = Boundary::Periodic);
/// H_p(a, +inf): long-range hopping with a single cosine modulation.
ModelSpec power_law_b_infinity(double a, int range, int size,
                               Boundary boundary = Boundary::Periodic);
/// H_p(+inf, b): nearest-neighbour chain modulated by a sum of cosines.
ModelSpec power_law_a_infinity(double b, int range, int size,
                               Boundary boundary = Boundary::Periodic);
ModelSpec exponential_model(double a, double b, int range, int size,
                            Boundary boundary = Boundary::Periodic);
ModelSpec off_diagonal_aah_model(double a, double b, int size,
                                 Boundary boundary = Boundary::Periodic);
ModelSpec diagonal_aah_model(double hopping, double potential, int size,
                             Boundary boundary = Boundary::Periodic);

/// Upper-triangle entry (row <= col), 0-based storage indices.
struct MatrixEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Nonzero structure of a model: the upper triangle as a list of entries.
struct HamiltonianTerms {
  int size = 0;
  int range = 0;
  Boundary boundary = Boundary::Periodic;
  bool has_diagonal = false;
  std::vector<MatrixEntry> entries;
};

/// Dense real symmetric N x N matrix.
struct HamiltonianMatrix {
  Eigen::MatrixXd values;
  int range = 0;
  Boundary boundary = Boundary::Periodic;
  bool has_diagonal = false;

  int size() const { return static_cast<int>(values.rows()); }
  double operator()(int m, int n) const { return values(m, n); }
};

/// Compact representation of a nearest-neighbour model: diagonal, bonds
/// (n, n+1) for n = 1..N-1, and the periodic wrap bond (N, 1).
struct NearestNeighborForm {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd offdiagonal;
  double wrap = 0.0;
};

/// Enumerates the matrix elements f_{dist(m,n)}(a) F_x(b).
///
/// Site labels m, n run over 1..N. For an unwrapped bond x = m + n; a bond
/// that crosses the periodic boundary uses the image-consistent sum
/// x = m + n + N, which keeps the dual transform exact at finite N.
HamiltonianTerms assemble_terms(const ModelSpec& spec);

HamiltonianMatrix build_hamiltonian(const ModelSpec& spec);
HamiltonianMatrix to_dense(const HamiltonianTerms& terms);

/// Throws InvalidArgument unless the model is nearest-neighbour.
NearestNeighborForm nearest_neighbor_form(const ModelSpec& spec);

/// Bond amplitudes t_0..t_N with t_n on bond (n, n+1); t_0 equals t_N.
Eigen::VectorXd bond_amplitudes(const ModelSpec& spec);

/// One row per line, space separated, 17 significant digits.
void write_dense_text(std::ostream& out, const HamiltonianMatrix& h);
HamiltonianMatrix read_dense_text(std::istream& in);

}  // namespace qpdual
