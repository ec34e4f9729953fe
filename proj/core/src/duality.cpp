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

#include "qpdual/duality.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "qpdual/error.hpp"
#include "qpdual/spectra.hpp"
#include "localize.hpp"

namespace qpdual {

namespace {

// The FFTW planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n) : data_(fftw_alloc_complex(n)) {
    if (!data_) throw ComputationError("fftw: allocation failed");
  }
  ~FftwBuffer() { fftw_free(data_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* get() const { return data_; }

 private:
  fftw_complex* data_;
};

class FftwPlan {
 public:
  explicit FftwPlan(fftw_plan plan) : plan_(plan) {
    if (!plan_) throw ComputationError("fftw: planning failed");
  }
  ~FftwPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  fftw_plan get() const { return plan_; }

 private:
  fftw_plan plan_;
};

FftwPlan plan_1d(int n, fftw_complex* in, fftw_complex* out) {
  std::lock_guard lock(planner_mutex());
  return FftwPlan(fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE));
}

void require_unitary_pair(int size, const TauApproximant& tau) {
  require(size >= 1, "duality: size must be positive");
  require(tau.p > 0 && tau.p < tau.q, "duality: tau must satisfy 0 < p < q");
  require(std::gcd(tau.p, static_cast<std::int64_t>(size)) == 1,
          "duality: gcd(p, N) != 1, the transform is not unitary");
  require(tau.q == size, "duality: the transform requires q = N");
}

std::int64_t mod(std::int64_t v, std::int64_t n) {
  const std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace

DualTransform make_transform(int size, const TauApproximant& tau) {
  require_unitary_pair(size, tau);
  DualTransform t;
  t.size = size;
  t.tau = tau;
  t.matrix.resize(size, size);
  const double norm = 1.0 / std::sqrt(static_cast<double>(size));
  const std::int64_t p = mod(tau.p, size);
  for (int k = 1; k <= size; ++k) {
    for (int m = 1; m <= size; ++m) {
      // Exact phase reduction keeps entries accurate at large N.
      const std::int64_t r = mod(mod(p * m, size) * k, size);
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(r) / size;
      t.matrix(k - 1, m - 1) = std::polar(norm, phase);
    }
  }
  const Eigen::MatrixXcd gram = t.matrix.adjoint() * t.matrix;
  t.unitarity_residual = (gram - Eigen::MatrixXcd::Identity(size, size)).cwiseAbs().maxCoeff();
  return t;
}

Eigen::VectorXcd dual_state(const DualTransform& transform, const Eigen::VectorXcd& state) {
  require(state.size() == transform.size, "dual_state: size mismatch");
  return transform.matrix * state;
}

Eigen::VectorXcd dual_state_fft(const TauApproximant& tau, const Eigen::VectorXcd& state) {
  const int n = static_cast<int>(state.size());
  require_unitary_pair(n, tau);
  FftwBuffer in(static_cast<std::size_t>(n));
  FftwBuffer out(static_cast<std::size_t>(n));
  const FftwPlan plan = plan_1d(n, in.get(), out.get());
  // Label m sits at FFT slot m mod N, so ψ_N goes to slot 0.
  for (int i = 0; i < n; ++i) {
    const int slot = (i + 1) % n;
    in.get()[slot][0] = state(i).real();
    in.get()[slot][1] = state(i).imag();
  }
  fftw_execute(plan.get());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd result(n);
  const std::int64_t p = mod(tau.p, n);
  for (int k = 1; k <= n; ++k) {
    const auto slot = static_cast<std::size_t>(mod(p * k, n));
    result(k - 1) = norm * std::complex<double>(out.get()[slot][0], out.get()[slot][1]);
  }
  return result;
}

namespace {

/// Plain DFT of each column, scaled by 1/sqrt(N).
Eigen::MatrixXcd fourier_columns(const Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(vectors.rows());
  Eigen::MatrixXcd result(n, vectors.cols());
  if (vectors.cols() == 0) return result;
  require(n >= 1, "dual_ipr: empty vectors");
  FftwBuffer in(static_cast<std::size_t>(n));
  FftwBuffer out(static_cast<std::size_t>(n));
  const FftwPlan plan = plan_1d(n, in.get(), out.get());
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (int i = 0; i < n; ++i) {
      in.get()[i][0] = vectors(i, j);
      in.get()[i][1] = 0.0;
    }
    fftw_execute(plan.get());
    for (int i = 0; i < n; ++i) result(i, j) = norm * std::complex<double>(out.get()[i][0], out.get()[i][1]);
  }
  return result;
}

Eigen::VectorXd column_ipr(const Eigen::MatrixXcd& w) {
  Eigen::VectorXd ipr(w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) ipr(j) = w.col(j).cwiseAbs2().array().square().sum();
  return ipr;
}

}  // namespace

Eigen::VectorXd dual_ipr(const Eigen::MatrixXd& vectors) {
  // Blocks of 64 columns bound the complex temporary.
  Eigen::VectorXd ipr(vectors.cols());
  for (Eigen::Index j0 = 0; j0 < vectors.cols(); j0 += 64) {
    const Eigen::Index cols = std::min<Eigen::Index>(64, vectors.cols() - j0);
    ipr.segment(j0, cols) = column_ipr(fourier_columns(vectors.middleCols(j0, cols)));
  }
  return ipr;
}

Eigen::VectorXd dual_ipr_localized(const Eigen::MatrixXd& cluster) {
  Eigen::MatrixXcd w = fourier_columns(cluster);
  detail::localize_columns(w);
  Eigen::VectorXd ipr = column_ipr(w);
  std::sort(ipr.data(), ipr.data() + ipr.size());
  return ipr;
}

Eigen::MatrixXcd conjugate(const HamiltonianMatrix& h, const TauApproximant& tau) {
  const int n = h.size();
  require_unitary_pair(n, tau);
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  FftwBuffer buffer(total);
  FftwPlan plan = [&] {
    std::lock_guard lock(planner_mutex());
    return FftwPlan(fftw_plan_dft_2d(n, n, buffer.get(), buffer.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }();
  // D(j, l) = sum_{m, m'} exp(-2 i pi (j m + l m') / N) H(m, m'), row-major.
  for (int i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>((i + 1) % n) * static_cast<std::size_t>(n);
    for (int k = 0; k < n; ++k) {
      fftw_complex& c = buffer.get()[row + static_cast<std::size_t>((k + 1) % n)];
      c[0] = h.values(i, k);
      c[1] = 0.0;
    }
  }
  fftw_execute(plan.get());
  // (U H U^dagger)(k, k') = D(p k, -p k') / N.
  const std::int64_t p = mod(tau.p, n);
  Eigen::MatrixXcd result(n, n);
  const double norm = 1.0 / n;
  for (int k = 1; k <= n; ++k) {
    const auto row = static_cast<std::size_t>(mod(p * k, n)) * static_cast<std::size_t>(n);
    for (int kk = 1; kk <= n; ++kk) {
      const fftw_complex& c = buffer.get()[row + static_cast<std::size_t>(mod(-p * kk, n))];
      result(k - 1, kk - 1) = norm * std::complex<double>(c[0], c[1]);
    }
  }
  return result;
}

double parameter_a(const ModelSpec& spec) {
  if (spec.limit == LimitFlag::AInfinity) return std::numeric_limits<double>::infinity();
  return spec.distance_kernel.parameter();
}

double parameter_b(const ModelSpec& spec) {
  if (spec.limit == LimitFlag::BInfinity) return std::numeric_limits<double>::infinity();
  return spec.modulation_kernel.parameter();
}

bool is_self_dual(const ModelSpec& spec) {
  if (spec.is_diagonal_aah()) return false;
  const HoppingKernel a = spec.effective_distance();
  const HoppingKernel b = spec.effective_modulation();
  if (a.family() != b.family() || a.range() != b.range()) return false;
  for (int s = 1; s <= a.range(); ++s) {
    if (std::abs(a.weight(s) - b.weight(s)) > 1e-12 * std::max(1.0, std::abs(a.weight(s)))) return false;
  }
  return true;
}

DualityReport check_duality(const ModelSpec& spec_a, const ModelSpec& spec_b, const DualityOptions& options) {
  spec_a.validate();
  spec_b.validate();
  require(spec_a.size == spec_b.size, "check_duality: N differs between the two specs");
  require(spec_a.tau == spec_b.tau, "check_duality: tau differs between the two specs");
  // Compare the declared d; a limit flag can make one kernel collapse to range 1.
  const auto declared = [](const ModelSpec& s) {
    return std::max(s.distance_kernel.range(), s.modulation_kernel.range());
  };
  require(declared(spec_a) == declared(spec_b), "check_duality: range differs between the two specs");
  require(spec_a.boundary == Boundary::Periodic && spec_b.boundary == Boundary::Periodic,
          "check_duality: only periodic boundaries are supported");
  require(!spec_a.is_diagonal_aah() && !spec_b.is_diagonal_aah(),
          "check_duality: the diagonal AAH model is not part of the dual family");
  require_unitary_pair(spec_a.size, spec_a.tau);

  DualityReport report;
  report.size = spec_a.size;
  report.tau = spec_a.tau;
  report.a = parameter_a(spec_a);
  report.b = parameter_b(spec_a);
  report.range = spec_a.range();
  report.self_dual = is_self_dual(spec_a);

  const Eigen::VectorXd ea = solve_values(spec_a);
  const Eigen::VectorXd eb = solve_values(spec_b);
  const double bandwidth = std::max(ea(ea.size() - 1) - ea(0), eb(eb.size() - 1) - eb(0));
  const double diff = (ea - eb).cwiseAbs().maxCoeff();
  report.spectral_deviation = bandwidth > 0.0 ? diff / bandwidth : diff;

  if (spec_a.size <= options.conjugation_cap) {
    const Eigen::MatrixXcd c = conjugate(build_hamiltonian(spec_a), spec_a.tau);
    const HamiltonianMatrix hb = build_hamiltonian(spec_b);
    report.conjugation_residual = (c - hb.values.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
  } else {
    report.conjugation_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

namespace {

nlohmann::json number_or_label(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_from(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("duality report: unexpected value '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string to_json(const DualityReport& r) {
  nlohmann::json j;
  j["N"] = r.size;
  j["p"] = r.tau.p;
  j["q"] = r.tau.q;
  j["a"] = number_or_label(r.a);
  j["b"] = number_or_label(r.b);
  j["d"] = r.range;
  j["spectral_deviation"] = r.spectral_deviation;
  j["conjugation_residual"] = number_or_label(r.conjugation_residual);
  j["self_dual"] = r.self_dual;
  return j.dump(2);
}

DualityReport duality_report_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    DualityReport r;
    r.size = j.at("N").get<int>();
    r.tau = make_tau(j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>());
    r.a = number_from(j.at("a"));
    r.b = number_from(j.at("b"));
    r.range = j.at("d").get<int>();
    r.spectral_deviation = j.at("spectral_deviation").get<double>();
    r.conjugation_residual = number_from(j.at("conjugation_residual"));
    r.self_dual = j.value("self_dual", false);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("duality report: ") + e.what());
  }
}

}  // namespace qpdual
