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

#include "qpdual/kernel.hpp"

#include <cmath>
#include <numbers>

#include "qpdual/error.hpp"

namespace qpdual {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::PowerLaw: return "power-law";
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::OffDiagonalAAH: return "offdiag-aah";
    case KernelFamily::DiagonalAAH: return "diag-aah";
    case KernelFamily::CustomTable: return "custom";
  }
  return "unknown";
}

HoppingKernel::HoppingKernel(KernelFamily family, double parameter, double potential,
                             std::vector<double> weights)
    : family_(family), parameter_(parameter), potential_(potential), weights_(std::move(weights)) {
  for (double w : weights_) require(std::isfinite(w), "HoppingKernel: non-finite weight");
}

HoppingKernel HoppingKernel::power_law(double exponent, int range) {
  require(range >= 1, "power_law: range must be >= 1");
  require(std::isfinite(exponent), "power_law: exponent must be finite (use a limit flag for infinity)");
  std::vector<double> w(static_cast<std::size_t>(range));
  for (int s = 1; s <= range; ++s) w[static_cast<std::size_t>(s - 1)] = std::pow(double(s), -exponent);
  return HoppingKernel(KernelFamily::PowerLaw, exponent, 0.0, std::move(w));
}

HoppingKernel HoppingKernel::exponential(double rate, int range) {
  require(range >= 1, "exponential: range must be >= 1");
  require(std::isfinite(rate), "exponential: rate must be finite");
  std::vector<double> w(static_cast<std::size_t>(range));
  for (int s = 1; s <= range; ++s) w[static_cast<std::size_t>(s - 1)] = std::exp(-rate * (s - 1));
  return HoppingKernel(KernelFamily::Exponential, rate, 0.0, std::move(w));
}

HoppingKernel HoppingKernel::off_diagonal_aah(double amplitude) {
  return HoppingKernel(KernelFamily::OffDiagonalAAH, amplitude, 0.0, {amplitude});
}

HoppingKernel HoppingKernel::diagonal_aah(double hopping, double potential) {
  require(std::isfinite(potential), "diagonal_aah: potential must be finite");
  return HoppingKernel(KernelFamily::DiagonalAAH, hopping, potential, {hopping});
}

HoppingKernel HoppingKernel::custom(std::vector<double> values) {
  require(!values.empty(), "custom kernel: at least one value f_1 is required");
  return HoppingKernel(KernelFamily::CustomTable, 0.0, 0.0, std::move(values));
}

HoppingKernel HoppingKernel::nearest_only() const {
  return HoppingKernel(family_, parameter_, potential_, {weight(1)});
}

double HoppingKernel::absolute_sum() const {
  double sum = 0.0;
  for (double w : weights_) sum += std::abs(w);
  return sum;
}

double cos_pi_rational(std::int64_t p, std::int64_t k, std::int64_t q) {
  // Reduce both factors first so the product fits in 64 bits.
  require(q > 0 && q < (std::int64_t{1} << 30), "cos_pi_rational: denominator out of range");
  const std::int64_t period = 2 * q;
  const auto reduce = [period](std::int64_t v) {
    const std::int64_t r = v % period;
    return r < 0 ? r + period : r;
  };
  std::int64_t r = reduce(reduce(p) * reduce(k));
  // Fold into the first quadrant so zeros and unit values come out exact.
  if (r > q) r = period - r;
  double sign = 1.0;
  if (2 * r > q) {
    sign = -1.0;
    r = q - r;
  }
  const double qd = static_cast<double>(q);
  if (4 * r > q) return sign * std::sin(std::numbers::pi * static_cast<double>(q - 2 * r) / (2.0 * qd));
  return sign * std::cos(std::numbers::pi * static_cast<double>(r) / qd);
}

double modulation_F(const HoppingKernel& kernel, const TauApproximant& tau, std::int64_t x) {
  double sum = 0.0;
  for (int s = 1; s <= kernel.range(); ++s) {
    const double f = kernel.weight(s);
    if (f != 0.0) sum += f * cos_pi_rational(tau.p, static_cast<std::int64_t>(s) * x, tau.q);
  }
  return sum;
}

}  // namespace qpdual
