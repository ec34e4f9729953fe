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

namespace qpdual {

/// Rational approximant p/q of the inverse golden ratio.
///
/// For approximants produced by fibonacci_tau(), p = Fib(u-1) and
/// q = Fib(u). Custom coprime pairs are also accepted (generation 0).
struct TauApproximant {
  std::int64_t p = 1;
  std::int64_t q = 2;
  int generation = 0;

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }

  friend bool operator==(const TauApproximant&, const TauApproximant&) = default;
};

/// Fib(0) = 0, Fib(1) = 1. Throws InvalidArgument when Fib(n) overflows int64.
std::int64_t fibonacci(int n);

/// Consecutive-Fibonacci approximant (Fib(u-1), Fib(u)); requires u >= 3.
TauApproximant fibonacci_tau(int u);

/// Approximant with q equal to a Fibonacci lattice size.
TauApproximant tau_for_size(std::int64_t n);

/// Arbitrary coprime p/q with 0 < p < q.
TauApproximant make_tau(std::int64_t p, std::int64_t q);

/// Fibonacci index u with Fib(u) == n, or -1 when n is not a Fibonacci number.
int fibonacci_index(std::int64_t n);

}  // namespace qpdual
