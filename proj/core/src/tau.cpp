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

#include "qpdual/tau.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "qpdual/error.hpp"

namespace qpdual {

std::int64_t fibonacci(int n) {
  require(n >= 0, "fibonacci: negative index " + std::to_string(n));
  std::int64_t a = 0;
  std::int64_t b = 1;
  for (int i = 0; i < n; ++i) {
    if (b > std::numeric_limits<std::int64_t>::max() - a) {
      throw InvalidArgument("fibonacci: Fib(" + std::to_string(n) + ") overflows int64");
    }
    const std::int64_t next = a + b;
    a = b;
    b = next;
  }
  return a;
}

TauApproximant fibonacci_tau(int u) {
  require(u >= 3, "fibonacci_tau: generation must be >= 3, got " + std::to_string(u));
  // Fib(u) is computed first so overflow is reported for the denominator.
  const std::int64_t q = fibonacci(u);
  const std::int64_t p = fibonacci(u - 1);
  return TauApproximant{p, q, u};
}

int fibonacci_index(std::int64_t n) {
  if (n < 1) return -1;
  std::int64_t a = 0;
  std::int64_t b = 1;
  for (int i = 1; i < 92; ++i) {
    // Invariant: b == Fib(i).
    if (b == n) return i == 1 ? 2 : i;
    if (b > n) return -1;
    const std::int64_t next = a + b;
    a = b;
    b = next;
  }
  return -1;
}

TauApproximant tau_for_size(std::int64_t n) {
  const int u = fibonacci_index(n);
  require(u >= 3, "tau_for_size: " + std::to_string(n) + " is not a Fibonacci number >= 2");
  return fibonacci_tau(u);
}

TauApproximant make_tau(std::int64_t p, std::int64_t q) {
  require(q > 0 && p > 0 && p < q,
          "make_tau: need 0 < p < q, got " + std::to_string(p) + "/" + std::to_string(q));
  require(std::gcd(p, q) == 1,
          "make_tau: p/q must be coprime, got " + std::to_string(p) + "/" + std::to_string(q));
  TauApproximant tau{p, q, 0};
  // Recognise consecutive Fibonacci pairs so the generation survives round trips.
  const int u = fibonacci_index(q);
  if (u >= 3 && fibonacci(u - 1) == p) tau.generation = u;
  return tau;
}

}  // namespace qpdual
