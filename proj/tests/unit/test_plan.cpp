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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "qpdual/error.hpp"
#include "qpdual/plan.hpp"

namespace qpdual {
namespace {

SweepPlan parse(const std::string& text) {
  std::istringstream in(text);
  return parse_plan(in, "test.plan");
}

TEST(Plan, MirrorSweepGrammar) {
  const SweepPlan p = parse(
      "# comment line\n"
      "family = power-law\n"
      "model = d=2\n"
      "axes = a = 0.5:3.5:0.05; b = 4 - a   # trailing comment\n"
      "sizes = 2584\n"
      "diagnostics = states, edges\n"
      "output = out\n"
      "concurrency = 3\n"
      "memory = 512M\n");
  EXPECT_EQ(p.base.family, "power-law");
  EXPECT_EQ(p.base.d, 2);
  ASSERT_EQ(p.axes.size(), 1u);
  ASSERT_EQ(p.axes[0].values.size(), 61u);
  EXPECT_EQ(p.axes[0].values[3], 0.65);
  EXPECT_EQ(p.axes[0].values.back(), 3.5);
  ASSERT_EQ(p.constraints.size(), 1u);
  EXPECT_EQ(p.concurrency, 3);
  EXPECT_EQ(p.memory_budget, std::size_t{512} << 20);
  const auto grid = expand_grid(p);
  ASSERT_EQ(grid.size(), 61u);
  for (const GridPoint& g : grid) EXPECT_NEAR(g.params.a + g.params.b, 4.0, 1e-12);
  EXPECT_EQ(grid[40].index, 40);
}

TEST(Plan, ListsIntegerRangesAndInfinity) {
  const SweepPlan p = parse(
      "family = power-law\nmodel = b=inf\naxes = a = {2, 3}; d = 2..4\nsizes = 89, 144\ndiagnostics = mfd\n");
  EXPECT_TRUE(std::isinf(p.base.b));
  const auto grid = expand_grid(p);
  ASSERT_EQ(grid.size(), 12u);
  // sizes fastest, then the last axis
  EXPECT_EQ(grid[0].size, 89);
  EXPECT_EQ(grid[1].size, 144);
  EXPECT_EQ(grid[2].params.d, 3);
  EXPECT_EQ(grid[6].params.a, 3.0);
}

TEST(Plan, RejectsMalformedInput) {
  const std::string ok = "family = power-law\nmodel = a=3 b=1 d=2\nsizes = 89\ndiagnostics = states\n";
  EXPECT_NO_THROW(parse(ok));
  EXPECT_THROW(parse(ok + "colour = blue\n"), InvalidArgument);
  EXPECT_THROW(parse(ok + "sizes = 144\n"), InvalidArgument);
  EXPECT_THROW(parse("model = a=3 b=1 d=2\nsizes = 89\ndiagnostics = states\n"), InvalidArgument);
  EXPECT_THROW(parse("family = power-law\nmodel = a=3 b=1 d=2\nsizes = 90\ndiagnostics = states\n"), InvalidArgument);
  EXPECT_THROW(parse("family = power-law\nmodel = a=3 b=1 d=2\nsizes = 89\ndiagnostics = colour\n"), InvalidArgument);
  EXPECT_THROW(parse("family = power-law\nmodel = a=3 b=1 d=50\nsizes = 89\ndiagnostics = states\n"), InvalidArgument);
  EXPECT_THROW(parse("family = power-law\nmodel = a=3 b=1 d=2\naxes = a = 1:2:0.3\nsizes = 89\ndiagnostics = states\n"),
               InvalidArgument);
  EXPECT_THROW(parse("family = power-law\nmodel = a=3 d=2\naxes = b = 4 - a\nsizes = 89\ndiagnostics = states\n"),
               InvalidArgument);
  EXPECT_THROW(parse("family = teapot\nsizes = 89\ndiagnostics = states\n"), InvalidArgument);
  EXPECT_THROW(parse("just words\n"), InvalidArgument);
}

TEST(Plan, ErrorsCarryLineNumbers) {
  try {
    parse("family = power-law\nmodel = a=3 b=1 d=2\nbogus = 1\n");
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("test.plan:3"), std::string::npos) << e.what();
  }
}

TEST(Plan, ModelFactories) {
  ModelParams m;
  m.family = "dual-power";
  m.a = 3.0;
  m.d = 2;
  EXPECT_EQ(make_model(m, 89).limit, LimitFlag::AInfinity);
  m.family = "power-law";
  m.b = INFINITY;
  EXPECT_EQ(make_model(m, 89).limit, LimitFlag::BInfinity);
  m.a = INFINITY;
  EXPECT_THROW(make_model(m, 89), InvalidArgument);
  m.family = "rydberg";
  m.A = 2.0;
  EXPECT_TRUE(is_rydberg(m));
  EXPECT_EQ(make_rydberg(m, 89).scale, 2.0);
  m.family = "diag-aah";
  m.p = 34;
  EXPECT_EQ(make_model(m, 89).tau.p, 34);
  EXPECT_THROW(set_param(m, "zeta", 1.0), InvalidArgument);
}

TEST(Plan, ShippedPlansParse) {
  const std::filesystem::path dir = std::filesystem::path(QPDUAL_SOURCE_DIR) / "plans";
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".plan") continue;
    EXPECT_NO_THROW(read_plan_file(entry.path().string())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 10);
}

}  // namespace
}  // namespace qpdual
