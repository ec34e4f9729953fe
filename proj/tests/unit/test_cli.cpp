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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpdual/io.hpp"

namespace qpdual {
namespace {

namespace fs = std::filesystem;

#ifdef QPDUAL_CLI_PATH

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qpdual_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" + std::string(QPDUAL_CLI_PATH) + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string slurp(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, SpectrumWritesOneRowPerSite) {
  ASSERT_EQ(run("spectrum --family power-law --a 3 --b 1 --d 2 --fib-u 12 --out " + path("s.csv")), 0)
      << slurp("stderr.txt");
  std::ifstream in(path("s.csv"));
  EXPECT_EQ(read_states_csv(in).size(), 144u);
}

TEST_F(Cli, OffDiagonalAahIsAllCritical) {
  ASSERT_EQ(run("spectrum --family offdiag-aah --fib-u 16 --out " + path("o.csv")), 0) << slurp("stderr.txt");
  std::ifstream in(path("o.csv"));
  const auto rows = read_states_csv(in);
  ASSERT_EQ(rows.size(), 987u);
  for (const StateRow& r : rows) EXPECT_EQ(r.state.label, Phase::Critical);
}

TEST_F(Cli, MissingParameterIsUsageError) {
  EXPECT_EQ(run("spectrum --family power-law --b 1 --d 2 --fib-u 12"), 2);
  EXPECT_NE(slurp("stderr.txt").find("--a"), std::string::npos);
  EXPECT_EQ(run("spectrum --a 3 --b 1 --d 2 --fib-u 12"), 2);
  EXPECT_EQ(run("spectrum --family power-law --a 3 --b 1 --d 2 --fib-u 12 --bogus"), 2);
  EXPECT_EQ(run(""), 2);
}

TEST_F(Cli, NonCoprimeTauIsUsageError) {
  EXPECT_EQ(run("duality --family power-law --a 3 --b 1 --d 2 --size 144 --tau-p 12"), 2);
  EXPECT_EQ(run("spectrum --family power-law --a 3 --b 1 --d 2 --size 100"), 2);
}

TEST_F(Cli, DualityReport) {
  ASSERT_EQ(run("duality --family power-law --a 2 --b 2 --d 2 --fib-u 12 --out " + path("d.json")), 0)
      << slurp("stderr.txt");
  const std::string json = slurp("d.json");
  EXPECT_NE(json.find("\"self_dual\": true"), std::string::npos) << json;
}

TEST_F(Cli, LyapunovAndRydbergPipelines) {
  ASSERT_EQ(run("le --family dual-power --a 3 --d 2 --fib-u 12 --out " + path("le.csv")), 0) << slurp("stderr.txt");
  std::ifstream le(path("le.csv"));
  EXPECT_EQ(read_lyapunov_csv(le).size(), 144u);
  EXPECT_EQ(run("le --family power-law --a 3 --b 1 --d 2 --fib-u 12"), 2);
  ASSERT_EQ(run("rydberg --d 3 --fib-u 12 --compare 2..4 --out " + path("r.json")), 0) << slurp("stderr.txt");
  EXPECT_NE(slurp("r.json").find("\"d\""), std::string::npos);
  ASSERT_EQ(run("rydberg --d 3 --fib-u 9 --quench-site 5 --times 20 --populations " + path("p.csv") +
                " --summary " + path("q.csv")),
            0)
      << slurp("stderr.txt");
  std::ifstream pop(path("p.csv")), sum(path("q.csv"));
  EXPECT_EQ(read_quench_csv(pop, sum).times.size(), 20);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ASSERT_EQ(run("spectrum --family offdiag-aah --fib-u 10 --out rel.csv", "QPDUAL_OUTPUT_DIR=\"" + dir_.string() + "\""),
            0)
      << slurp("stderr.txt");
  EXPECT_TRUE(fs::exists(dir_ / "rel.csv"));
}

TEST_F(Cli, SweepAndScaling) {
  std::ofstream(path("t.plan")) << "family = power-law\nmodel = a=3 b=inf d=2\nsizes = 144, 233, 377\n"
                                   "diagnostics = mfd\noutput = "
                                << path("sw") << "\n";
  ASSERT_EQ(run("sweep --quiet --plan " + path("t.plan")), 0) << slurp("stderr.txt");
  EXPECT_TRUE(fs::exists(dir_ / "sw" / "manifest.json"));
  ASSERT_EQ(run("scaling --mfd " + path("sw/mfd.csv") + " --out " + path("fit.json")), 0) << slurp("stderr.txt");
  EXPECT_NE(slurp("fit.json").find("intercept"), std::string::npos);
  std::ofstream(path("bad.plan")) << "family = power-law\ncolour = red\n";
  EXPECT_EQ(run("sweep --plan " + path("bad.plan")), 2);
}

#else

TEST(Cli, SkippedWithoutTool) { GTEST_SKIP() << "qpdual tool not built"; }

#endif

}  // namespace
}  // namespace qpdual
