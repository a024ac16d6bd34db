// Copyright 2026 The qdds Authors.
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

// Drives the built qdds binary through the shell.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome qdds(const std::string& args) {
  const std::string cmd = std::string(QDDS_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) o.out += buf;
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "qdds_cli_test" / name;
  fs::remove_all(p);
  return p;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(qdds("").code, 1);
  EXPECT_EQ(qdds("bench --function ackley").code, 1);
  EXPECT_EQ(qdds("bench --mode batch").code, 1);
  EXPECT_EQ(qdds("bench --pop 0 --emit none").code, 1);
  EXPECT_EQ(qdds("presets run nope").code, 1);
  EXPECT_EQ(qdds("--help").code, 0);
}

TEST(Cli, BenchWritesArtifacts) {
  const auto dir = scratch("bench");
  const auto o = qdds("bench --function rosenbrock --dim 3 --pop 5 --iters 30 "
                      "--trials 2 --seed 4 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("rosenbrock"), std::string::npos);
  for (const char* f : {"trace.csv", "convergence.svg", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
}

TEST(Cli, EmitSubset) {
  const auto dir = scratch("subset");
  const auto o = qdds("bench --function sphere --dim 2 --pop 3 --iters 10 "
                      "--trials 1 --emit report --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "trace.csv"));
  EXPECT_FALSE(fs::exists(dir / "convergence.svg"));
}

TEST(Cli, ConfigFileWithOverride) {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json")
      << R"({"function": "griewank", "dim": 3, "pop": 4, "iters": 12,)"
      << R"( "trials": 1, "emit": ["report"]})";
  const auto o = qdds("bench --config " + (dir / "c.json").string() +
                      " --dim 2 --out " + (dir / "out").string());
  ASSERT_EQ(o.code, 0) << o.out;
  std::ifstream in(dir / "out" / "report.json");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("\"dim\": 2"), std::string::npos);
  EXPECT_NE(ss.str().find("\"griewank\""), std::string::npos);
}

TEST(Cli, FirDesign) {
  const auto dir = scratch("fir");
  const auto o = qdds("fir --order 10 --pop 20 --iters 30 --trials 1 --out " +
                      dir.string());
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "coefficients.csv"));
  EXPECT_TRUE(fs::exists(dir / "response.svg"));
  EXPECT_EQ(qdds("fir --order 9 --pop 5 --iters 5 --emit none").code, 1);
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(qdds("bench --function sphere --dim 2 --pop 3 --iters 5 --trials 1 "
                 "--out " + (dir / "file" / "sub").string())
                .code,
            2);
}

TEST(Cli, ValidateExitCodeTracksFailures) {
  const auto o = qdds("validate --round-trips 2000 --probes 5 --quad-points 20000");
  const bool any_fail = o.out.find(" FAIL ") != std::string::npos;
  EXPECT_NE(o.out.find(" PASS "), std::string::npos) << o.out;
  EXPECT_EQ(o.code, any_fail ? 3 : 0) << o.out;
}

TEST(Cli, PresetsList) {
  const auto o = qdds("presets list");
  ASSERT_EQ(o.code, 0);
  std::size_t lines = 0;
  for (char c : o.out) lines += c == '\n';
  EXPECT_EQ(lines, 38u);
  EXPECT_NE(o.out.find("fir10-p1000"), std::string::npos);
}

}  // namespace
