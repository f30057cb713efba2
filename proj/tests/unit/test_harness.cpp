// Copyright 2026 The gnlopt Authors
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

#include "gnlopt/errors.hpp"
#include "gnlopt/harness.hpp"

namespace fs = std::filesystem;

namespace gnlopt {
namespace {

Instance small(InstanceKind kind, std::uint64_t seed, int m = 6) {
  GenSpec s;
  s.kind = kind;
  s.m = m;
  s.seed = seed;
  s.levels = 2;
  return generate(s);
}

RunOptions quiet() {
  RunOptions o;
  o.timing = false;
  o.oracle_grid = 11;
  o.oracle_starts = 2;
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

TEST(Harness, RecordFieldsAndCsvShape) {
  const Instance in = small(InstanceKind::kGnl, 1);
  const RunRecord lc = run_method(in, "a", "logconvex", quiet());
  const RunRecord orc = run_method(in, "a", "oracle", quiet());
  EXPECT_EQ(orc.method, "oracle_enum");
  ASSERT_TRUE(lc.has_objective);
  EXPECT_NEAR(lc.objective, orc.objective, 1e-6 * std::max(1.0, orc.objective));
  EXPECT_EQ(lc.termination, "optimal");
  EXPECT_EQ(lc.seconds, 0.0);
  const std::string row = csv_row(lc);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 11);
  EXPECT_EQ(lines(to_csv({lc}))[0], std::string(kCsvHeader));
}

TEST(Harness, KindMismatchBecomesErrorRow) {
  const Instance in = small(InstanceKind::kGnl, 1);
  const RunRecord r = run_method(in, "a", "jap_dp", quiet());
  EXPECT_FALSE(r.has_objective);
  EXPECT_EQ(r.termination.rfind("error", 0), 0u);
  EXPECT_EQ(exit_code(r), 4);
  EXPECT_THROW(run_method(in, "a", "nope", quiet()), InvalidArgument);
}

TEST(Harness, ContinuousRowsHaveNoBound) {
  const Instance in = small(InstanceKind::kJapCp, 1, 3);
  const RunRecord r = run_method(in, "c", "jap_cp", quiet());
  EXPECT_EQ(r.termination, "heuristic");
  const auto row = csv_row(r);
  EXPECT_NE(row.find(",,"), std::string::npos);
  EXPECT_EQ(exit_code(r), 0);
}

TEST(Harness, BenchSortedAndDeterministic) {
  std::vector<std::pair<std::string, Instance>> ins{
      {"b", small(InstanceKind::kGnl, 2)}, {"a", small(InstanceKind::kGnl, 3)}};
  const auto rows = run_bench(ins, {"logconvex", "bisection"}, quiet(), 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].instance, "a");
  EXPECT_EQ(rows[0].method, "bisection");
  EXPECT_EQ(rows[3].instance, "b");
  EXPECT_EQ(rows[3].method, "logconvex");
  EXPECT_EQ(to_csv(rows), to_csv(run_bench(ins, {"logconvex", "bisection"}, quiet(), 1)));
  // Oracle alone brings the default methods along.
  EXPECT_EQ(run_bench(ins, {"oracle"}, quiet()).size(), 6u);
}

TEST(Harness, ExitCodes) {
  RunRecord r;
  r.termination = "optimal";
  EXPECT_EQ(exit_code(r), 0);
  r.termination = "infeasible";
  EXPECT_EQ(exit_code(r), 2);
  r.termination = "time_limit";
  EXPECT_EQ(exit_code(r), 3);
  r.termination = "error: boom";
  EXPECT_EQ(exit_code(r), 4);
}

TEST(Harness, SeedOverride) {
  setenv("GNLOPT_SEED", "123", 1);
  EXPECT_EQ(seed_from_env(), 123u);
  setenv("GNLOPT_SEED", "12x", 1);
  EXPECT_FALSE(seed_from_env().has_value());
  unsetenv("GNLOPT_SEED");
  EXPECT_FALSE(seed_from_env().has_value());
}

// Command-line tool, run as a subprocess.
class Tool : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gnlopt_tool_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, std::string* out = nullptr) {
    const std::string cmd = std::string(GNLOPT_TOOL_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (out) *out = read_file(dir_ / "stdout.txt");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Tool, GenIsDeterministic) {
  ASSERT_EQ(run("gen --kind gnl --m 10 --nests 2 --seed 7 -o " + path("a.json")), 0);
  ASSERT_EQ(run("gen --kind gnl --m 10 --nests 2 --seed 7 -o " + path("b.json")), 0);
  EXPECT_TRUE(fs::exists(path("a.json")));
  EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
  EXPECT_EQ(run("gen --kind bogus -o " + path("c.json")), 4);
  EXPECT_EQ(run("frobnicate"), 4);
}

TEST_F(Tool, SolveMatchesOracleAndRecords) {
  ASSERT_EQ(run("gen --kind gnl --m 8 --nests 3 --seed 4 -o " + path("t.json")), 0);
  std::string out;
  ASSERT_EQ(run("solve " + path("t.json") + " --method logconvex --record " + path("r.csv"),
                &out),
            0);
  EXPECT_NE(out.find("objective"), std::string::npos);
  ASSERT_EQ(run("solve " + path("t.json") + " --method bisection --tol 1e-6 --record " +
                path("r.csv")),
            0);
  ASSERT_EQ(run("solve " + path("t.json") + " --method oracle --record " + path("r.csv")), 0);
  const auto rows = lines(read_file(path("r.csv")));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], std::string(kCsvHeader));
  auto objective = [](const std::string& row) {
    std::stringstream ss(row);
    std::string f;
    std::getline(ss, f, ',');
    std::getline(ss, f, ',');
    std::getline(ss, f, ',');
    return std::stod(f);
  };
  const double o = objective(rows[3]);
  EXPECT_NEAR(objective(rows[1]), o, 1e-6 * std::max(1.0, o));
  EXPECT_NEAR(objective(rows[2]), o, 1e-6 * std::max(1.0, o));
}

TEST_F(Tool, TimeLimitReportsHonestGap) {
  ASSERT_EQ(run("gen --kind gnl --m 60 --nests 6 --seed 1 -o " + path("big.json")), 0);
  std::string out;
  const int code =
      run("solve " + path("big.json") + " --method logconvex --time-limit 0.001", &out);
  EXPECT_TRUE(code == 3 || code == 0) << out;
  if (code == 3) {
    EXPECT_NE(out.find("time_limit"), std::string::npos);
    EXPECT_EQ(out.find("gap 0.000e+00"), std::string::npos);
  }
}

TEST_F(Tool, InfeasibleExitsTwo) {
  Instance in = small(InstanceKind::kGnl, 1, 4);
  in.constraints.a = Eigen::MatrixXd(2, 4);
  in.constraints.a.row(0).setOnes();
  in.constraints.a.row(1).setConstant(-1.0);
  in.constraints.b = Eigen::Vector2d(1.0, -2.0);
  save(in, path("inf.json"));
  std::string out;
  EXPECT_EQ(run("solve " + path("inf.json") + " --method logconvex", &out), 2);
  EXPECT_NE(out.find("infeasible"), std::string::npos);
}

TEST_F(Tool, BenchTableAndRerun) {
  fs::create_directories(dir_ / "set");
  for (int s : {1, 2})
    ASSERT_EQ(run("gen --kind gnl --m 6 --seed " + std::to_string(s) + " -o " +
                  (dir_ / "set" / ("i" + std::to_string(s) + ".json")).string()),
              0);
  const std::string args = "bench " + (dir_ / "set").string() +
                           " --methods bisection,logconvex --no-timing --csv ";
  ASSERT_EQ(run(args + path("one.csv")), 0);
  ASSERT_EQ(run(args + path("two.csv") + " --jobs 2"), 0);
  const auto rows = lines(read_file(path("one.csv")));
  EXPECT_EQ(rows.size(), 5u);
  EXPECT_EQ(read_file(path("one.csv")), read_file(path("two.csv")));
  ASSERT_EQ(run(args + path("o.csv") + " --with-oracle"), 0);
  const std::string with = read_file(path("o.csv"));
  EXPECT_NE(with.find(",oracle_enum,"), std::string::npos);
  EXPECT_EQ(lines(with).size(), 7u);
}

TEST_F(Tool, SeedVariableOverridesRecords) {
  ASSERT_EQ(run("gen --kind gnl --m 5 --seed 3 -o " + path("s.json")), 0);
  ASSERT_EQ(run("solve " + path("s.json") + " --record " + path("s.csv")), 0);
  setenv("GNLOPT_SEED", "99", 1);
  ASSERT_EQ(run("solve " + path("s.json") + " --record " + path("s.csv")), 0);
  unsetenv("GNLOPT_SEED");
  const auto rows = lines(read_file(path("s.csv")));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find(",3,"), std::string::npos);
  EXPECT_NE(rows[2].find(",99,"), std::string::npos);
}

}  // namespace
}  // namespace gnlopt
