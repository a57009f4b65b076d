#include "fwipm/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fwipm/problem.h"

namespace fwipm {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fwipm_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string Slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateIsReproducible) {
  const CliRun a = Cli({"generate", "--n", "6", "--m", "3", "--seed", "7"});
  const CliRun b = Cli({"generate", "--n", "6", "--m", "3", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const SdpProblem p = parse_problem(a.out);
  EXPECT_EQ(p.n, 6);
  EXPECT_EQ(p.m, 3);
  EXPECT_TRUE(validate_problem(p).findings.empty());
  EXPECT_EQ(a.out, write_problem(generate_instance(6, 3, 1.0, 7)));
}

TEST_F(CliTest, GenerateRejectsBadDimensions) {
  EXPECT_EQ(Cli({"generate", "--n", "0", "--m", "2"}).code, 1);
  EXPECT_EQ(Cli({"generate", "--n", "4"}).code, 1);
  EXPECT_EQ(Cli({"generate", "--n", "4", "--m", "2", "--eta0", "0"}).code, 1);
}

TEST_F(CliTest, SolveWritesOptimalReport) {
  const std::string problem = Path("p.json");
  ASSERT_EQ(Cli({"generate", "--n", "4", "--m", "2", "--seed", "1", "--output", problem}).code,
            0);
  const std::string report = Path("r.json");
  const std::string trace = Path("t.jsonl");
  const CliRun r = Cli({"solve", problem, "--k", "2", "--threads", "1", "--output", report,
                     "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;
  const SolutionReport rep = parse_report(Slurp(report));
  EXPECT_EQ(rep.status, SolveStatus::kOptimal);
  ASSERT_TRUE(rep.gap.has_value());
  EXPECT_TRUE(rep.gap_valid);
  EXPECT_LE(*rep.gap, 1e-6);
  const std::string lines = Slurp(trace);
  EXPECT_EQ(static_cast<int>(std::count(lines.begin(), lines.end(), '\n')), rep.outer_iters);
}

TEST_F(CliTest, SolveFromStdin) {
  const std::string text = write_problem(generate_instance(4, 2, 1.0, 2));
  const CliRun r = Cli({"solve", "-", "--threads", "1"}, text);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_report(r.out).status, SolveStatus::kOptimal);
}

TEST_F(CliTest, SolveIsIdenticalAcrossThreadCounts) {
  const std::string text = write_problem(generate_instance(6, 3, 1.0, 5));
  std::string first;
  for (const std::string threads : {"1", "2", "8"}) {
    const CliRun r = Cli({"solve", "-", "--k", "3", "--threads", threads, "--trace", "-"}, text);
    ASSERT_EQ(r.code, 0) << r.err;
    if (first.empty()) first = r.out;
    EXPECT_EQ(r.out, first) << "threads=" << threads;
  }
}

TEST_F(CliTest, SolveExitCodes) {
  const std::string text = write_problem(generate_instance(4, 2, 1.0, 3));
  EXPECT_EQ(Cli({"solve", "-", "--max-iters", "2"}, text).code, 2);
  const std::string degenerate =
      R"({"n": 2, "m": 1, "b": [2], "A0": [[0, 0, 1], [1, 1, 1]], "A": [[[0, 0, 1], [1, 1, 1]]]})";
  EXPECT_EQ(Cli({"solve", "-"}, degenerate).code, 3);
}

TEST_F(CliTest, SolveInputErrors) {
  EXPECT_EQ(Cli({"solve", Path("missing.json")}).code, 1);
  const std::string text = write_problem(generate_instance(4, 2, 1.0, 3));
  EXPECT_EQ(Cli({"solve", "-", "--sigma", "1.5"}, text).code, 1);
  EXPECT_EQ(Cli({"solve", "-", "--k", "3"}, text).code, 1);
  EXPECT_EQ(Cli({"solve", "-", "--bogus"}, text).code, 1);
  const CliRun bad = Cli({"solve", "-"}, "{ not json");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("ParseError"), std::string::npos);
}

TEST_F(CliTest, VerifyBarrierSuite) {
  const CliRun r = Cli({"verify", "--suite", "barrier", "--n", "6", "--k", "3", "--trials", "100"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("barrier_inequality(n=6,k=3)"), std::string::npos);
}

TEST_F(CliTest, VerifyRejectsUnknownSuite) {
  EXPECT_EQ(Cli({"verify", "--suite", "nosuch"}).code, 1);
  EXPECT_EQ(Cli({"verify", "--n", "5", "--k", "2"}).code, 1);
}

TEST_F(CliTest, VerifyAllReportsEveryCheck) {
  const CliRun r = Cli({"verify", "--trials", "50"});
  std::istringstream lines(r.out);
  std::string line;
  int reports = 0;
  int failed = 0;
  bool only_relation_fails = true;
  while (std::getline(lines, line)) {
    ++reports;
    if (line.find("\"failures\":0,") == std::string::npos) {
      ++failed;
      only_relation_fails &= line.find("decrement_relation") != std::string::npos;
    }
  }
  EXPECT_EQ(reports, 3 * 3 + 2 * 3);
  // The exit code mirrors the reports exactly.
  EXPECT_EQ(r.code, failed == 0 ? 0 : 1);
  EXPECT_TRUE(only_relation_fails) << r.out;
}

TEST_F(CliTest, HelpExitsCleanly) {
  const CliRun r = Cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
  EXPECT_EQ(Cli({}).code, 1);
}

}  // namespace
}  // namespace fwipm
