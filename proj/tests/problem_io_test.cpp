#include "fwipm/problem.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "fwipm/error.h"
#include "fwipm/ipm.h"
#include "fwipm/random.h"
#include "test_util.h"

namespace fwipm {
namespace {

using test::CodeOf;

constexpr char kSmall[] = R"({
  "n": 2, "m": 1, "b": [2.0],
  "A0": [[0, 0, 1.0], [1, 1, 2.0]],
  "A": [[[0, 0, 1.0], [1, 1, 1.0]]]
})";

std::string MessageOf(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ParseProblemTest, SmallExample) {
  const SdpProblem p = parse_problem(kSmall);
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.m, 1);
  EXPECT_EQ(p.b, std::vector<double>{2.0});
  EXPECT_EQ(p.a0(1, 1), 2.0);
  EXPECT_EQ(p.a0(0, 1), 0.0);
  EXPECT_EQ(p.a[0], SymMat::identity(2));
  EXPECT_FALSE(p.x0.has_value());
  EXPECT_FALSE(p.eta0.has_value());
}

TEST(ParseProblemTest, OptionalFields) {
  const SdpProblem p = parse_problem(R"({"n": 2, "m": 1, "b": [2], "A0": [],
      "A": [[[0, 0, 1], [1, 1, 1]]], "X0": [[0, 0, 1], [1, 1, 1]], "eta0": 0.5})");
  ASSERT_TRUE(p.x0.has_value());
  EXPECT_EQ(*p.x0, SymMat::identity(2));
  EXPECT_EQ(p.eta0, 0.5);
}

TEST(ParseProblemTest, StructuralErrors) {
  EXPECT_EQ(CodeOf([] { parse_problem("{\n\"n\": 2,\n,}"); }), ErrorCode::kParseError);
  EXPECT_NE(MessageOf("{\n\"n\": 2,\n,}").find("line 3"), std::string::npos);
  EXPECT_EQ(CodeOf([] { parse_problem("[]"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              parse_problem(R"({"n": 2, "m": 1, "b": [2], "A0": [], "A": [[]], "x": 1})");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { parse_problem(R"({"n": 2, "m": 1, "b": [2], "A": [[]]})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { parse_problem(R"({"n": 2, "m": 0, "b": [], "A0": [], "A": []})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              parse_problem(R"({"n": 2, "m": 1, "b": [2], "A0": [], "A": [[]], "eta0": -1})");
            }),
            ErrorCode::kParseError);
}

TEST(ParseProblemTest, EntryErrorsNameTheField) {
  const std::string out_of_range =
      R"({"n": 2, "m": 2, "b": [2, 0], "A0": [], "A": [[], [[0, 0, 1], [0, 2, 1]]]})";
  EXPECT_EQ(CodeOf([&] { parse_problem(out_of_range); }), ErrorCode::kParseError);
  EXPECT_NE(MessageOf(out_of_range).find("A[1][1]"), std::string::npos);

  const std::string lower = R"({"n": 2, "m": 1, "b": [2], "A0": [[1, 0, 1]], "A": [[]]})";
  EXPECT_EQ(CodeOf([&] { parse_problem(lower); }), ErrorCode::kAsymmetricEntry);

  const std::string dup =
      R"({"n": 2, "m": 1, "b": [2], "A0": [[0, 1, 1], [0, 1, 2]], "A": [[]]})";
  EXPECT_EQ(CodeOf([&] { parse_problem(dup); }), ErrorCode::kParseError);

  const std::string not_number = R"({"n": 2, "m": 1, "b": ["x"], "A0": [], "A": [[]]})";
  EXPECT_NE(MessageOf(not_number).find("b[0]"), std::string::npos);
}

TEST(ParseProblemTest, SizeMismatches) {
  EXPECT_EQ(CodeOf([] { parse_problem(R"({"n": 2, "m": 2, "b": [2], "A0": [], "A": [[], []]})"); }),
            ErrorCode::kDimMismatch);
  EXPECT_EQ(CodeOf([] { parse_problem(R"({"n": 2, "m": 2, "b": [2, 1], "A0": [], "A": [[]]})"); }),
            ErrorCode::kDimMismatch);
}

bool BitEqual(const SymMat& a, const SymMat& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.packed().size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.packed()[i]) !=
        std::bit_cast<std::uint64_t>(b.packed()[i])) {
      return false;
    }
  }
  return true;
}

TEST(WriteProblemTest, RoundTripIsBitExact) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SdpProblem p = generate_instance(3 + seed % 6, 1 + seed % 5, 0.5 + seed, seed);
    p.a0.set(0, 1, -0.0);
    p.a0.set(0, 0, std::numeric_limits<double>::denorm_min());
    p.b[0] = 1e300;
    const SdpProblem q = parse_problem(write_problem(p));
    ASSERT_EQ(p, q);
    EXPECT_TRUE(BitEqual(p.a0, q.a0));
    for (int i = 0; i < p.m; ++i) {
      EXPECT_TRUE(BitEqual(p.a[i], q.a[i]));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(p.b[i]), std::bit_cast<std::uint64_t>(q.b[i]));
    }
    EXPECT_EQ(write_problem(q), write_problem(p));
  }
}

TEST(WriteProblemTest, KeyOrder) {
  const std::string text = write_problem(generate_instance(2, 1, 1.0, 1));
  std::size_t last = 0;
  for (const char* key : {"\"n\"", "\"m\"", "\"b\"", "\"A0\"", "\"A\"", "\"X0\"", "\"eta0\""}) {
    const std::size_t at = text.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GE(at, last) << key;
    last = at;
  }
}

TEST(FormatDoubleTest, Examples) {
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-0.0), "-0.0");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1e300), "1.0000000000000001e+300");
  EXPECT_EQ(format_double(std::nan("")), "null");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "null");
}

TEST(GenerateInstanceTest, PureFunctionOfArguments) {
  EXPECT_EQ(write_problem(generate_instance(6, 4, 1.0, 3)),
            write_problem(generate_instance(6, 4, 1.0, 3)));
  EXPECT_NE(write_problem(generate_instance(6, 4, 1.0, 3)),
            write_problem(generate_instance(6, 4, 1.0, 4)));
}

TEST(GenerateInstanceTest, IdentityIsFeasibleAndCentral) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const int m = 1 + static_cast<int>(seed % 4);
    const double eta0 = 0.25 * static_cast<double>(seed);
    const SdpProblem p = generate_instance(n, m, eta0, seed);
    ASSERT_EQ(p.eta0, eta0);
    ASSERT_TRUE(p.x0.has_value());
    EXPECT_EQ(*p.x0, SymMat::identity(n));
    for (int i = 0; i < m; ++i) EXPECT_EQ(p.b[i], p.a[i].trace());
    // Replaying the generator stream recovers the multipliers y with
    // eta0 A0 = I + sum y_i A_i.
    Rng rng(seed);
    for (int i = 0; i < m * n * (n + 1) / 2; ++i) rng.uniform01();
    SymMat expect = SymMat::identity(n);
    for (int i = 0; i < m; ++i) expect += rng.uniform(-1.0, 1.0) * p.a[i];
    EXPECT_LE((eta0 * p.a0 - expect).frobenius_norm(), 1e-12);
    const ValidationResult v = validate_problem(p);
    EXPECT_TRUE(v.findings.empty());
    EXPECT_TRUE(v.identity_feasible);
  }
}

TEST(GenerateInstanceTest, RejectsBadArguments) {
  EXPECT_EQ(CodeOf([] { generate_instance(1, 1, 1.0, 0); }), ErrorCode::kBadDims);
  EXPECT_EQ(CodeOf([] { generate_instance(4, 0, 1.0, 0); }), ErrorCode::kBadDims);
  EXPECT_EQ(CodeOf([] { generate_instance(4, 1, 0.0, 0); }), ErrorCode::kBadDims);
}

TEST(ValidateProblemTest, Findings) {
  SdpProblem p = parse_problem(kSmall);
  EXPECT_TRUE(validate_problem(p).findings.empty());
  EXPECT_TRUE(validate_problem(p).identity_feasible);

  SdpProblem shifted = p;
  shifted.b[0] = 3.0;
  EXPECT_FALSE(validate_problem(shifted).identity_feasible);

  SdpProblem bad_x0 = p;
  bad_x0.x0 = SymMat::diagonal(std::vector<double>{3.0, -1.0});
  const ValidationResult v = validate_problem(bad_x0);
  ASSERT_FALSE(v.findings.empty());
  EXPECT_EQ(v.findings[0].rfind("X0-infeasible:", 0), 0u);

  SdpProblem nan_b = p;
  nan_b.b[0] = std::nan("");
  EXPECT_EQ(validate_problem(nan_b).findings.at(0).rfind("non-finite:", 0), 0u);

  SdpProblem wrong_dim = p;
  wrong_dim.a[0] = SymMat::identity(3);
  EXPECT_EQ(validate_problem(wrong_dim).findings.at(0).rfind("dimension:", 0), 0u);

  SdpProblem bad_eta = p;
  bad_eta.eta0 = -1.0;
  EXPECT_EQ(validate_problem(bad_eta).findings.at(0).rfind("eta0:", 0), 0u);
}

TEST(WithinFeasibilityTest, RelativeTolerance) {
  EXPECT_TRUE(within_feasibility(1.0 + 1.9e-8, 1.0));
  EXPECT_FALSE(within_feasibility(1.0 + 2.1e-8, 1.0));
  EXPECT_TRUE(within_feasibility(1e6 + 1e-3, 1e6));
}

TEST(ReportTest, RoundTrip) {
  SolutionReport r;
  r.x_final = SymMat::diagonal(std::vector<double>{0.1, 1.0 / 3.0, -0.0});
  r.objective = -0.035001314;
  r.gap = 7.5e-7;
  r.gap_valid = true;
  r.outer_iters = 141;
  r.predictor_count = 56;
  r.corrector_count = 85;
  r.status = SolveStatus::kOptimal;
  const std::string text = write_report(r);
  EXPECT_EQ(parse_report(text), r);
  EXPECT_EQ(write_report(parse_report(text)), text);

  r.gap.reset();
  r.status = SolveStatus::kDegenerate;
  EXPECT_EQ(parse_report(write_report(r)), r);
  EXPECT_NE(write_report(r).find("\"gap\": null"), std::string::npos);
}

TEST(ReportTest, KeyOrder) {
  const std::string text = write_report(SolutionReport{});
  std::size_t last = 0;
  for (const char* key : {"X_final", "objective", "gap", "gap_valid", "outer_iters",
                          "predictor_count", "corrector_count", "status"}) {
    const std::size_t at = text.find(std::string("\"") + key + "\"");
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GT(at, last == 0 ? 0 : last) << key;
    last = at;
  }
}

TEST(TraceRecordTest, RoundTrip) {
  IterationRecord r;
  r.iter = 7;
  r.phase = Phase::kCorrector;
  r.objective = -1.0 / 3.0;
  r.decrement_fw = 0.2;
  r.gap = 1e-3;
  r.gap_valid = true;
  r.t_step = 0.4375;
  r.f_fw_decrease = 0.0123;
  const std::string line = write_trace_record(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_trace_record(line), r);
  EXPECT_NE(line.find("\"s_star\":null"), std::string::npos);

  IterationRecord p;
  p.phase = Phase::kPredictor;
  p.s_star = 2.5;
  EXPECT_EQ(parse_trace_record(write_trace_record(p)), p);
  EXPECT_EQ(CodeOf([] { parse_trace_record("{\"iter\":1}"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { parse_trace_record("nope"); }), ErrorCode::kParseError);
}

}  // namespace
}  // namespace fwipm
