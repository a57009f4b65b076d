#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fwipm/symmat.h"

namespace fwipm {

/// min <A0, X> subject to <A_i, X> = b_i, X PSD.
struct SdpProblem {
  int n = 1;
  int m = 0;
  SymMat a0 = SymMat(1);
  std::vector<SymMat> a;
  std::vector<double> b;
  std::optional<SymMat> x0;
  std::optional<double> eta0;

  bool operator==(const SdpProblem& other) const = default;
};

/// Parses the native JSON problem format. Throws ParseError (with a line or
/// field locus), DimMismatch or AsymmetricEntry.
SdpProblem parse_problem(std::string_view text);

/// Fixed key order, 17 significant digits; parse_problem(write_problem(p)) == p.
std::string write_problem(const SdpProblem& problem);

/// Random instance with I feasible and on the central path at eta0.
SdpProblem generate_instance(int n, int m, double eta0, std::uint64_t seed);

struct ValidationResult {
  std::vector<std::string> findings;
  bool identity_feasible = false;
};

/// Feasibility tolerance shared by validation and the solver invariants.
inline bool within_feasibility(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs));
}

ValidationResult validate_problem(const SdpProblem& problem);

enum class SolveStatus { kOptimal, kMaxIterations, kDegenerate, kUnbounded };

std::string_view to_string(SolveStatus status);

struct SolutionReport {
  SymMat x_final = SymMat(1);
  double objective = 0.0;
  std::optional<double> gap;
  bool gap_valid = false;
  int outer_iters = 0;
  int predictor_count = 0;
  int corrector_count = 0;
  SolveStatus status = SolveStatus::kOptimal;

  bool operator==(const SolutionReport& other) const = default;
};

std::string write_report(const SolutionReport& report);
SolutionReport parse_report(std::string_view text);

/// "%.17g", with ".0" appended to integral values so they stay floats;
/// "null" for non-finite values.
std::string format_double(double value);

}  // namespace fwipm
