#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fwipm/fw_cone.h"
#include "fwipm/ipm.h"
#include "fwipm/problem.h"
#include "fwipm/random.h"
#include "fwipm/symmat.h"

namespace fwipm {

struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  /// Smallest margin seen; negative exactly when some trial failed.
  double worst_slack = kInfinity;

  void record(double slack) {
    ++trials;
    if (slack < 0.0 || std::isnan(slack)) ++failures;
    if (slack < worst_slack || std::isnan(slack)) worst_slack = slack;
  }
};

/// One JSON object, no trailing newline.
std::string write_check_report(const CheckReport& report);

/// Symmetric matrix with entries uniform in [-1, 1].
SymMat random_symmetric(int n, Rng& rng);

/// Blocks B^T B + 0.1 I with B uniform in [-1, 1]^{k x k}.
BlockCollection random_interior(const SupportIndexPtr& index, Rng& rng);

/// min_y ||I - sum_i y_i A_i||_F from the Gram normal equations; equals the
/// restricted Newton decrement of -log det at I. Throws Singular on
/// dependent rows.
double sdp_decrement_at_identity(const std::vector<SymMat>& rows);

/// Decrement of the block barrier at Y0 on {Y : <A_i, psi(Y)> = tr(A_i)}.
double fw_decrement_for_rows(const std::vector<SymMat>& rows, int k);

/// Solve with k = n, where the block cone equals the PSD cone.
SolveResult full_cone_solve(const SdpProblem& problem, double epsilon);

/// Objective of full_cone_solve; throws PreconditionViolated unless the run
/// ended Optimal or Degenerate.
double full_cone_reference(const SdpProblem& problem, double epsilon);

/// barrier(Y) >= C (-logdet psi(Y)) + n C log C - 1e-9 on random interior Y.
CheckReport check_barrier_inequality(int n, int k, int trials, std::uint64_t seed);

/// Equality of both sides above at Y0, within 1e-9.
CheckReport check_barrier_equality_at_y0(int n, int k);

/// ||psi_dagger(X)|| <= ||X||_F + 1e-12 on random symmetric X.
CheckReport check_norm_bound(int n, int k, int trials, std::uint64_t seed);

/// Delta_FW(Y0) >= sqrt(C) Delta_SDP(I) - 1e-8 on random rows (equality
/// within 1e-10 when k = n). The norm bound is also checked on every row.
CheckReport check_decrement_relation(int n, int k, int m, int trials,
                                     std::uint64_t seed);

/// Delta_SDP(I) - 1e-8 <= Delta_FW(Y0) <= sqrt(C) Delta_SDP(I) + 1e-8.
CheckReport check_decrement_bracket(int n, int k, int m, int trials,
                                    std::uint64_t seed);

/// Central differences (h = 1e-5): gradient rel. error <= 1e-6 and
/// Hessian-apply consistency rel. error <= 1e-5.
CheckReport finite_difference_suite(int n, int k, int trials, std::uint64_t seed);

/// Worst gradient relative error over the trials for each step size.
std::vector<double> finite_difference_h_sweep(int n, int k, int trials,
                                              std::uint64_t seed,
                                              const std::vector<double>& steps);

}  // namespace fwipm
