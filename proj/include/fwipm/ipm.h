#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fwipm/fw_cone.h"
#include "fwipm/parallel.h"
#include "fwipm/problem.h"
#include "fwipm/symmat.h"

namespace fwipm {

/// How restricted_newton computes its multipliers. Both routes solve the same
/// weighted least-squares problem; kQr works on the Cholesky-scaled rows and
/// stays accurate when the normal matrix is badly conditioned.
enum class NewtonSolve { kQr, kNormalEquations };

struct SolveConfig {
  double epsilon = 1e-6;
  double sigma = 0.5;
  int k = 2;
  int max_outer = 10000;
  double decrement_threshold = 1.0 / 14.0;
  double linesearch_tol = 1e-10;
  double gap_check_tol = 1e-9;
  int threads = 1;
  bool deterministic = true;
  NewtonSolve newton_solve = NewtonSolve::kQr;

  /// Throws PreconditionViolated naming the first offending field.
  void validate() const;
};

enum class Phase { kPredictor, kCorrector };

std::string_view to_string(Phase phase);

struct IterationRecord {
  int iter = 0;
  Phase phase = Phase::kPredictor;
  double objective = 0.0;
  double decrement_fw = 0.0;
  std::optional<double> gap;
  bool gap_valid = false;
  std::optional<double> s_star;
  std::optional<double> t_step;
  std::optional<double> f_fw_decrease;

  bool operator==(const IterationRecord& other) const = default;
};

/// One JSON object, no trailing newline.
std::string write_trace_record(const IterationRecord& record);
IterationRecord parse_trace_record(std::string_view line);

struct SolverState {
  SupportIndexPtr index;
  SymMat x_current = SymMat(1);
  SymMat sqrt_x = SymMat(1);
  SymMat a0_resc = SymMat(1);
  std::vector<SymMat> a_resc;
  std::vector<double> b;
  double v_current = 0.0;
  std::optional<double> eta0;
  /// -y0 / C(n-1,k-1) from the last guard solve; logged, never asserted.
  std::optional<double> eta_surrogate;
  std::vector<IterationRecord> records;
};

/// R A_i R with R = psd_sqrt(x).
std::vector<SymMat> rescale_data(const std::vector<SymMat>& a, const SymMat& x);

/// Builds a state at x (rescaled data, objective value) for the given data.
SolverState make_state(const SdpProblem& problem, const SymMat& x, int k);

struct NormalSystem {
  Eigen::MatrixXd m;
  Eigen::VectorXd r;
};

NormalSystem assemble_normal_system(
    const std::vector<BlockCollection>& abar, const BlockCollection& y,
    const BlockCollection& g, const BlockExecutor& exec = BlockExecutor::serial());

struct NewtonResult {
  BlockCollection step;
  Eigen::VectorXd y;
  double decrement = 0.0;
};

/// Newton step of the block barrier at y restricted to
/// {Y' : sum_J <abar_i,J, Y'_J> = b_rows_i}. Throws PreconditionViolated if y
/// is not on that slice, Singular for dependent rows.
NewtonResult restricted_newton(const std::vector<BlockCollection>& abar,
                               const std::vector<double>& b_rows,
                               const BlockCollection& y,
                               NewtonSolve route = NewtonSolve::kQr,
                               const BlockExecutor& exec = BlockExecutor::serial());

/// Minimum local-norm correction (local metric at base) moving y onto
/// sum_J <abar_i,J, Y_J> = target_i; applied twice.
BlockCollection restore_feasibility(const std::vector<BlockCollection>& abar,
                                    const std::vector<double>& target,
                                    const BlockCollection& base, BlockCollection y,
                                    const BlockExecutor& exec = BlockExecutor::serial());

struct DecrementResult {
  double decrement = 0.0;
  Eigen::VectorXd y;  // objective multiplier first when included
  BlockCollection step;
};

DecrementResult fw_decrement_at_y0(const SolverState& state, bool include_objective,
                                   NewtonSolve route = NewtonSolve::kQr,
                                   const BlockExecutor& exec = BlockExecutor::serial());

struct ObjectiveProjection {
  SymMat residual = SymMat(1);  // A0r minus its projection onto span{A_i r}
  Eigen::VectorXd y;
  bool degenerate = false;
};

ObjectiveProjection project_objective(const SolverState& state);

struct PredictorResult {
  BlockCollection blocks;
  double s_star = 0.0;
};

PredictorResult predictor(const SolverState& state, const SolveConfig& config,
                          const BlockExecutor& exec = BlockExecutor::serial());

struct LineSearchResult {
  double t = 0.0;
  BlockCollection y_new;
};

LineSearchResult line_search(const BlockCollection& y, const BlockCollection& d,
                             double tol = 1e-10,
                             const BlockExecutor& exec = BlockExecutor::serial());

struct CorrectorResult {
  BlockCollection blocks;
  double t_step = 0.0;
  double f_fw_decrease = 0.0;
};

CorrectorResult corrector(const SolverState& state, const SolveConfig& config,
                          const BlockExecutor& exec = BlockExecutor::serial());

struct GapResult {
  double gap = 0.0;
  bool valid = false;
};

GapResult duality_gap(const SolverState& state, const Eigen::VectorXd& y,
                      double gap_check_tol = 1e-9);

/// ceil(2688 C(n-1,k-1) (n log(1/(1-sigma)) + 1/154)).
long long corrector_bound(int n, int k, double sigma);

/// Handed to the observer after every outer iteration.
struct IterationEvent {
  const IterationRecord& record;
  const SymMat& x_before;
  const SymMat& x_after;
  const BlockCollection& y_out;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

struct SolveResult {
  SymMat x = SymMat(1);
  std::vector<IterationRecord> trace;
  SolveStatus status = SolveStatus::kMaxIterations;
  double objective = 0.0;
  std::optional<double> gap;
  bool gap_valid = false;
  int predictor_count = 0;
  int corrector_count = 0;
  std::vector<std::string> warnings;
};

/// Throws NoStartingPoint if neither X0 nor I is strictly feasible.
SolveResult solve(const SdpProblem& problem, const SolveConfig& config,
                  const IterationObserver& observer = {});

SolutionReport make_report(const SolveResult& result);

}  // namespace fwipm
