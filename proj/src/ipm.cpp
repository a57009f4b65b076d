#include "fwipm/ipm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwipm/error.h"

namespace fwipm {

void SolveConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kPreconditionViolated, what);
  };
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be > 0");
  if (!(sigma > 0.0 && sigma < 1.0)) fail("sigma must lie in (0, 1)");
  if (k < 2) fail("k must be >= 2");
  if (max_outer < 0) fail("max_outer must be >= 0");
  if (!(decrement_threshold > 0.0) || !std::isfinite(decrement_threshold)) {
    fail("decrement_threshold must be > 0");
  }
  if (!(linesearch_tol > 0.0)) fail("linesearch_tol must be > 0");
  if (!(gap_check_tol >= 0.0)) fail("gap_check_tol must be >= 0");
  if (threads < 1) fail("threads must be >= 1");
}

std::string_view to_string(Phase phase) {
  return phase == Phase::kPredictor ? "predictor" : "corrector";
}

std::vector<SymMat> rescale_data(const std::vector<SymMat>& a, const SymMat& x) {
  const SymMat r = psd_sqrt(x);
  std::vector<SymMat> out;
  out.reserve(a.size());
  for (const SymMat& ai : a) out.push_back(congruence(r, ai));
  return out;
}

namespace {

void rescale(SolverState& state, const SdpProblem& problem, const SymMat& x) {
  state.x_current = x;
  state.sqrt_x = psd_sqrt(x);
  state.a0_resc = congruence(state.sqrt_x, problem.a0);
  state.a_resc.clear();
  for (const SymMat& ai : problem.a) state.a_resc.push_back(congruence(state.sqrt_x, ai));
  state.v_current = state.a0_resc.trace();
}

Eigen::Map<const Eigen::VectorXd> ravel(const Eigen::MatrixXd& m) {
  return {m.data(), m.size()};
}

// Rows B_i,J = L_J^T abar_i,J L_J of the constraint operator in the local
// metric at base (base_J = L_J L_J^T), stacked block by block, and their QR.
struct WhitenedRows {
  std::vector<Eigen::MatrixXd> chol;
  Eigen::MatrixXd rows;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;
  int rank = 0;
};

WhitenedRows whiten(const std::vector<BlockCollection>& abar,
                    const BlockCollection& base, const BlockExecutor& exec) {
  const int k = base.k();
  const int kk = k * k;
  const int r = static_cast<int>(abar.size());
  WhitenedRows w;
  w.chol.resize(base.count());
  w.rows.resize(static_cast<Eigen::Index>(base.count()) * kk, r);
  exec.for_each(base.count(), [&](int t) {
    w.chol[t] = block_cholesky(base, t);
    const Eigen::MatrixXd& l = w.chol[t];
    for (int i = 0; i < r; ++i) {
      const Eigen::MatrixXd b = l.transpose() * abar[i].block(t) * l;
      w.rows.block(static_cast<Eigen::Index>(t) * kk, i, kk, 1) = ravel(b);
    }
  });
  w.qr.compute(w.rows);
  w.rank = r;
  const auto& packed = w.qr.matrixQR();
  for (int i = 0; i < r; ++i) {
    const double col = w.rows.col(i).norm();
    if (!(std::abs(packed(i, i)) > 1e-12 * col)) {
      throw Error(ErrorCode::kSingular, "constraint row " + std::to_string(i) +
                                            " is linearly dependent on earlier rows");
    }
  }
  return w;
}

// Maps a whitened vector back to blocks: block J = L_J W_J L_J^T.
BlockCollection unwhiten(const WhitenedRows& w, const Eigen::VectorXd& v,
                         const SupportIndexPtr& index, const BlockExecutor& exec) {
  BlockCollection out(index);
  const int k = index->k();
  const int kk = k * k;
  exec.for_each(out.count(), [&](int t) {
    const Eigen::Map<const Eigen::MatrixXd> wt(v.data() + static_cast<Eigen::Index>(t) * kk,
                                               k, k);
    const Eigen::MatrixXd p = w.chol[t] * wt * w.chol[t].transpose();
    out.block(t) = 0.5 * (p + p.transpose());
  });
  return out;
}

void check_rows(const std::vector<BlockCollection>& abar,
                const std::vector<double>& b_rows, const BlockCollection& y) {
  if (abar.size() != b_rows.size() || abar.empty()) {
    throw Error(ErrorCode::kDimMismatch, "row operator and right-hand side sizes");
  }
  for (std::size_t i = 0; i < abar.size(); ++i) {
    const double lhs = inner(abar[i], y);
    if (!within_feasibility(lhs, b_rows[i])) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "point is off the affine slice in row " + std::to_string(i) + " (" +
                      format_double(lhs) + " vs " + format_double(b_rows[i]) + ")");
    }
  }
}

BlockCollection restore_with(const WhitenedRows& w,
                             const std::vector<BlockCollection>& abar,
                             const std::vector<double>& target, BlockCollection y,
                             const BlockExecutor& exec) {
  const Eigen::Index r = w.rank;
  const Eigen::Index rows = w.rows.rows();
  const Eigen::MatrixXd rmat = w.qr.matrixQR().topLeftCorner(r, r);
  const auto rt = rmat.triangularView<Eigen::Upper>();
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd rs(r);
    for (Eigen::Index i = 0; i < r; ++i) rs(i) = target[i] - inner(abar[i], y);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(rows);
    z.head(r) = rt.transpose().solve(rs);
    z = w.qr.householderQ() * z;
    y += unwhiten(w, z, y.index_ptr(), exec);
  }
  return y;
}

std::vector<BlockCollection> restricted_rows(const SolverState& state,
                                             bool include_objective) {
  std::vector<BlockCollection> abar;
  if (include_objective) abar.push_back(restrict_adjoint(state.a0_resc, state.index));
  for (const SymMat& a : state.a_resc) abar.push_back(restrict_adjoint(a, state.index));
  return abar;
}

std::vector<double> row_targets(const SolverState& state, bool include_objective) {
  std::vector<double> target;
  if (include_objective) target.push_back(state.v_current);
  target.insert(target.end(), state.b.begin(), state.b.end());
  return target;
}

void check_state(const SolverState& state) {
  if (!state.index) throw Error(ErrorCode::kPreconditionViolated, "state has no index");
  for (std::size_t i = 0; i < state.a_resc.size(); ++i) {
    if (!within_feasibility(state.a_resc[i].trace(), state.b[i])) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "current iterate violates constraint " + std::to_string(i));
    }
  }
}

PredictorResult predictor_step(const SolverState& state, const SolveConfig& config,
                               const BlockExecutor& exec) {
  const ObjectiveProjection proj = project_objective(state);
  if (proj.degenerate) {
    throw Error(ErrorCode::kDegenerateObjective,
                "objective is constant on the feasible set");
  }
  const BlockCollection y0 = BlockCollection::y0(state.index);
  const BlockCollection z = psi_dagger(proj.residual, state.index);
  const double s_star = step_to_boundary(y0, z, exec);
  if (s_star == kInfinity) {
    throw Error(ErrorCode::kUnbounded, "predictor direction never meets the boundary");
  }
  BlockCollection y = y0 - (config.sigma * s_star) * z;

  const std::vector<BlockCollection> abar = restricted_rows(state, false);
  y = restore_with(whiten(abar, y0, exec), abar, state.b, std::move(y), exec);

  const double v_new = inner(restrict_adjoint(state.a0_resc, state.index), y);
  if (!(v_new < state.v_current - 1e-12)) {
    throw Error(ErrorCode::kInvariantViolated,
                "predictor step did not decrease the objective (" + format_double(v_new) +
                    " vs " + format_double(state.v_current) + ")");
  }
  return {std::move(y), s_star};
}

CorrectorResult corrector_step(const SolverState& state, const SolveConfig& config,
                               const DecrementResult& guard, const BlockExecutor& exec) {
  const BlockCollection y0 = BlockCollection::y0(state.index);
  LineSearchResult ls = line_search(y0, guard.step, config.linesearch_tol, exec);
  const std::vector<BlockCollection> abar = restricted_rows(state, true);
  BlockCollection y = restore_with(whiten(abar, y0, exec), abar,
                                   row_targets(state, true), std::move(ls.y_new), exec);
  const double decrease = barrier_value(y0, exec) - barrier_value(y, exec);
  return {std::move(y), ls.t, decrease};
}

}  // namespace

SolverState make_state(const SdpProblem& problem, const SymMat& x, int k) {
  SolverState state;
  state.index = enumerate_supports(problem.n, k);
  state.b = problem.b;
  state.eta0 = problem.eta0;
  rescale(state, problem, x);
  return state;
}

NormalSystem assemble_normal_system(const std::vector<BlockCollection>& abar,
                                    const BlockCollection& y, const BlockCollection& g,
                                    const BlockExecutor& exec) {
  const int r = static_cast<int>(abar.size());
  std::vector<Eigen::MatrixXd> m_part(y.count());
  std::vector<Eigen::VectorXd> r_part(y.count());
  exec.for_each(y.count(), [&](int t) {
    block_cholesky(y, t);
    const auto yt = y.block(t);
    // P_i = Abar_i Y, so tr(Abar_i Y Abar_j Y) = <P_i, P_j^T>.
    std::vector<Eigen::MatrixXd> p(r);
    for (int i = 0; i < r; ++i) p[i] = abar[i].block(t) * yt;
    const Eigen::MatrixXd pg = g.block(t) * yt;
    m_part[t].resize(r, r);
    r_part[t].resize(r);
    for (int i = 0; i < r; ++i) {
      for (int j = i; j < r; ++j) {
        const double v = (p[i].array() * p[j].transpose().array()).sum();
        m_part[t](i, j) = m_part[t](j, i) = v;
      }
      r_part[t](i) = (p[i].array() * pg.transpose().array()).sum();
    }
  });
  NormalSystem out{Eigen::MatrixXd::Zero(r, r), Eigen::VectorXd::Zero(r)};
  for (int t = 0; t < y.count(); ++t) {
    out.m += m_part[t];
    out.r += r_part[t];
  }
  return out;
}

NewtonResult restricted_newton(const std::vector<BlockCollection>& abar,
                               const std::vector<double>& b_rows,
                               const BlockCollection& y, NewtonSolve route,
                               const BlockExecutor& exec) {
  check_rows(abar, b_rows, y);
  const BlockCollection g = barrier_gradient(y, exec);
  const int r = static_cast<int>(abar.size());

  if (route == NewtonSolve::kNormalEquations) {
    const NormalSystem sys = assemble_normal_system(abar, y, g, exec);
    Eigen::VectorXd mult = spd_solve(sys.m, sys.r);
    BlockCollection lift(y.index_ptr());
    for (int i = 0; i < r; ++i) lift.vec() += mult(i) * abar[i].vec();
    BlockCollection step = hess_inv_apply(y, lift - g, exec);
    const double dec = std::sqrt(std::max(0.0, local_inner(y, step, step, exec)));
    return {std::move(step), std::move(mult), dec};
  }

  const WhitenedRows w = whiten(abar, y, exec);
  const int k = y.k();
  const int kk = k * k;
  Eigen::VectorXd gw(w.rows.rows());
  exec.for_each(y.count(), [&](int t) {
    const Eigen::MatrixXd& l = w.chol[t];
    const Eigen::MatrixXd gt = l.transpose() * g.block(t) * l;
    gw.segment(static_cast<Eigen::Index>(t) * kk, kk) = ravel(gt);
  });
  // Least squares min_y ||sum_i y_i B_i - G||; the whitened Newton step is
  // minus the residual.
  Eigen::VectorXd qtg = w.qr.householderQ().adjoint() * gw;
  Eigen::VectorXd mult = w.qr.matrixQR()
                             .topLeftCorner(r, r)
                             .triangularView<Eigen::Upper>()
                             .solve(qtg.head(r));
  qtg.head(r).setZero();
  const double dec = qtg.norm();
  Eigen::VectorXd res = w.qr.householderQ() * qtg;
  BlockCollection step = unwhiten(w, -res, y.index_ptr(), exec);
  return {std::move(step), std::move(mult), dec};
}

BlockCollection restore_feasibility(const std::vector<BlockCollection>& abar,
                                    const std::vector<double>& target,
                                    const BlockCollection& base, BlockCollection y,
                                    const BlockExecutor& exec) {
  if (abar.size() != target.size() || abar.empty()) {
    throw Error(ErrorCode::kDimMismatch, "row operator and target sizes");
  }
  return restore_with(whiten(abar, base, exec), abar, target, std::move(y), exec);
}

DecrementResult fw_decrement_at_y0(const SolverState& state, bool include_objective,
                                   NewtonSolve route, const BlockExecutor& exec) {
  check_state(state);
  const BlockCollection y0 = BlockCollection::y0(state.index);
  NewtonResult nr = restricted_newton(restricted_rows(state, include_objective),
                                      row_targets(state, include_objective), y0, route,
                                      exec);
  return {nr.decrement, std::move(nr.y), std::move(nr.step)};
}

ObjectiveProjection project_objective(const SolverState& state) {
  const int n = state.a0_resc.dim();
  const int m = static_cast<int>(state.a_resc.size());
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n) * n, m);
  for (int i = 0; i < m; ++i) {
    const Eigen::MatrixXd d = state.a_resc[i].dense();
    basis.col(i) = ravel(d);
  }
  const Eigen::MatrixXd a0 = state.a0_resc.dense();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::VectorXd qta = qr.householderQ().adjoint() * ravel(a0);
  ObjectiveProjection out;
  out.y = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(
      qta.head(m));
  qta.head(m).setZero();
  const Eigen::VectorXd res = qr.householderQ() * qta;
  const Eigen::Map<const Eigen::MatrixXd> rm(res.data(), n, n);
  out.residual = SymMat::from_upper(0.5 * (rm + rm.transpose()));
  out.degenerate = out.residual.frobenius_norm() <=
                   1e-12 * (1.0 + state.a0_resc.frobenius_norm());
  return out;
}

PredictorResult predictor(const SolverState& state, const SolveConfig& config,
                          const BlockExecutor& exec) {
  // A degenerate objective makes the guard rows dependent; report it as such.
  if (project_objective(state).degenerate) {
    throw Error(ErrorCode::kDegenerateObjective,
                "objective is constant on the feasible set");
  }
  const DecrementResult guard =
      fw_decrement_at_y0(state, true, config.newton_solve, exec);
  if (guard.decrement > config.decrement_threshold) {
    throw Error(ErrorCode::kPreconditionViolated,
                "predictor requires decrement <= threshold, got " +
                    format_double(guard.decrement));
  }
  return predictor_step(state, config, exec);
}

LineSearchResult line_search(const BlockCollection& y, const BlockCollection& d,
                             double tol, const BlockExecutor& exec) {
  if (!(y.index() == d.index())) {
    throw Error(ErrorCode::kDimMismatch, "line_search: different indices");
  }
  if (d.norm() == 0.0) throw Error(ErrorCode::kZeroDirection, "direction is zero");
  // With Y_J = L L^T and mu the eigenvalues of L^-1 D_J L^-T,
  // phi(t) = phi(0) - sum log(1 + t mu), phi'(t) = -sum mu / (1 + t mu).
  std::vector<Eigen::VectorXd> mu(y.count());
  exec.for_each(y.count(), [&](int t) {
    const Eigen::MatrixXd l = block_cholesky(y, t);
    const auto tri = l.triangularView<Eigen::Lower>();
    Eigen::MatrixXd w = tri.solve(Eigen::MatrixXd(d.block(t)));
    w = tri.solve(Eigen::MatrixXd(w.transpose()));
    w = 0.5 * (w + w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w, Eigen::EigenvaluesOnly);
    mu[t] = eig.eigenvalues();
  });
  double lo = -kInfinity;
  double hi = kInfinity;
  for (const Eigen::VectorXd& block : mu) {
    for (double v : block) {
      if (v > 0.0) lo = std::max(lo, -1.0 / v);
      if (v < 0.0) hi = std::min(hi, -1.0 / v);
    }
  }
  if (lo == -kInfinity || hi == kInfinity) {
    throw Error(ErrorCode::kMonotoneAlongDirection,
                "barrier is monotone along the direction");
  }
  auto dphi = [&](double t) {
    double s = 0.0;
    for (const Eigen::VectorXd& block : mu) {
      for (double v : block) s += v / (1.0 + t * v);
    }
    return -s;
  };
  const double stop = tol * (1.0 + std::abs(dphi(0.0)));
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    t = 0.5 * (lo + hi);
    const double slope = dphi(t);
    if (std::abs(slope) <= stop) break;
    if (slope > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
  }
  BlockCollection y_new = y;
  y_new.vec() += t * d.vec();
  return {t, std::move(y_new)};
}

CorrectorResult corrector(const SolverState& state, const SolveConfig& config,
                          const BlockExecutor& exec) {
  const DecrementResult guard =
      fw_decrement_at_y0(state, true, config.newton_solve, exec);
  if (!(guard.decrement > config.decrement_threshold)) {
    throw Error(ErrorCode::kPreconditionViolated,
                "corrector requires decrement > threshold, got " +
                    format_double(guard.decrement));
  }
  return corrector_step(state, config, guard, exec);
}

GapResult duality_gap(const SolverState& state, const Eigen::VectorXd& y,
                      double gap_check_tol) {
  if (y.size() != static_cast<Eigen::Index>(state.a_resc.size())) {
    throw Error(ErrorCode::kDimMismatch, "multiplier length differs from m");
  }
  GapResult out;
  double yb = 0.0;
  SymMat slack = state.a0_resc;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    yb += y(i) * state.b[i];
    slack -= y(i) * state.a_resc[i];
  }
  out.gap = state.v_current - yb;
  out.valid = lambda_min_sym(slack) >= -gap_check_tol;
  return out;
}

long long corrector_bound(int n, int k, double sigma) {
  const double c = static_cast<double>(binomial(n - 1, k - 1));
  return static_cast<long long>(
      std::ceil(2688.0 * c * (n * std::log(1.0 / (1.0 - sigma)) + 1.0 / 154.0)));
}

namespace {

SymMat choose_start(const SdpProblem& problem) {
  const ValidationResult v = validate_problem(problem);
  for (const std::string& f : v.findings) {
    if (f.rfind("X0-infeasible", 0) != 0) throw Error(ErrorCode::kPreconditionViolated, f);
  }
  if (problem.x0) {
    if (!v.findings.empty()) throw Error(ErrorCode::kNoStartingPoint, v.findings.front());
    return *problem.x0;
  }
  if (v.identity_feasible) return SymMat::identity(problem.n);
  throw Error(ErrorCode::kNoStartingPoint,
              "no X0 given and the identity does not satisfy A(I) = b");
}

}  // namespace

SolveResult solve(const SdpProblem& problem, const SolveConfig& config,
                  const IterationObserver& observer) {
  config.validate();
  SolveResult result;
  if (config.sigma < 0.25) {
    result.warnings.push_back(
        "sigma < 1/4: the predictor progress guarantee does not apply");
  }
  const BlockExecutor exec(config.threads, config.deterministic);
  SolverState state = make_state(problem, choose_start(problem), config.k);
  const double c = static_cast<double>(state.index->constants().c_diag);

  for (int iter = 0;; ++iter) {
    if (iter > 0) rescale(state, problem, state.x_current);

    const ObjectiveProjection proj = project_objective(state);
    if (proj.degenerate) {
      const GapResult g = duality_gap(state, proj.y, config.gap_check_tol);
      result.status = SolveStatus::kDegenerate;
      result.gap = g.gap;
      result.gap_valid = g.valid;
      break;
    }

    const DecrementResult guard =
        fw_decrement_at_y0(state, true, config.newton_solve, exec);
    IterationRecord rec;
    rec.iter = iter;
    rec.objective = state.v_current;
    rec.decrement_fw = guard.decrement;
    const double y_obj = guard.y(0);
    state.eta_surrogate = -y_obj / c;
    if (y_obj < 0.0) {
      const Eigen::VectorXd dual = guard.y.tail(guard.y.size() - 1) / (-y_obj);
      const GapResult g = duality_gap(state, dual, config.gap_check_tol);
      rec.gap = g.gap;
      rec.gap_valid = g.valid;
    }
    result.gap = rec.gap;
    result.gap_valid = rec.gap_valid;
    if (rec.gap_valid && *rec.gap <= config.epsilon) {
      result.status = SolveStatus::kOptimal;
      break;
    }
    if (iter >= config.max_outer) {
      result.status = SolveStatus::kMaxIterations;
      break;
    }

    BlockCollection y_out(state.index);
    if (guard.decrement <= config.decrement_threshold) {
      rec.phase = Phase::kPredictor;
      try {
        PredictorResult p = predictor_step(state, config, exec);
        rec.s_star = p.s_star;
        y_out = std::move(p.blocks);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnbounded) throw;
        result.status = SolveStatus::kUnbounded;
        break;
      }
      ++result.predictor_count;
    } else {
      rec.phase = Phase::kCorrector;
      CorrectorResult cr = corrector_step(state, config, guard, exec);
      rec.t_step = cr.t_step;
      rec.f_fw_decrease = cr.f_fw_decrease;
      y_out = std::move(cr.blocks);
      ++result.corrector_count;
    }

    const SymMat x_next = congruence(state.sqrt_x, psi(y_out));
    state.records.push_back(rec);
    if (observer) observer({state.records.back(), state.x_current, x_next, y_out});
    state.x_current = x_next;
  }

  result.x = state.x_current;
  result.objective = frob_inner(problem.a0, state.x_current);
  result.trace = std::move(state.records);
  return result;
}

SolutionReport make_report(const SolveResult& result) {
  SolutionReport r;
  r.x_final = result.x;
  r.objective = result.objective;
  r.gap = result.gap;
  r.gap_valid = result.gap_valid;
  r.outer_iters = static_cast<int>(result.trace.size());
  r.predictor_count = result.predictor_count;
  r.corrector_count = result.corrector_count;
  r.status = result.status;
  return r;
}

}  // namespace fwipm
