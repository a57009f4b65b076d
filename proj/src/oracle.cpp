#include "fwipm/oracle.h"

#include <algorithm>
#include <cmath>

#include "fwipm/error.h"

namespace fwipm {

std::string write_check_report(const CheckReport& r) {
  return "{\"name\":\"" + r.name + "\",\"trials\":" + std::to_string(r.trials) +
         ",\"failures\":" + std::to_string(r.failures) +
         ",\"worst_slack\":" + format_double(r.worst_slack) + "}";
}

SymMat random_symmetric(int n, Rng& rng) {
  SymMat x(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) x.set(i, j, rng.uniform(-1.0, 1.0));
  }
  return x;
}

BlockCollection random_interior(const SupportIndexPtr& index, Rng& rng) {
  BlockCollection y(index);
  const int k = index->k();
  Eigen::MatrixXd b(k, k);
  for (int t = 0; t < y.count(); ++t) {
    for (int c = 0; c < k; ++c) {
      for (int r = 0; r < k; ++r) b(r, c) = rng.uniform(-1.0, 1.0);
    }
    y.block(t) = b.transpose() * b + 0.1 * Eigen::MatrixXd::Identity(k, k);
  }
  return y;
}

double sdp_decrement_at_identity(const std::vector<SymMat>& rows) {
  const int m = static_cast<int>(rows.size());
  if (m == 0) throw Error(ErrorCode::kDimMismatch, "no rows");
  const int n = rows.front().dim();
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    rhs(i) = rows[i].trace();
    for (int j = i; j < m; ++j) gram(i, j) = gram(j, i) = frob_inner(rows[i], rows[j]);
  }
  const Eigen::VectorXd y = spd_solve(gram, rhs);
  SymMat r = SymMat::identity(n);
  for (int i = 0; i < m; ++i) r -= y(i) * rows[i];
  return r.frobenius_norm();
}

double fw_decrement_for_rows(const std::vector<SymMat>& rows, int k) {
  const SupportIndexPtr index = enumerate_supports(rows.front().dim(), k);
  std::vector<BlockCollection> abar;
  std::vector<double> b;
  for (const SymMat& a : rows) {
    abar.push_back(restrict_adjoint(a, index));
    b.push_back(a.trace());
  }
  return restricted_newton(abar, b, BlockCollection::y0(index)).decrement;
}

SolveResult full_cone_solve(const SdpProblem& problem, double epsilon) {
  SolveConfig config;
  config.k = problem.n;
  config.epsilon = epsilon;
  return solve(problem, config);
}

double full_cone_reference(const SdpProblem& problem, double epsilon) {
  const SolveResult r = full_cone_solve(problem, epsilon);
  if (r.status != SolveStatus::kOptimal && r.status != SolveStatus::kDegenerate) {
    throw Error(ErrorCode::kPreconditionViolated,
                "reference solve ended with status " + std::string(to_string(r.status)));
  }
  return r.objective;
}

namespace {

// C (-logdet psi(Y)) + n C log C, the lower bound for barrier_value(Y).
double barrier_lower_bound(const BlockCollection& y) {
  const SupportIndex& index = y.index();
  const double c = static_cast<double>(index.constants().c_diag);
  return -c * logdet_spd(psi(y)) + index.n() * c * std::log(c);
}

std::string suffix(int n, int k) {
  return "(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
}

std::vector<SymMat> random_rows(int n, int m, Rng& rng) {
  std::vector<SymMat> rows;
  for (int i = 0; i < m; ++i) rows.push_back(random_symmetric(n, rng));
  return rows;
}

}  // namespace

CheckReport check_barrier_inequality(int n, int k, int trials, std::uint64_t seed) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  Rng rng(seed);
  CheckReport report{"barrier_inequality" + suffix(n, k)};
  for (int t = 0; t < trials; ++t) {
    const BlockCollection y = random_interior(index, rng);
    report.record(barrier_value(y) - barrier_lower_bound(y) + 1e-9);
  }
  return report;
}

CheckReport check_barrier_equality_at_y0(int n, int k) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  const BlockCollection y0 = BlockCollection::y0(index);
  CheckReport report{"barrier_equality_at_y0" + suffix(n, k)};
  report.record(1e-9 - std::abs(barrier_value(y0) - barrier_lower_bound(y0)));
  return report;
}

CheckReport check_norm_bound(int n, int k, int trials, std::uint64_t seed) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  Rng rng(seed);
  CheckReport report{"norm_bound" + suffix(n, k)};
  for (int t = 0; t < trials; ++t) {
    const SymMat x = random_symmetric(n, rng);
    report.record(x.frobenius_norm() + 1e-12 - psi_dagger(x, index).norm());
  }
  return report;
}

CheckReport check_decrement_relation(int n, int k, int m, int trials,
                                     std::uint64_t seed) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  const double sqrt_c = std::sqrt(static_cast<double>(index->constants().c_diag));
  Rng rng(seed);
  CheckReport report{"decrement_relation" + suffix(n, k) + ",m=" + std::to_string(m)};
  for (int t = 0; t < trials; ++t) {
    const std::vector<SymMat> rows = random_rows(n, m, rng);
    double norm_slack = kInfinity;
    for (const SymMat& a : rows) {
      norm_slack = std::min(norm_slack,
                            a.frobenius_norm() + 1e-12 - psi_dagger(a, index).norm());
    }
    const double d_sdp = sdp_decrement_at_identity(rows);
    const double d_fw = fw_decrement_for_rows(rows, k);
    const double slack = k == n ? 1e-10 - std::abs(d_fw - d_sdp)
                                : d_fw - sqrt_c * d_sdp + 1e-8;
    report.record(std::min(slack, norm_slack));
  }
  return report;
}

CheckReport check_decrement_bracket(int n, int k, int m, int trials,
                                    std::uint64_t seed) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  const double sqrt_c = std::sqrt(static_cast<double>(index->constants().c_diag));
  Rng rng(seed);
  CheckReport report{"decrement_bracket" + suffix(n, k) + ",m=" + std::to_string(m)};
  for (int t = 0; t < trials; ++t) {
    const std::vector<SymMat> rows = random_rows(n, m, rng);
    const double d_sdp = sdp_decrement_at_identity(rows);
    const double d_fw = fw_decrement_for_rows(rows, k);
    report.record(std::min(d_fw - d_sdp, sqrt_c * d_sdp - d_fw) + 1e-8);
  }
  return report;
}

namespace {

// Central-difference gradient of barrier_value over every block entry,
// alongside the analytic values, in the same (block, a <= c) order.
double gradient_rel_error(const BlockCollection& y, double h) {
  const BlockCollection g = barrier_gradient(y);
  BlockCollection work = y;
  const int k = y.k();
  double diff2 = 0.0;
  double ref2 = 0.0;
  for (int t = 0; t < y.count(); ++t) {
    for (int a = 0; a < k; ++a) {
      for (int c = a; c < k; ++c) {
        auto bump = [&](double s) {
          work.block(t)(a, c) += s;
          if (a != c) work.block(t)(c, a) += s;
        };
        bump(h);
        const double fp = barrier_value(work);
        bump(-2.0 * h);
        const double fm = barrier_value(work);
        bump(h);
        const double fd = (fp - fm) / (2.0 * h);
        const double exact = a == c ? g.block(t)(a, a) : 2.0 * g.block(t)(a, c);
        diff2 += (fd - exact) * (fd - exact);
        ref2 += exact * exact;
      }
    }
  }
  return std::sqrt(diff2 / ref2);
}

double hessian_rel_error(const BlockCollection& y, const BlockCollection& d, double h) {
  const BlockCollection e = hess_inv_apply(y, d);
  const BlockCollection gp = barrier_gradient(y + h * e);
  const BlockCollection gm = barrier_gradient(y - h * e);
  BlockCollection he = gp - gm;
  he *= 1.0 / (2.0 * h);
  return (he - d).norm() / d.norm();
}

BlockCollection random_direction(const SupportIndexPtr& index, Rng& rng) {
  BlockCollection d(index);
  const int k = index->k();
  for (int t = 0; t < d.count(); ++t) {
    for (int a = 0; a < k; ++a) {
      for (int c = a; c < k; ++c) d.block(t)(a, c) = d.block(t)(c, a) = rng.uniform(-1.0, 1.0);
    }
  }
  return d;
}

}  // namespace

CheckReport finite_difference_suite(int n, int k, int trials, std::uint64_t seed) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  Rng rng(seed);
  CheckReport report{"finite_difference" + suffix(n, k)};
  constexpr double kStep = 1e-5;
  for (int t = 0; t < trials; ++t) {
    const BlockCollection y = random_interior(index, rng);
    const BlockCollection d = random_direction(index, rng);
    const double grad_slack = 1e-6 - gradient_rel_error(y, kStep);
    const double hess_slack = 1e-5 - hessian_rel_error(y, d, kStep);
    report.record(std::min(grad_slack, hess_slack));
  }
  return report;
}

std::vector<double> finite_difference_h_sweep(int n, int k, int trials,
                                              std::uint64_t seed,
                                              const std::vector<double>& steps) {
  const SupportIndexPtr index = enumerate_supports(n, k);
  std::vector<double> worst(steps.size(), 0.0);
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const BlockCollection y = random_interior(index, rng);
    for (std::size_t s = 0; s < steps.size(); ++s) {
      worst[s] = std::max(worst[s], gradient_rel_error(y, steps[s]));
    }
  }
  return worst;
}

}  // namespace fwipm
