#include "fwipm/fw_cone.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwipm/error.h"

namespace fwipm {

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  long long out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

SupportIndex::SupportIndex(int n, int k) : n_(n), k_(k) {
  if (k < 2 || k > n || n % k != 0) {
    throw Error(ErrorCode::kBadDims, "invalid block size k=" + std::to_string(k) +
                                         " for n=" + std::to_string(n) +
                                         " (need 2 <= k <= n, k | n)");
  }
  constants_.c_blocks = binomial(n, k);
  constants_.c_diag = binomial(n - 1, k - 1);
  constants_.c_offdiag = binomial(n - 2, k - 2);
  constants_.theta_fw = k * constants_.c_blocks;
  count_ = static_cast<int>(constants_.c_blocks);

  members_.reserve(static_cast<std::size_t>(count_) * k);
  std::vector<int> current(k);
  for (int i = 0; i < k; ++i) current[i] = i;
  while (true) {
    members_.insert(members_.end(), current.begin(), current.end());
    int pos = k - 1;
    while (pos >= 0 && current[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int i = pos + 1; i < k; ++i) current[i] = current[i - 1] + 1;
  }
}

SupportIndexPtr enumerate_supports(int n, int k) {
  return std::make_shared<const SupportIndex>(n, k);
}

BlockCollection::BlockCollection(SupportIndexPtr index) : index_(std::move(index)) {
  data_.assign(static_cast<std::size_t>(index_->count()) * index_->k() * index_->k(),
               0.0);
}

BlockCollection BlockCollection::uniform(SupportIndexPtr index, double scale) {
  BlockCollection out(std::move(index));
  for (int t = 0; t < out.count(); ++t) {
    out.block(t).diagonal().setConstant(scale);
  }
  return out;
}

BlockCollection BlockCollection::y0(SupportIndexPtr index) {
  const double c = static_cast<double>(index->constants().c_diag);
  return uniform(std::move(index), 1.0 / c);
}

void BlockCollection::require_same_index(const BlockCollection& other) const {
  if (!(*index_ == *other.index_)) {
    throw Error(ErrorCode::kDimMismatch, "block collections over different indices");
  }
}

BlockCollection& BlockCollection::operator+=(const BlockCollection& other) {
  require_same_index(other);
  vec() += other.vec();
  return *this;
}

BlockCollection& BlockCollection::operator-=(const BlockCollection& other) {
  require_same_index(other);
  vec() -= other.vec();
  return *this;
}

BlockCollection& BlockCollection::operator*=(double scale) {
  vec() *= scale;
  return *this;
}

double inner(const BlockCollection& x, const BlockCollection& y) {
  if (!(x.index() == y.index())) {
    throw Error(ErrorCode::kDimMismatch, "inner: different indices");
  }
  return x.vec().dot(y.vec());
}

SymMat psi(const BlockCollection& y) {
  const SupportIndex& index = y.index();
  const int n = index.n();
  const int k = index.k();
  // Neumaier summation: an entry receives up to C(n-1,k-1) addends.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < index.count(); ++t) {
    const auto members = index.subset(t);
    const auto b = y.block(t);
    for (int a = 0; a < k; ++a) {
      for (int c = a; c < k; ++c) {
        const double v = b(a, c);
        double& s = sum(members[a], members[c]);
        const double next = s + v;
        if (std::abs(s) >= std::abs(v)) {
          comp(members[a], members[c]) += (s - next) + v;
        } else {
          comp(members[a], members[c]) += (v - next) + s;
        }
        s = next;
      }
    }
  }
  SymMat out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out.set(i, j, sum(i, j) + comp(i, j));
  }
  return out;
}

namespace {

void require_dim(const SymMat& x, const SupportIndex& index, const char* what) {
  if (x.dim() != index.n()) {
    throw Error(ErrorCode::kBadDims, std::string(what) + ": matrix dimension " +
                                         std::to_string(x.dim()) + " vs index n=" +
                                         std::to_string(index.n()));
  }
}

}  // namespace

BlockCollection psi_dagger(const SymMat& x, SupportIndexPtr index) {
  require_dim(x, *index, "psi_dagger");
  const CombinatorialConstants& cc = index->constants();
  const double w_diag = 1.0 / static_cast<double>(cc.c_diag);
  const double w_off = 1.0 / static_cast<double>(cc.c_offdiag);
  BlockCollection out(index);
  const int k = index->k();
  for (int t = 0; t < out.count(); ++t) {
    const auto members = index->subset(t);
    auto b = out.block(t);
    for (int a = 0; a < k; ++a) {
      b(a, a) = x(members[a], members[a]) * w_diag;
      for (int c = a + 1; c < k; ++c) {
        b(a, c) = b(c, a) = x(members[a], members[c]) * w_off;
      }
    }
  }
  return out;
}

BlockCollection restrict_adjoint(const SymMat& s, SupportIndexPtr index) {
  require_dim(s, *index, "restrict_adjoint");
  BlockCollection out(index);
  const int k = index->k();
  for (int t = 0; t < out.count(); ++t) {
    const auto members = index->subset(t);
    auto b = out.block(t);
    for (int a = 0; a < k; ++a) {
      for (int c = a; c < k; ++c) b(a, c) = b(c, a) = s(members[a], members[c]);
    }
  }
  return out;
}

Eigen::MatrixXd block_cholesky(const BlockCollection& y, int t) {
  auto l = try_cholesky(y.block(t));
  if (!l) {
    throw Error(ErrorCode::kNotInterior,
                "block " + std::to_string(t) + " is not positive definite");
  }
  return *std::move(l);
}

double barrier_value(const BlockCollection& y, const BlockExecutor& exec) {
  return -exec.sum(y.count(), [&](int t) {
    const Eigen::MatrixXd l = block_cholesky(y, t);
    return 2.0 * l.diagonal().array().log().sum();
  });
}

BlockCollection barrier_gradient(const BlockCollection& y, const BlockExecutor& exec) {
  BlockCollection out(y.index_ptr());
  const int k = y.k();
  exec.for_each(y.count(), [&](int t) {
    const Eigen::MatrixXd l = block_cholesky(y, t);
    Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(k, k);
    l.triangularView<Eigen::Lower>().solveInPlace(inv);
    l.triangularView<Eigen::Lower>().transpose().solveInPlace(inv);
    auto b = out.block(t);
    b = -0.5 * (inv + inv.transpose());
  });
  return out;
}

BlockCollection hess_inv_apply(const BlockCollection& y, const BlockCollection& d,
                               const BlockExecutor& exec) {
  if (!(y.index() == d.index())) {
    throw Error(ErrorCode::kDimMismatch, "hess_inv_apply: different indices");
  }
  BlockCollection out(y.index_ptr());
  exec.for_each(y.count(), [&](int t) {
    block_cholesky(y, t);
    const Eigen::MatrixXd p = y.block(t) * d.block(t) * y.block(t);
    out.block(t) = 0.5 * (p + p.transpose());
  });
  return out;
}

double local_inner(const BlockCollection& y, const BlockCollection& u,
                   const BlockCollection& v, const BlockExecutor& exec) {
  if (!(y.index() == u.index()) || !(y.index() == v.index())) {
    throw Error(ErrorCode::kDimMismatch, "local_inner: different indices");
  }
  return exec.sum(y.count(), [&](int t) {
    // With Y = L L^T, tr(Y^-1 U Y^-1 V) = <L^-1 U L^-T, L^-1 V L^-T>.
    const Eigen::MatrixXd l = block_cholesky(y, t);
    const auto tri = l.triangularView<Eigen::Lower>();
    Eigen::MatrixXd wu = tri.solve(Eigen::MatrixXd(u.block(t)));
    wu = tri.solve(Eigen::MatrixXd(wu.transpose()));
    Eigen::MatrixXd wv = tri.solve(Eigen::MatrixXd(v.block(t)));
    wv = tri.solve(Eigen::MatrixXd(wv.transpose()));
    return (wu.array() * wv.array()).sum();
  });
}

double step_to_boundary(const BlockCollection& y, const BlockCollection& z,
                        const BlockExecutor& exec) {
  if (!(y.index() == z.index())) {
    throw Error(ErrorCode::kDimMismatch, "step_to_boundary: different indices");
  }
  std::vector<double> steps(y.count());
  exec.for_each(y.count(), [&](int t) {
    const Eigen::MatrixXd l = block_cholesky(y, t);
    const auto tri = l.triangularView<Eigen::Lower>();
    Eigen::MatrixXd w = tri.solve(Eigen::MatrixXd(z.block(t)));
    w = tri.solve(Eigen::MatrixXd(w.transpose()));
    w = 0.5 * (w + w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    steps[t] = lmax > 0.0 ? 1.0 / lmax : kInfinity;
  });
  return *std::min_element(steps.begin(), steps.end());
}

bool dual_membership(const SymMat& s, int k) {
  const SupportIndex index(s.dim(), k);
  const double tol = 1e-10 * (1.0 + s.frobenius_norm());
  Eigen::MatrixXd sub(k, k);
  for (int t = 0; t < index.count(); ++t) {
    const auto members = index.subset(t);
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) sub(a, c) = s(members[a], members[c]);
    }
    if (lambda_min_sym(sub) < -tol) return false;
  }
  return true;
}

}  // namespace fwipm
