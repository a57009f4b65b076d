#include "fwipm/symmat.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwipm/error.h"

namespace fwipm {

SymMat::SymMat(int dim) : dim_(dim) {
  if (dim < 1) {
    throw Error(ErrorCode::kBadDims,
                "matrix dimension must be positive, got " + std::to_string(dim));
  }
  upper_.assign(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0);
}

SymMat SymMat::identity(int dim) {
  SymMat out(dim);
  for (int i = 0; i < dim; ++i) out.set(i, i, 1.0);
  return out;
}

SymMat SymMat::diagonal(std::span<const double> diag) {
  SymMat out(static_cast<int>(diag.size()));
  for (int i = 0; i < out.dim(); ++i) out.set(i, i, diag[i]);
  return out;
}

SymMat SymMat::from_upper(const Eigen::Ref<const Eigen::MatrixXd>& dense) {
  if (dense.rows() != dense.cols()) {
    throw Error(ErrorCode::kDimMismatch, "matrix is not square");
  }
  SymMat out(static_cast<int>(dense.rows()));
  for (int i = 0; i < out.dim(); ++i) {
    for (int j = i; j < out.dim(); ++j) out.set(i, j, dense(i, j));
  }
  return out;
}

Eigen::MatrixXd SymMat::dense() const {
  Eigen::MatrixXd out(dim_, dim_);
  std::size_t t = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j, ++t) {
      out(i, j) = upper_[t];
      out(j, i) = upper_[t];
    }
  }
  return out;
}

double SymMat::frobenius_norm() const { return std::sqrt(frob_inner(*this, *this)); }

double SymMat::trace() const {
  double sum = 0.0;
  for (int i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

SymMat& SymMat::operator+=(const SymMat& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::kDimMismatch, "SymMat +=");
  for (std::size_t t = 0; t < upper_.size(); ++t) upper_[t] += other.upper_[t];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::kDimMismatch, "SymMat -=");
  for (std::size_t t = 0; t < upper_.size(); ++t) upper_[t] -= other.upper_[t];
  return *this;
}

SymMat& SymMat::operator*=(double scale) {
  for (double& v : upper_) v *= scale;
  return *this;
}

std::optional<Eigen::MatrixXd> try_cholesky(
    const Eigen::Ref<const Eigen::MatrixXd>& a) {
  const double max_diag = a.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXd l = llt.matrixL();
  // Pivots are the squared diagonal of L.
  const double tol = kPivotTolerance * max_diag;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) * l(i, i) > tol)) return std::nullopt;
  }
  return l;
}

SymMat psd_sqrt(const SymMat& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.dense());
  const double tol_eig = 1e-10 * x.frobenius_norm();
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -tol_eig) {
    throw Error(ErrorCode::kNotPsd, "minimum eigenvalue " +
                                        std::to_string(lambda.minCoeff()));
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  return SymMat::from_upper(q * lambda.asDiagonal() * q.transpose());
}

double logdet_spd(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  auto l = try_cholesky(x);
  if (!l) throw Error(ErrorCode::kNotPd, "Cholesky pivot not positive");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l->rows(); ++i) sum += std::log((*l)(i, i));
  return 2.0 * sum;
}

double logdet_spd(const SymMat& x) { return logdet_spd(x.dense()); }

Eigen::VectorXd spd_solve(const Eigen::Ref<const Eigen::MatrixXd>& m,
                          const Eigen::Ref<const Eigen::VectorXd>& r) {
  if (m.rows() != m.cols() || m.rows() != r.size()) {
    throw Error(ErrorCode::kDimMismatch, "spd_solve operand sizes");
  }
  auto l = try_cholesky(m);
  if (!l) throw Error(ErrorCode::kSingular, "normal matrix is not positive definite");
  Eigen::VectorXd y = l->triangularView<Eigen::Lower>().solve(r);
  l->transpose().triangularView<Eigen::Upper>().solveInPlace(y);
  return y;
}

double lambda_max_sym(const SymMat& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.dense(),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double lambda_min_sym(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double lambda_min_sym(const SymMat& x) { return lambda_min_sym(x.dense()); }

double frob_inner(const SymMat& x, const SymMat& y) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorCode::kDimMismatch, "frob_inner: " + std::to_string(x.dim()) +
                                             " vs " + std::to_string(y.dim()));
  }
  const auto a = x.packed();
  const auto b = y.packed();
  double diag = 0.0;
  double off = 0.0;
  std::size_t t = 0;
  for (int i = 0; i < x.dim(); ++i) {
    diag += a[t] * b[t];
    ++t;
    for (int j = i + 1; j < x.dim(); ++j, ++t) off += a[t] * b[t];
  }
  return diag + 2.0 * off;
}

SymMat congruence(const SymMat& r, const SymMat& a) {
  if (r.dim() != a.dim()) throw Error(ErrorCode::kDimMismatch, "congruence");
  const Eigen::MatrixXd rd = r.dense();
  return SymMat::from_upper(rd * a.dense() * rd);
}

}  // namespace fwipm
