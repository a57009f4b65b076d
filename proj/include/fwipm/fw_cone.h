#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fwipm/parallel.h"
#include "fwipm/symmat.h"

namespace fwipm {

/// Binomial coefficient C(n, r); 0 when r < 0 or r > n.
long long binomial(int n, int r);

struct CombinatorialConstants {
  long long c_blocks = 0;   // C(n, k)
  long long c_diag = 0;     // C(n-1, k-1): blocks containing a given index
  long long c_offdiag = 0;  // C(n-2, k-2): blocks containing a given pair
  long long theta_fw = 0;   // k * C(n, k), barrier parameter of the product
};

/// All k-subsets of {0, ..., n-1} in lexicographic order.
class SupportIndex {
 public:
  /// Throws BadDims unless 2 <= k <= n and k divides n.
  SupportIndex(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int count() const { return count_; }
  std::span<const int> subset(int t) const {
    return {members_.data() + static_cast<std::size_t>(t) * k_,
            static_cast<std::size_t>(k_)};
  }
  const CombinatorialConstants& constants() const { return constants_; }

  bool operator==(const SupportIndex& other) const {
    return n_ == other.n_ && k_ == other.k_;
  }

 private:
  int n_;
  int k_;
  int count_;
  std::vector<int> members_;
  CombinatorialConstants constants_;
};

using SupportIndexPtr = std::shared_ptr<const SupportIndex>;

SupportIndexPtr enumerate_supports(int n, int k);

/// One symmetric k x k block per subset of the index, stored contiguously
/// (column-major blocks, in subset order).
class BlockCollection {
 public:
  using Block = Eigen::Map<Eigen::MatrixXd>;
  using ConstBlock = Eigen::Map<const Eigen::MatrixXd>;

  /// All-zero collection.
  explicit BlockCollection(SupportIndexPtr index);

  /// Every block equal to scale * I.
  static BlockCollection uniform(SupportIndexPtr index, double scale);
  /// The canonical interior point, blocks I / C(n-1, k-1), with psi() == I.
  static BlockCollection y0(SupportIndexPtr index);

  const SupportIndex& index() const { return *index_; }
  const SupportIndexPtr& index_ptr() const { return index_; }
  int count() const { return index_->count(); }
  int k() const { return index_->k(); }

  Block block(int t) {
    return Block(data_.data() + offset(t), index_->k(), index_->k());
  }
  ConstBlock block(int t) const {
    return ConstBlock(data_.data() + offset(t), index_->k(), index_->k());
  }

  Eigen::Map<Eigen::VectorXd> vec() {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  /// sqrt(sum_J ||Y_J||_F^2).
  double norm() const { return vec().norm(); }

  BlockCollection& operator+=(const BlockCollection& other);
  BlockCollection& operator-=(const BlockCollection& other);
  BlockCollection& operator*=(double scale);

  friend BlockCollection operator+(BlockCollection a, const BlockCollection& b) {
    return a += b;
  }
  friend BlockCollection operator-(BlockCollection a, const BlockCollection& b) {
    return a -= b;
  }
  friend BlockCollection operator*(double s, BlockCollection a) { return a *= s; }

 private:
  std::size_t offset(int t) const {
    return static_cast<std::size_t>(t) * index_->k() * index_->k();
  }
  void require_same_index(const BlockCollection& other) const;

  SupportIndexPtr index_;
  std::vector<double> data_;
};

/// sum_J <X_J, Y_J>.
double inner(const BlockCollection& x, const BlockCollection& y);

/// Sum of the blocks embedded at their subsets.
SymMat psi(const BlockCollection& y);

/// Weighted right inverse of psi: block J = W o X_JJ with weight
/// 1/C(n-1,k-1) on the diagonal and 1/C(n-2,k-2) off it.
BlockCollection psi_dagger(const SymMat& x, SupportIndexPtr index);

/// Adjoint of psi: block J = S_JJ.
BlockCollection restrict_adjoint(const SymMat& s, SupportIndexPtr index);

/// -sum_J log det Y_J. Throws NotInterior if some block is not PD.
double barrier_value(const BlockCollection& y,
                     const BlockExecutor& exec = BlockExecutor::serial());

/// Blocks -Y_J^{-1}.
BlockCollection barrier_gradient(
    const BlockCollection& y, const BlockExecutor& exec = BlockExecutor::serial());

/// Blocks Y_J D_J Y_J.
BlockCollection hess_inv_apply(
    const BlockCollection& y, const BlockCollection& d,
    const BlockExecutor& exec = BlockExecutor::serial());

/// sum_J tr(Y_J^{-1} U_J Y_J^{-1} V_J).
double local_inner(const BlockCollection& y, const BlockCollection& u,
                   const BlockCollection& v,
                   const BlockExecutor& exec = BlockExecutor::serial());

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// sup{s >= 0 : Y - s Z has every block PSD}; kInfinity when unbounded.
double step_to_boundary(const BlockCollection& y, const BlockCollection& z,
                        const BlockExecutor& exec = BlockExecutor::serial());

/// True iff every k x k principal submatrix of s has minimum eigenvalue
/// >= -1e-10 (1 + ||s||_F).
bool dual_membership(const SymMat& s, int k);

/// Lower Cholesky factor of block t; throws NotInterior on failure.
Eigen::MatrixXd block_cholesky(const BlockCollection& y, int t);

}  // namespace fwipm
