#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fwipm {

/// Dense symmetric n x n matrix. Only the upper triangle is stored (row-major),
/// so symmetry holds by construction.
class SymMat {
 public:
  explicit SymMat(int dim);

  static SymMat identity(int dim);
  static SymMat diagonal(std::span<const double> diag);
  /// Reads the upper triangle of `dense`; the lower triangle is ignored.
  static SymMat from_upper(const Eigen::Ref<const Eigen::MatrixXd>& dense);

  int dim() const { return dim_; }

  double operator()(int i, int j) const { return upper_[offset(i, j)]; }
  void set(int i, int j, double value) { upper_[offset(i, j)] = value; }
  void add(int i, int j, double value) { upper_[offset(i, j)] += value; }

  std::span<const double> packed() const { return upper_; }
  std::span<double> packed() { return upper_; }

  Eigen::MatrixXd dense() const;
  double frobenius_norm() const;
  double trace() const;

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double scale);

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }
  friend SymMat operator*(SymMat a, double s) { return a *= s; }

  bool operator==(const SymMat& other) const = default;

 private:
  std::size_t offset(int i, int j) const {
    if (i > j) std::swap(i, j);
    const long long row = i;
    return static_cast<std::size_t>(row * dim_ - row * (row - 1) / 2 + (j - i));
  }

  int dim_;
  std::vector<double> upper_;
};

// Relative pivot tolerance shared by every Cholesky-based test in the library.
inline constexpr double kPivotTolerance = 1e-14;

/// Lower Cholesky factor of a symmetric matrix, or nullopt when a pivot is
/// <= kPivotTolerance * max diagonal.
std::optional<Eigen::MatrixXd> try_cholesky(
    const Eigen::Ref<const Eigen::MatrixXd>& a);

SymMat psd_sqrt(const SymMat& x);

double logdet_spd(const SymMat& x);
/// Same as logdet_spd for a dense symmetric matrix (used on k x k blocks).
double logdet_spd(const Eigen::Ref<const Eigen::MatrixXd>& x);

Eigen::VectorXd spd_solve(const Eigen::Ref<const Eigen::MatrixXd>& m,
                          const Eigen::Ref<const Eigen::VectorXd>& r);

double lambda_max_sym(const SymMat& x);
double lambda_min_sym(const SymMat& x);
double lambda_min_sym(const Eigen::Ref<const Eigen::MatrixXd>& x);

double frob_inner(const SymMat& x, const SymMat& y);

/// r * a * r for symmetric r (the rescaling congruence).
SymMat congruence(const SymMat& r, const SymMat& a);

}  // namespace fwipm
