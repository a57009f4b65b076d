#include "fwipm/symmat.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fwipm/error.h"
#include "fwipm/random.h"
#include "test_util.h"

namespace fwipm {
namespace {

using test::CodeOf;

SymMat RandomSymmetric(int n, Rng& rng) {
  SymMat x(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) x.set(i, j, rng.uniform(-1.0, 1.0));
  }
  return x;
}

// G^T G + shift I for a random G.
Eigen::MatrixXd RandomSpd(int n, Rng& rng, double shift = 0.1) {
  Eigen::MatrixXd g(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) g(r, c) = rng.uniform(-1.0, 1.0);
  }
  return g.transpose() * g + shift * Eigen::MatrixXd::Identity(n, n);
}

TEST(SymMatTest, StorageIsSymmetric) {
  SymMat x(3);
  x.set(2, 0, 5.0);
  EXPECT_EQ(x(0, 2), 5.0);
  EXPECT_EQ(x(2, 0), 5.0);
  x.add(0, 2, 1.0);
  EXPECT_EQ(x(2, 0), 6.0);
  EXPECT_EQ(x.packed().size(), 6u);
  const Eigen::MatrixXd d = x.dense();
  EXPECT_EQ(d, d.transpose());
}

TEST(SymMatTest, RejectsEmptyDimension) {
  EXPECT_EQ(CodeOf([] { SymMat x(0); }), ErrorCode::kBadDims);
}

TEST(SymMatTest, FromUpperIgnoresLowerTriangle) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 99, 3;
  const SymMat x = SymMat::from_upper(m);
  EXPECT_EQ(x(1, 0), 2.0);
}

TEST(PsdSqrtTest, Diagonal) {
  const std::vector<double> d = {4.0, 9.0};
  const SymMat r = psd_sqrt(SymMat::diagonal(d));
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-14);
}

TEST(PsdSqrtTest, Identity) {
  const SymMat r = psd_sqrt(SymMat::identity(5));
  EXPECT_LE((r - SymMat::identity(5)).frobenius_norm(), 1e-14);
}

TEST(PsdSqrtTest, TwoByTwoMatchesClosedFormSpectralRoot) {
  // [[2,1],[1,2]] has eigenpairs (3, (1,1)/sqrt2) and (1, (1,-1)/sqrt2).
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const SymMat r = psd_sqrt(SymMat::from_upper(m));
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(r(0, 0), (s3 + 1.0) / 2.0, 1e-14);
  EXPECT_NEAR(r(0, 1), (s3 - 1.0) / 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), (s3 + 1.0) / 2.0, 1e-14);
}

TEST(PsdSqrtTest, SquaresBackOnRandomPsd) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const SymMat x = SymMat::from_upper(RandomSpd(n, rng, trial % 2 ? 0.0 : 0.1));
    const SymMat r = psd_sqrt(x);
    const Eigen::MatrixXd rd = r.dense();
    const double err = (rd * rd - x.dense()).norm();
    EXPECT_LE(err, 1e-10 * (1.0 + x.frobenius_norm()));
    EXPECT_GE(lambda_min_sym(r), -1e-12);
  }
}

TEST(PsdSqrtTest, ClampsTinyNegativeEigenvalues) {
  const std::vector<double> d = {1.0, -1e-12};
  const SymMat r = psd_sqrt(SymMat::diagonal(d));
  EXPECT_EQ(r(1, 1), 0.0);
}

TEST(PsdSqrtTest, RejectsIndefinite) {
  const std::vector<double> d = {1.0, -1.0};
  EXPECT_EQ(CodeOf([&] { psd_sqrt(SymMat::diagonal(d)); }), ErrorCode::kNotPsd);
}

TEST(LogdetTest, Examples) {
  EXPECT_DOUBLE_EQ(logdet_spd(SymMat::identity(4)), 0.0);
  const std::vector<double> d = {2.0, 8.0};
  EXPECT_NEAR(logdet_spd(SymMat::diagonal(d)), std::log(16.0), 1e-14);
  EXPECT_NEAR(logdet_spd(SymMat::diagonal(d)), 2.772588722, 1e-9);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_EQ(CodeOf([&] { logdet_spd(SymMat::from_upper(m)); }), ErrorCode::kNotPd);
}

TEST(LogdetTest, MatchesEigenvalueProduct) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 12;
    const Eigen::MatrixXd m = RandomSpd(n, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const double expected = eig.eigenvalues().array().log().sum();
    EXPECT_NEAR(logdet_spd(SymMat::from_upper(m)), expected,
                1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(SpdSolveTest, Examples) {
  Eigen::VectorXd r(2);
  r << 3, 4;
  const Eigen::VectorXd y = spd_solve(Eigen::MatrixXd::Identity(2, 2), r);
  EXPECT_EQ(y, r);
  Eigen::MatrixXd m = Eigen::Vector2d(2, 4).asDiagonal();
  r << 2, 4;
  const Eigen::VectorXd z = spd_solve(m, r);
  EXPECT_NEAR(z(0), 1.0, 1e-15);
  EXPECT_NEAR(z(1), 1.0, 1e-15);
}

TEST(SpdSolveTest, ResidualBoundOnRandomSystems) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 20;
    const Eigen::MatrixXd m = RandomSpd(n, rng);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd y = spd_solve(m, r);
    EXPECT_LE((m * y - r).norm(), 1e-10 * (1.0 + r.norm())) << "n=" << n;
  }
}

TEST(SpdSolveTest, SingularMatrix) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 1, 1;
  EXPECT_EQ(CodeOf([&] { spd_solve(m, Eigen::Vector2d(1, 1)); }), ErrorCode::kSingular);
}

TEST(SpdSolveTest, SizeMismatch) {
  EXPECT_EQ(CodeOf([] {
              spd_solve(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector3d(1, 1, 1));
            }),
            ErrorCode::kDimMismatch);
}

TEST(LambdaMaxTest, Examples) {
  const std::vector<double> d = {1.0, 5.0};
  EXPECT_NEAR(lambda_max_sym(SymMat::diagonal(d)), 5.0, 1e-14);
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  EXPECT_NEAR(lambda_max_sym(SymMat::from_upper(m)), 1.0, 1e-14);
  EXPECT_NEAR(lambda_min_sym(SymMat::from_upper(m)), -1.0, 1e-14);
}

TEST(LambdaMaxTest, AgreesWithNonsymmetricEigensolver) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMat x = RandomSymmetric(6, rng);
    // The general (Hessenberg QR) solver is an independent route.
    Eigen::EigenSolver<Eigen::MatrixXd> general(x.dense(), false);
    const double expected = general.eigenvalues().real().maxCoeff();
    EXPECT_NEAR(lambda_max_sym(x), expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(FrobInnerTest, Examples) {
  EXPECT_DOUBLE_EQ(frob_inner(SymMat::identity(7), SymMat::identity(7)), 7.0);
  Rng rng(1);
  const SymMat x = RandomSymmetric(4, rng);
  EXPECT_EQ(frob_inner(x, SymMat(4)), 0.0);
  EXPECT_EQ(CodeOf([] { frob_inner(SymMat(2), SymMat(3)); }), ErrorCode::kDimMismatch);
}

TEST(FrobInnerTest, MatchesElementwiseSumAndIsBilinear) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 9;
    const SymMat x = RandomSymmetric(n, rng);
    const SymMat y = RandomSymmetric(n, rng);
    const SymMat z = RandomSymmetric(n, rng);
    const double a = rng.uniform(-2.0, 2.0);
    const double expected = (x.dense().array() * y.dense().array()).sum();
    EXPECT_NEAR(frob_inner(x, y), expected, 1e-12);
    EXPECT_NEAR(frob_inner(x, y), frob_inner(y, x), 1e-12);
    EXPECT_NEAR(frob_inner(a * x + z, y), a * frob_inner(x, y) + frob_inner(z, y), 1e-12);
  }
}

TEST(CongruenceTest, MatchesDenseProduct) {
  Rng rng(4);
  const SymMat r = RandomSymmetric(5, rng);
  const SymMat a = RandomSymmetric(5, rng);
  const Eigen::MatrixXd expected = r.dense() * a.dense() * r.dense();
  EXPECT_LE((congruence(r, a).dense() - expected).norm(), 1e-13);
}

}  // namespace
}  // namespace fwipm
