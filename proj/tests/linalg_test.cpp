#include "resilock/linalg.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "resilock/admire.hpp"
#include "resilock/error.hpp"
#include "test_util.hpp"

namespace resilock {
namespace {

using testing::random_matrix;
using testing::random_symmetric;

TEST(SymMatrix, RejectsAsymmetricInput) {
  Matrix m(2, 2);
  m << 1, 2, 2.1, 1;
  try {
    SymMatrix s(m);
    FAIL() << "accepted an asymmetric matrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(SymMatrix, SymmetrizesRoundoffAsymmetry) {
  Matrix m(2, 2);
  m << 1, 2, 2 + 1e-13, 1;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(SymEigenvalues, SmallCases) {
  EXPECT_TRUE(sym_eigenvalues(SymMatrix::identity(2)).isApprox(Vector::Ones(2)));
  Matrix d = Vector(Eigen::Vector2d(3, -1)).asDiagonal();
  const Vector ev = sym_eigenvalues(SymMatrix(d));
  EXPECT_DOUBLE_EQ(ev(0), -1.0);
  EXPECT_DOUBLE_EQ(ev(1), 3.0);
}

TEST(SymEigenvalues, CanardLossMinimum) {
  const SystemModel model = admire_model();
  Matrix b = model.bbar.entries().rightCols(3);
  Matrix c = model.bbar.entries().leftCols(1);
  const SymMatrix f(b * b.transpose() - c * c.transpose());
  EXPECT_NEAR(min_eigenvalue(f), 0.51, 0.05);
}

TEST(SymEigen, ReconstructionAndTrace) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    const SymMatrix m(random_symmetric(rng, n));
    const SymEigen e = sym_eigen(m);
    const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((rebuilt - m.matrix()).norm(), 1e-8 * (1.0 + m.matrix().norm()));
    EXPECT_NEAR(e.values.sum(), m.matrix().trace(), 1e-8 * (1.0 + m.matrix().norm()));
    for (int i = 1; i < n; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(IsPositiveDefinite, Basics) {
  EXPECT_TRUE(is_positive_definite(SymMatrix::identity(3)));
  EXPECT_FALSE(is_positive_definite(SymMatrix(Matrix::Zero(3, 3))));
  const SystemModel model = admire_model();
  Matrix b = model.bbar.entries().leftCols(3);
  Matrix c = model.bbar.entries().rightCols(1);
  const SymMatrix f(b * b.transpose() - c * c.transpose());
  EXPECT_FALSE(is_positive_definite(f));
  EXPECT_NEAR(min_eigenvalue(f), -1.0, 0.1);
}

TEST(IsPositiveDefinite, AgreesWithCholeskyAwayFromBoundary) {
  std::mt19937_64 rng(7);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 6;
    // Shift so that roughly half of the samples are definite.
    Matrix m = random_symmetric(rng, n) + 0.8 * std::sqrt(n) * Matrix::Identity(n, n);
    const SymMatrix s(m);
    if (std::abs(min_eigenvalue(s)) < 1e-6) continue;
    EXPECT_EQ(is_positive_definite(s), testing::cholesky_succeeds(m)) << m;
    ++compared;
  }
  EXPECT_GT(compared, 990);
}

TEST(CompactSvd, Examples) {
  Matrix padded = Matrix::Zero(2, 3);
  padded.leftCols(2).setIdentity();
  EXPECT_TRUE(compact_svd(padded).D.isApprox(Vector::Ones(2)));

  Matrix doubled(3, 6);
  doubled << Matrix::Identity(3, 3), Matrix::Identity(3, 3);
  const CompactSvd svd = compact_svd(doubled);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(svd.D(i), std::sqrt(2.0), 1e-12);
}

TEST(CompactSvd, RandomReconstruction) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    const int m = n + static_cast<int>(rng() % (41 - n));
    const Matrix a = random_matrix(rng, n, m);
    const CompactSvd svd = compact_svd(a);
    EXPECT_LE((a - svd.U * svd.D.asDiagonal() * svd.V).norm(), 1e-8 * (1.0 + a.norm()));
    EXPECT_LE((svd.V * svd.V.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE((svd.D.array() >= 0.0).all());
  }
}

TEST(CompactSvd, RejectsWideRowCount) {
  EXPECT_THROW(compact_svd(Matrix::Ones(3, 2)), Error);
}

TEST(MaxSingularValue, Examples) {
  Vector c(3);
  c << 1, -2, 2;
  EXPECT_NEAR(max_singular_value(c), 3.0, 1e-12);
  EXPECT_NEAR(max_singular_value(Matrix::Identity(2, 2)), 1.0, 1e-12);
}

TEST(MaxSingularValue, MatchesPowerIteration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(rng, 4, 2);
    const double oracle = std::sqrt(testing::power_iteration(a.transpose() * a));
    EXPECT_NEAR(max_singular_value(a), oracle, 1e-8);
  }
}

TEST(SolveSpd, Examples) {
  const Vector e1 = Vector::Unit(3, 0);
  EXPECT_TRUE(solve_spd(SymMatrix::identity(3), e1).isApprox(e1));
  Matrix d = Vector(Eigen::Vector2d(2, 4)).asDiagonal();
  EXPECT_TRUE(solve_spd(SymMatrix(d), Vector(Eigen::Vector2d(2, 4))).isApprox(Vector::Ones(2)));
}

TEST(SolveSpd, ResidualOnRandomSpd) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix g = random_matrix(rng, 5, 8);
    const SymMatrix m = SymMatrix::gram(g);
    const Vector rhs = random_matrix(rng, 5, 1);
    const Vector x = solve_spd(m, rhs);
    EXPECT_LE((m.matrix() * x - rhs).norm(), 1e-8 * (1.0 + rhs.norm()));
  }
}

TEST(SolveSpd, RejectsIndefinite) {
  Matrix m = Vector(Eigen::Vector2d(1, -1)).asDiagonal();
  try {
    solve_spd(SymMatrix(m), Vector(Vector::Ones(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(SpdSqrt, Examples) {
  EXPECT_TRUE(spd_sqrt(SymMatrix::identity(3)).matrix().isApprox(Matrix::Identity(3, 3)));
  Matrix d = Vector(Eigen::Vector2d(4, 9)).asDiagonal();
  Matrix expected = Vector(Eigen::Vector2d(2, 3)).asDiagonal();
  EXPECT_LE((spd_sqrt(SymMatrix(d)).matrix() - expected).norm(), 1e-12);
}

TEST(SpdSqrt, SquaresBack) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix m = SymMatrix::gram(random_matrix(rng, 4, 4));
    const Matrix r = spd_sqrt(m).matrix();
    EXPECT_LE((r * r - m.matrix()).norm(), 1e-7 * (1.0 + m.matrix().norm()));
  }
}

TEST(SpdSqrt, ClipsTinyNegativesAndRejectsLargeOnes) {
  Matrix m = Vector(Eigen::Vector2d(1, -5e-11)).asDiagonal();
  EXPECT_NEAR(spd_sqrt(SymMatrix(m))(1, 1), 0.0, 1e-15);
  m(1, 1) = -1e-3;
  try {
    spd_sqrt(SymMatrix(m));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveSemidefinite);
  }
}

TEST(Expm, DiagonalClosedForm) {
  Matrix a = Vector(Eigen::Vector3d(-1, 0.5, 2)).asDiagonal();
  Matrix expected = Vector(Eigen::Vector3d(std::exp(-1.0), std::exp(0.5), std::exp(2.0))).asDiagonal();
  EXPECT_LE((expm(a) - expected).norm(), 1e-12);
}

TEST(Care, ScalarClosedForm) {
  const Matrix a = Matrix::Constant(1, 1, -1.0);
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  const CareSolution sol = solve_care(a, one, one, one);
  EXPECT_NEAR(sol.X(0, 0), std::sqrt(2.0) - 1.0, 1e-12);
  EXPECT_NEAR(sol.K(0, 0), std::sqrt(2.0) - 1.0, 1e-12);
}

TEST(Care, AdmireGainMatchesPublished) {
  const SystemModel model = admire_model();
  const Matrix b = model.bbar.entries().rightCols(3);
  const Matrix k = care_lqr_gain(model.A, b, Matrix::Identity(3, 3), Matrix::Identity(3, 3));
  const Matrix printed = admire_printed_lqr_gain();
  EXPECT_LE((k - printed).cwiseAbs().maxCoeff(), 1e-3) << k;
}

TEST(Care, RandomStableResidual) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = random_matrix(rng, 2, 2);
    a -= (spectral_abscissa(a) + 0.5) * Matrix::Identity(2, 2);
    const Matrix b = random_matrix(rng, 2, 1);
    const Matrix q = Matrix::Identity(2, 2);
    const Matrix r = Matrix::Identity(1, 1);
    const CareSolution sol = solve_care(a, b, q, r);
    const Matrix res = a.transpose() * sol.X + sol.X * a - sol.X * b * r.inverse() * b.transpose() * sol.X + q;
    EXPECT_LE(res.norm(), 1e-6);
    EXPECT_TRUE(is_hurwitz(a - b * sol.K));
  }
}

TEST(Tolerance, RejectsNonPositiveFields) {
  Tolerance tol;
  tol.pd_eps = 0.0;
  EXPECT_THROW(tol.validate(), Error);
}

}  // namespace
}  // namespace resilock
