#include "lurelab/errors.hpp"
#include "lurelab/linear.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace lurelab;

TEST(LinearTriple, RejectsInconsistentShapes) {
  EXPECT_THROW(LinearTriple(Matrix::Zero(2, 3), Matrix::Zero(2, 1), Matrix::Zero(1, 2)), DimensionError);
  EXPECT_THROW(LinearTriple(Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(1, 2)), DimensionError);
  EXPECT_THROW(LinearTriple(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 2)), DimensionError);
}

TEST(LinearTriple, RejectsNonFiniteEntries) {
  Matrix A = Matrix::Zero(1, 1);
  A(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(LinearTriple(A, Matrix::Ones(1, 1), Matrix::Ones(1, 1)), ValidationError);
}

TEST(LinearTriple, ReportsDimensions) {
  const LinearTriple t(Matrix::Zero(4, 4), Matrix::Zero(4, 2), Matrix::Zero(2, 4));
  EXPECT_EQ(t.n(), 4);
  EXPECT_EQ(t.m(), 2);
}

TEST(Linalg, SpectralNormOfDiagonal) {
  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << 1.0, -5.0, 2.0;
  EXPECT_NEAR(linalg::spectral_norm(D), 5.0, 1e-12);
}

TEST(Linalg, LyapunovSolutionSatisfiesEquation) {
  oracle::Gen g(7);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix X = g.matrix(4, 4, 1.0) - 3.0 * Matrix::Identity(4, 4);
    const Matrix W = Matrix::Identity(4, 4);
    const Matrix Q = linalg::solve_lyapunov(X, W);
    EXPECT_LT((X.transpose() * Q + Q * X + W).norm(), 1e-9 * (1.0 + Q.norm()));
    EXPECT_LT(linalg::asymmetry(Q), 1e-12);
  }
}

TEST(Linalg, LyapunovSingularOperatorThrows) {
  // Eigenvalues +1 and -1 sum to zero, so X^T Q + Q X is singular.
  Matrix X(2, 2);
  X << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(linalg::solve_lyapunov(X, Matrix::Identity(2, 2)), PreconditionError);
}

TEST(Linalg, ConeProjectionsLandInTheirCones) {
  oracle::Gen g(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix S = linalg::symmetrize(g.matrix(5, 5, 2.0));
    const Matrix Pp = linalg::project_psd(S, 0.1);
    const Matrix Pn = linalg::project_nsd(S, 0.1);
    EXPECT_GE(linalg::symmetric_eigenvalues(Pp).minCoeff(), 0.1 - 1e-12);
    EXPECT_LE(linalg::symmetric_eigenvalues(Pn).maxCoeff(), -0.1 + 1e-12);
  }
}

TEST(Linalg, ProjectionFixesMembers) {
  const Matrix S = 2.0 * Matrix::Identity(3, 3);
  EXPECT_LT((linalg::project_psd(S) - S).norm(), 1e-14);
}
