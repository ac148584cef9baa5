#include "lurelab/linear.hpp"

#include "lurelab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace lurelab {

namespace {

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

}  // namespace

LinearTriple::LinearTriple(Matrix A, Matrix B, Matrix C)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  if (A_.rows() == 0 || A_.rows() != A_.cols())
    throw DimensionError("A must be square and non-empty, got " + shape(A_));
  if (B_.rows() != A_.rows() || B_.cols() == 0)
    throw DimensionError("B must be n x m, got " + shape(B_));
  if (C_.rows() != B_.cols() || C_.cols() != A_.rows())
    throw DimensionError("C must be m x n, got " + shape(C_));
  if (!linalg::all_finite(A_) || !linalg::all_finite(B_) || !linalg::all_finite(C_))
    throw ValidationError("triple has non-finite entries");
}

namespace linalg {

bool all_finite(const Matrix& M) { return M.allFinite(); }

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double asymmetry(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("asymmetry of non-square matrix");
  if (M.size() == 0) return 0.0;
  return (M - M.transpose()).cwiseAbs().maxCoeff() / (1.0 + M.cwiseAbs().maxCoeff());
}

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

std::vector<std::complex<double>> eigenvalues(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("eigenvalues of non-square matrix " + shape(M));
  Eigen::EigenSolver<Matrix> es(M, false);
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Vector symmetric_eigenvalues(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("eigenvalues of non-square matrix " + shape(M));
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix solve_lyapunov(const Matrix& X, const Matrix& W) {
  const Eigen::Index n = X.rows();
  if (X.cols() != n || W.rows() != n || W.cols() != n)
    throw DimensionError("solve_lyapunov: shapes " + shape(X) + ", " + shape(W));
  // vec(X^T Q + Q X) = (I kron X^T + X^T kron I) vec(Q)
  const Matrix I = Matrix::Identity(n, n);
  const Matrix Xt = X.transpose();
  Matrix K = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * Xt;
      K.block(i * n, j * n, n, n) += Xt(i, j) * I;
    }
  Eigen::FullPivLU<Matrix> lu(K);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw PreconditionError("Lyapunov operator is singular (eigenvalues of X sum to zero)");
  const Vector rhs = -Eigen::Map<const Vector>(W.data(), n * n);
  const Vector q = lu.solve(rhs);
  return symmetrize(Eigen::Map<const Matrix>(q.data(), n, n));
}

Matrix project_psd(const Matrix& S, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  const Vector d = es.eigenvalues().cwiseMax(floor);
  return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

Matrix project_nsd(const Matrix& S, double ceiling) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  const Vector d = es.eigenvalues().cwiseMin(-ceiling);
  return symmetrize(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace linalg
}  // namespace lurelab
