#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace lurelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// The linear part (A, B, C) of a Lur'e system: A is n x n, B is n x m and
// C is m x n.
class LinearTriple {
 public:
  // Throws DimensionError on inconsistent shapes and ValidationError on
  // non-finite entries.
  LinearTriple(Matrix A, Matrix B, Matrix C);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  int n() const { return static_cast<int>(A_.rows()); }
  int m() const { return static_cast<int>(B_.cols()); }

 private:
  Matrix A_;
  Matrix B_;
  Matrix C_;
};

namespace linalg {

bool all_finite(const Matrix& M);

// Spectral (operator 2-) norm.
double spectral_norm(const Matrix& M);

// Largest relative asymmetry max|M - M^T| / (1 + max|M|).
double asymmetry(const Matrix& M);

Matrix symmetrize(const Matrix& M);

std::vector<std::complex<double>> eigenvalues(const Matrix& M);

// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& M);

// Solves X^T Q + Q X = -W for symmetric Q by Kronecker vectorisation.
// Throws PreconditionError when the operator is (numerically) singular.
Matrix solve_lyapunov(const Matrix& X, const Matrix& W);

// Projection onto the cone {S : S >= floor * I} (floor may be 0).
Matrix project_psd(const Matrix& S, double floor = 0.0);

// Projection onto the cone {S : S <= -ceiling * I}.
Matrix project_nsd(const Matrix& S, double ceiling = 0.0);

}  // namespace linalg
}  // namespace lurelab
