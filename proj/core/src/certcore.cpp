#include "lurelab/certcore.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lurelab {

HurwitzResult hurwitz_check(const Matrix& M, double tol) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw DimensionError("hurwitz_check: matrix must be square and non-empty");
  if (!linalg::all_finite(M)) throw ValidationError("hurwitz_check: non-finite entries");
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& ev : linalg::eigenvalues(M)) abscissa = std::max(abscissa, ev.real());
  return {abscissa < -tol, abscissa};
}

namespace {

using CMatrix = Eigen::MatrixXcd;

int numerical_rank(const Eigen::VectorXd& sv, double threshold) {
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  return r;
}

std::optional<DetectabilityWitness> try_witness(const LinearTriple& t, const Matrix& H,
                                                const char* method) {
  const auto h = hurwitz_check(t.A() - H * t.C());
  if (!h.hurwitz) return std::nullopt;
  return DetectabilityWitness{H, h.abscissa, method};
}

// Output injection on the observable part. With (Co, A11) observable and
// beta > -min Re eig(A11), beta > 0, the solution X > 0 of
//   (A11 + beta I)^T X + X (A11 + beta I) = Co^T Co
// gives Ho = X^{-1} Co^T with (A11 - Ho Co)^T X + X (A11 - Ho Co) = -2 beta X - Co^T Co.
Matrix observable_gain(const LinearTriple& t) {
  const int n = t.n();
  Matrix O(static_cast<Eigen::Index>(t.m()) * n, n);
  Matrix CAk = t.C();
  for (int k = 0; k < n; ++k) {
    O.middleRows(static_cast<Eigen::Index>(k) * t.m(), t.m()) = CAk;
    CAk = CAk * t.A();
  }
  Eigen::JacobiSVD<Matrix> svd(O, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double thr = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  const int r = numerical_rank(sv, thr);
  if (r == 0) return Matrix::Zero(n, t.m());
  const Matrix To = svd.matrixV().leftCols(r);
  const Matrix A11 = To.transpose() * t.A() * To;
  const Matrix Co = t.C() * To;
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& ev : linalg::eigenvalues(A11)) min_re = std::min(min_re, ev.real());
  const double beta = std::max(1.0, 1.0 - min_re);
  const Matrix shifted = -(A11 + beta * Matrix::Identity(r, r));
  const Matrix X = linalg::solve_lyapunov(shifted, Co.transpose() * Co);
  const Matrix Ho = X.ldlt().solve(Co.transpose());
  return To * Ho;
}

}  // namespace

DetectabilityReport detectability_check(const LinearTriple& triple) {
  const int n = triple.n();
  const double scale = 1.0 + linalg::spectral_norm(triple.A()) + linalg::spectral_norm(triple.C());
  DetectabilityReport out;
  for (const auto& lambda : linalg::eigenvalues(triple.A())) {
    if (lambda.real() < -1e-9 * scale) continue;
    CMatrix pencil(n + triple.m(), n);
    pencil.topRows(n) = triple.A().cast<std::complex<double>>() -
                        lambda * CMatrix::Identity(n, n);
    pencil.bottomRows(triple.m()) = triple.C().cast<std::complex<double>>();
    Eigen::JacobiSVD<CMatrix> svd(pencil);
    if (numerical_rank(svd.singularValues(), 1e-9 * scale) < n) out.offending.push_back(lambda);
  }
  if (!out.offending.empty()) {
    std::ostringstream os;
    os << "undetectable: PBH rank test fails at";
    for (const auto& l : out.offending) os << " (" << l.real() << (l.imag() < 0 ? "-" : "+")
                                           << std::abs(l.imag()) << "i)";
    out.message = os.str();
    return out;
  }
  out.witness = try_witness(triple, triple.B(), "H=B");
  if (!out.witness) out.witness = try_witness(triple, observable_gain(triple), "observable-lyapunov");
  if (!out.witness) {
    out.message = "PBH test passed but no stabilising output injection was found";
    return out;
  }
  out.detectable = true;
  out.message = "detectable via " + out.witness->method;
  return out;
}

CertificateP::CertificateP(Matrix P, Strictness strictness, double eps)
    : P_(std::move(P)), strictness_(strictness), eps_(eps) {
  if (P_.rows() != P_.cols() || P_.rows() == 0) throw DimensionError("P must be square");
  if (!linalg::all_finite(P_)) throw ValidationError("P has non-finite entries");
  if (linalg::asymmetry(P_) > 1e-12) throw ValidationError("P is not symmetric");
  if (strictness_ == Strictness::Strict && !(eps_ > 0.0))
    throw ValidationError("strict certificate requires eps > 0");
  const Vector ev = linalg::symmetric_eigenvalues(P_);
  min_eig_ = ev(0);
  max_eig_ = ev(ev.size() - 1);
  if (min_eig_ < -1e-10 * std::max(std::abs(max_eig_), std::abs(min_eig_)))
    throw ValidationError("P is not positive semi-definite (min eigenvalue " +
                          std::to_string(min_eig_) + ")");
}

Matrix lmi_block(const LinearTriple& t, const Matrix& P) {
  if (P.rows() != t.n() || P.cols() != t.n()) throw DimensionError("P must be n x n");
  const int n = t.n();
  const int m = t.m();
  Matrix M = Matrix::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = t.A().transpose() * P + P * t.A();
  M.topRightCorner(n, m) = P * t.B() - t.C().transpose();
  M.bottomLeftCorner(m, n) = M.topRightCorner(n, m).transpose();
  return M;
}

LmiVerdict lmi_verify(const LinearTriple& t, const CertificateP& cert, double rel_tol) {
  const Matrix& P = cert.P();
  const Matrix M = lmi_block(t, P);
  LmiVerdict v;
  const Vector bev = linalg::symmetric_eigenvalues(M);
  v.report = {cert.min_eigenvalue(), cert.max_eigenvalue(), bev(0), bev(bev.size() - 1)};
  v.scale = 1.0 + linalg::spectral_norm(M);
  v.tolerance = rel_tol * v.scale;
  v.coupling_residual = linalg::spectral_norm(P * t.B() - t.C().transpose());
  v.ok = v.report.block_max <= v.tolerance;
  if (cert.strictness() == Strictness::Strict) {
    const Matrix S = M.topLeftCorner(t.n(), t.n()) + cert.eps() * Matrix::Identity(t.n(), t.n());
    v.strict_margin = linalg::symmetric_eigenvalues(S).maxCoeff();
    v.ok = v.ok && v.strict_margin <= v.tolerance && v.coupling_residual <= v.tolerance;
  }
  return v;
}

LmiVerdict lmi_verify(const LinearTriple& t, const Matrix& P, Strictness strictness, double eps,
                      double rel_tol) {
  if (P.rows() != t.n() || P.cols() != t.n()) throw DimensionError("P must be n x n");
  if (linalg::asymmetry(P) > 1e-12) throw ValidationError("P is not symmetric");
  return lmi_verify(t, CertificateP(P, strictness, eps), rel_tol);
}

namespace {

Matrix sym_basis_element(int n, int k) {
  // Enumerates (i, j) with i <= j in row-major order.
  Matrix E = Matrix::Zero(n, n);
  for (int i = 0, idx = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++idx)
      if (idx == k) {
        E(i, j) = 1.0;
        E(j, i) = 1.0;
        return E;
      }
  return E;
}

Vector vec(const Matrix& M) { return Eigen::Map<const Vector>(M.data(), M.size()); }

Matrix unvec(const Vector& v, int rows, int cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace

LmiSearchResult lmi_search(const LinearTriple& t, Strictness strictness,
                           const LmiSearchOptions& options) {
  const int n = t.n();
  const int m = t.m();
  const int s = n * (n + 1) / 2;
  const double eps = strictness == Strictness::Strict ? options.strict_eps : 0.0;
  auto lyap = [&](const Matrix& P) { Matrix S = t.A().transpose() * P + P * t.A(); return S; };

  std::vector<Matrix> basis;
  basis.reserve(s);
  for (int k = 0; k < s; ++k) basis.push_back(sym_basis_element(n, k));

  // Affine constraint P B = C^T in basis coordinates.
  Matrix Mb(n * m, s);
  for (int k = 0; k < s; ++k) Mb.col(k) = vec(basis[k] * t.B());
  const Vector target = vec(t.C().transpose());
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Mb);
  const Vector pp = cod.solve(target);
  LmiSearchResult out;
  const double coupling_err = (Mb * pp - target).norm();
  if (coupling_err > 1e-10 * (1.0 + target.norm())) {
    out.residual = coupling_err;
    out.message = "infeasible: P B = C^T has no symmetric solution";
    return out;
  }
  Matrix Pp = Matrix::Zero(n, n);
  for (int k = 0; k < s; ++k) Pp += pp(k) * basis[k];

  Eigen::JacobiSVD<Matrix> svd(Mb, Eigen::ComputeFullV);
  const double thr = 1e-10 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++rank;
  const Matrix N = svd.matrixV().rightCols(s - rank);
  const int k_dim = static_cast<int>(N.cols());

  // Lifted affine set {(P(y), S(y))}, both blocks in full vec form.
  std::vector<Matrix> Pn(k_dim);
  Matrix G(2 * n * n, k_dim);
  for (int j = 0; j < k_dim; ++j) {
    Pn[j] = Matrix::Zero(n, n);
    for (int k = 0; k < s; ++k) Pn[j] += N(k, j) * basis[k];
    G.col(j) << vec(Pn[j]), vec(lyap(Pn[j]));
  }
  Vector g0(2 * n * n);
  g0 << vec(Pp), vec(lyap(Pp));
  // With k_dim == 0 the coupling fixes P and there is nothing to project.
  Eigen::ColPivHouseholderQR<Matrix> qr;
  if (k_dim > 0) qr.compute(G);

  auto affine_point = [&](const Vector& y) { return Vector(g0 + G * y); };
  auto split = [&](const Vector& z, Matrix& P, Matrix& S) {
    P = linalg::symmetrize(unvec(z.head(n * n), n, n));
    S = linalg::symmetrize(unvec(z.tail(n * n), n, n));
  };
  auto residual_of = [&](const Matrix& P, const Matrix& S) {
    const double smax = linalg::symmetric_eigenvalues(S).maxCoeff() + eps;
    const double pmin = linalg::symmetric_eigenvalues(P).minCoeff();
    const double scale = 1.0 + linalg::spectral_norm(S);
    return std::max({smax, -pmin, 0.0}) / scale;
  };

  Vector y = Vector::Zero(k_dim);
  Vector z = affine_point(y);
  Matrix P, S;
  split(z, P, S);
  double res = residual_of(P, S);
  double checkpoint = res;
  int it = 0;
  for (; it < options.max_iterations && res > 0.5 * options.tolerance; ++it) {
    if (k_dim == 0) break;
    const Matrix Pc = linalg::project_psd(P);
    const Matrix Sc = linalg::project_nsd(S, eps);
    Vector zc(2 * n * n);
    zc << vec(Pc), vec(Sc);
    y = qr.solve(Vector(zc - g0));
    z = affine_point(y);
    split(z, P, S);
    res = residual_of(P, S);
    if ((it + 1) % 1000 == 0) {
      if (res > 0.999 * checkpoint) break;
      checkpoint = res;
    }
  }
  out.iterations = it;
  out.residual = res;
  if (res <= 0.5 * options.tolerance) {
    try {
      CertificateP cert(linalg::symmetrize(P), strictness, strictness == Strictness::Strict ? eps : 0.0);
      if (lmi_verify(t, cert).ok) {
        out.feasible = true;
        out.certificate = std::move(cert);
        out.message = "feasible";
        return out;
      }
    } catch (const ValidationError&) {
    }
  }
  out.message = it >= options.max_iterations ? "infeasible-or-unknown: iteration cap reached"
                                             : "infeasible-or-unknown: projections stalled";
  return out;
}

QCertificate construct_Q(const LinearTriple& t, const DetectabilityWitness& witness) {
  if (witness.H.rows() != t.n() || witness.H.cols() != t.m())
    throw DimensionError("witness H must be n x m");
  const Matrix X = t.A() - witness.H * t.C();
  if (!hurwitz_check(X).hurwitz) throw PreconditionError("construct_Q: A - HC is not Hurwitz");
  const Matrix I = Matrix::Identity(t.n(), t.n());
  const Matrix Q0 = linalg::solve_lyapunov(X, I);
  const double kappa = std::max({linalg::spectral_norm(witness.H), linalg::spectral_norm(t.B()), 1.0});
  QCertificate q;
  q.Q = Q0 / (2.0 * linalg::spectral_norm(Q0) * kappa);
  q.delta = linalg::symmetric_eigenvalues(-(X.transpose() * q.Q + q.Q * X)).minCoeff();
  const Vector ev = linalg::symmetric_eigenvalues(q.Q);
  q.q1 = ev(0);
  q.q2 = ev(ev.size() - 1);
  q.H = witness.H;
  if (!(q.q1 > 0.0) || !(q.delta > 0.0))
    throw PreconditionError("construct_Q: Lyapunov solution is not positive definite");
  return q;
}

SampledInequality check_detectable_lyapunov(const LinearTriple& t, const QCertificate& q,
                                            int samples, double half_width, std::uint64_t seed) {
  Rng rng(seed);
  SampledInequality out;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const Vector z = rng.in_box(t.n(), half_width);
    const Vector u = rng.in_box(t.m(), half_width);
    const Vector w = rng.in_box(t.m(), half_width);
    const double lhs = 2.0 * (q.Q * z).dot(t.A() * z - t.B() * (w - u));
    const double rhs = -q.delta * z.squaredNorm() +
                       z.norm() * ((t.C() * z).norm() + w.norm() + u.norm());
    const double gap = lhs - rhs;
    if (gap > out.worst) {
      out.worst = gap;
      out.worst_z = z;
    }
    if (gap > 1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs))) out.pass = false;
  }
  return out;
}

ScalarFunc compose_eta(const ScalarFunc& beta1, const ScalarFunc& beta2, const ScalarFunc& beta3,
                       double mu) {
  if (!(mu >= 0.0)) throw ValidationError("compose_eta: mu must be nonnegative");
  const double top = std::max(mu, 1.0);
  const auto grid = log_grid(1e-6 * top, 1e3 * top, 200);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(beta1(grid[i]) > beta1(grid[i - 1])))
      throw ValidationError("compose_eta: beta1 is not strictly increasing near s=" +
                            std::to_string(grid[i]));
  if (mu == 0.0) return ScalarFunc::identity();
  const double denom = beta2(mu);
  if (!(denom > 0.0)) throw ValidationError("compose_eta: beta2(mu) must be positive");
  return ScalarFunc::custom(
      [beta1, beta3, denom](double s) { return beta3(beta1.inverse(s)) / denom; },
      FuncClass::KInfinity, "eta");
}

double eta_bound_violation(const ScalarFunc& eta, const ScalarFunc& beta1, const ScalarFunc& beta2,
                           const ScalarFunc& beta3, double mu, int grid_points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double s : linear_grid(0.0, mu, grid_points))
    worst = std::max(worst, eta(beta1(s)) * beta2(s) - beta3(s));
  return worst;
}

}  // namespace lurelab
