#pragma once

#include "lurelab/comparison.hpp"
#include "lurelab/linear.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lurelab {

struct HurwitzResult {
  bool hurwitz = false;
  double abscissa = 0.0;
};

// True iff every eigenvalue has real part < -tol.
HurwitzResult hurwitz_check(const Matrix& M, double tol = 1e-9);

struct DetectabilityWitness {
  Matrix H;
  double spectral_abscissa = 0.0;
  std::string method;  // "H=B" or "observable-lyapunov"
};

struct DetectabilityReport {
  bool detectable = false;
  std::optional<DetectabilityWitness> witness;
  // Eigenvalues of A with Re >= 0 that fail the PBH rank test.
  std::vector<std::complex<double>> offending;
  std::string message;
};

DetectabilityReport detectability_check(const LinearTriple& triple);

enum class Strictness { SemiDefinite, Strict };

struct EigenReport {
  double P_min = 0.0;
  double P_max = 0.0;
  double block_min = 0.0;
  double block_max = 0.0;
};

// Symmetric positive semi-definite P for the passivity LMI. Throws
// ValidationError when P is asymmetric (relative 1e-12) or indefinite
// (min eigenvalue below -1e-10 * ||P||).
class CertificateP {
 public:
  explicit CertificateP(Matrix P, Strictness strictness = Strictness::SemiDefinite,
                        double eps = 0.0);

  const Matrix& P() const { return P_; }
  Strictness strictness() const { return strictness_; }
  double eps() const { return eps_; }
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }

 private:
  Matrix P_;
  Strictness strictness_;
  double eps_;
  double min_eig_;
  double max_eig_;
};

// [[A^T P + P A, P B - C^T], [B^T P - C, 0]]
Matrix lmi_block(const LinearTriple& triple, const Matrix& P);

struct LmiVerdict {
  bool ok = false;
  EigenReport report;
  double scale = 1.0;       // 1 + ||block||
  double tolerance = 0.0;   // absolute threshold actually applied
  double coupling_residual = 0.0;  // ||P B - C^T||
  double strict_margin = 0.0;      // max eig of A^T P + P A + eps I (strict only)
};

// Semi-definite: max eig(block) <= rel_tol * scale. Strict additionally
// requires A^T P + P A + eps I <= 0 and P B = C^T, each within the same
// threshold.
LmiVerdict lmi_verify(const LinearTriple& triple, const CertificateP& cert, double rel_tol = 1e-9);
LmiVerdict lmi_verify(const LinearTriple& triple, const Matrix& P,
                      Strictness strictness = Strictness::SemiDefinite, double eps = 0.0,
                      double rel_tol = 1e-9);

struct LmiSearchOptions {
  int max_iterations = 100000;
  double tolerance = 1e-9;
  // Margin eps requested in the strict variant.
  double strict_eps = 1e-3;
};

struct LmiSearchResult {
  bool feasible = false;
  std::optional<CertificateP> certificate;
  double residual = 0.0;
  int iterations = 0;
  std::string message;
};

// Alternating projections in the lifted space (P, S): the affine set
// {S = A^T P + P A, P B = C^T} against the cone {P >= 0} x {S <= -eps I}.
LmiSearchResult lmi_search(const LinearTriple& triple, Strictness strictness,
                           const LmiSearchOptions& options = {});

struct QCertificate {
  Matrix Q;
  double delta = 0.0;
  double q1 = 0.0;  // q1 |z|^2 <= <z, Q z>
  double q2 = 0.0;  // <z, Q z> <= q2 |z|^2
  Matrix H;
};

struct SampledInequality {
  bool pass = true;
  double worst = -1e300;  // max over samples of lhs - rhs
  int samples = 0;
  Vector worst_z;
};

// Solves (A-HC)^T Q0 + Q0 (A-HC) = -I and rescales Q0 so that the cross
// terms in 2<Qz, Az - B(w-u)> are absorbed. Throws PreconditionError unless
// A - HC is Hurwitz.
QCertificate construct_Q(const LinearTriple& triple, const DetectabilityWitness& witness);

// Samples 2<Qz, Az - B(w-u)> <= -delta|z|^2 + |z|(|Cz| + |w| + |u|) with
// (u, z, w) uniform in the box of the given half-width.
SampledInequality check_detectable_lyapunov(const LinearTriple& triple, const QCertificate& q,
                                            int samples = 10000, double half_width = 10.0,
                                            std::uint64_t seed = 1);

// eta(s) = beta3(beta1^{-1}(s)) / beta2(mu), or the identity when mu = 0.
ScalarFunc compose_eta(const ScalarFunc& beta1, const ScalarFunc& beta2, const ScalarFunc& beta3,
                       double mu);

// max over grid s in [0, mu] of eta(beta1(s)) beta2(s) - beta3(s).
double eta_bound_violation(const ScalarFunc& eta, const ScalarFunc& beta1, const ScalarFunc& beta2,
                           const ScalarFunc& beta3, double mu, int grid_points = 401);

}  // namespace lurelab
