#pragma once

#include "lurelab/certcore.hpp"
#include "lurelab/sector.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace lurelab {

// Candidate Lyapunov function. An empty gradient means central finite
// differences are used.
struct LyapunovFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;

  Vector grad(const Vector& z) const;
};

// Central differences with step rel_step * max(1, |z_i|) per coordinate.
Vector fd_gradient(const std::function<double(const Vector&)>& V, const Vector& z,
                   double rel_step = 1e-6);

// V(z) = <z, P z> + h(<z, Q z>), h(s) = int_0^s k, with
//   k(tau) = c0 min{ 1/sqrt(tau + 1), c1 eta(c2 sqrt(tau)) }.
class IssLyapunov {
 public:
  IssLyapunov(Matrix P, const QCertificate& Q, ScalarFunc eta, double eps);

  double value(const Vector& z) const;
  Vector gradient(const Vector& z) const;
  double k(double tau) const;
  double h(double s) const;

  double c0() const { return c0_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double eps() const { return eps_; }
  const QCertificate& q() const { return q_; }

  // Decrease rate (delta/2) s^2 min{k(q1 s^2), k(q2 s^2)}.
  ScalarFunc alpha3() const;
  // Gain (c0/sqrt(q1)) s + 2 alpha^{-1}(2s) s; alpha must be class Kinf.
  ScalarFunc alpha4(const ScalarFunc& alpha) const;

  LyapunovFunction as_function() const;

 private:
  double integrate(double a, double b) const;

  Matrix P_;
  QCertificate q_;
  ScalarFunc eta_;
  double eps_;
  double c0_, c1_, c2_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

// Builds the composite function from certified data; eta and eps follow the
// sector data (lemma34_eta, lemma34_eps).
std::shared_ptr<IssLyapunov> construct_iss_lyapunov(const LinearTriple& triple,
                                                    const CertificateP& P, const QCertificate& Q,
                                                    const ScalarFunc& eta, double eps);

struct IssCheckBox {
  double z_radius = 10.0;
  double u_radius = 10.0;
  int samples = 0;  // 0 means n * 1000
  std::uint64_t seed = 1;
  double rel_tol = 1e-8;
};

struct IssCheckResult {
  bool pass = true;
  double worst = -1e300;  // max of lhs + alpha3(|z|) - alpha4(|u|)
  Vector worst_z;
  Vector worst_u;
  Vector worst_w;
  int samples = 0;
};

// Samples <grad V(z), Az - B(w - u)> <= -alpha3(|z|) + alpha4(|u|) with
// w drawn from F(Cz) (canonical, boundary and interior selections).
IssCheckResult iss_lyapunov_check(const LyapunovFunction& V, const LinearTriple& triple,
                                  const SectorData& sector, const ScalarFunc& alpha3,
                                  const ScalarFunc& alpha4, const IssCheckBox& box = {});

// Quadratic V = <z, P z> under the strict LMI: alpha3 = (eps/2) s^2 and
// alpha4 = (2 |C|^2 / eps) s^2.
struct QuadraticIss {
  LyapunovFunction V;
  ScalarFunc alpha3;
  ScalarFunc alpha4;
};
QuadraticIss quadratic_iss(const LinearTriple& triple, const CertificateP& strict_P);

}  // namespace lurelab
