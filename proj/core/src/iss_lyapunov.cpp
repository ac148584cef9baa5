#include "lurelab/iss_lyapunov.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace lurelab {

Vector LyapunovFunction::grad(const Vector& z) const {
  if (gradient) return gradient(z);
  return fd_gradient(value, z);
}

Vector fd_gradient(const std::function<double(const Vector&)>& V, const Vector& z, double rel_step) {
  Vector g(z.size());
  Vector zp = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(z(i)));
    zp(i) = z(i) + h;
    const double vp = V(zp);
    zp(i) = z(i) - h;
    const double vm = V(zp);
    zp(i) = z(i);
    g(i) = (vp - vm) / (2.0 * h);
  }
  return g;
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXk = {0.991455371120812639, 0.949107912342758525,
                                       0.864864423359769073, 0.741531185599394440,
                                       0.586087235467691130, 0.405845151377397167,
                                       0.207784955007898468, 0.000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529225, 0.063092092629978553,
                                       0.104790010322250184, 0.140653259715525919,
                                       0.169004726639267903, 0.190350578064785410,
                                       0.204432940075298892, 0.209482141084727828};
constexpr std::array<double, 4> kWg = {0.129484966168869693, 0.279705391489276668,
                                       0.381830050505118945, 0.417959183673469388};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXk[j];
    const double s = f(c - x) + f(c + x);
    rk += kWk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  result = rk * h;
  error = std::abs((rk - rg) * h);
}

template <class F>
double adaptive_abs(const F& f, double a, double b, double r, double e, double tol, int depth) {
  // Below a few ulps of the panel value the error estimate is roundoff.
  if (depth <= 0 || e <= std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(r))) return r;
  const double m = 0.5 * (a + b);
  double rl, el, rr, er;
  gk15(f, a, m, rl, el);
  gk15(f, m, b, rr, er);
  return adaptive_abs(f, a, m, rl, el, 0.5 * tol, depth - 1) +
         adaptive_abs(f, m, b, rr, er, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive(const F& f, double a, double b, double rel, int depth) {
  double r, e;
  gk15(f, a, b, r, e);
  return adaptive_abs(f, a, b, r, e, rel * std::abs(r) + 1e-300, depth);
}

}  // namespace

IssLyapunov::IssLyapunov(Matrix P, const QCertificate& Q, ScalarFunc eta, double eps)
    : P_(std::move(P)), q_(Q), eta_(std::move(eta)), eps_(eps) {
  if (!(eps > 0.0)) throw ValidationError("IssLyapunov: eps must be positive");
  if (P_.rows() != q_.Q.rows()) throw DimensionError("IssLyapunov: P and Q differ in size");
  // c0 <= eps sqrt(q1) bounds k(V_Q(z)) |z| by eps; c2 uses sqrt(q2) since
  // V_Q(z) <= q2 |z|^2.
  c0_ = std::min({1.0, eps / q_.q1, eps * std::sqrt(q_.q1)});
  c1_ = q_.delta / 4.0;
  c2_ = q_.delta / (4.0 * std::sqrt(q_.q2));
  nodes_.push_back(0.0);
  for (int j = 0; j <= 24 * 8; ++j) nodes_.push_back(std::pow(10.0, -12.0 + j / 8.0));
  cumulative_.assign(nodes_.size(), 0.0);
  for (std::size_t j = 1; j < nodes_.size(); ++j)
    cumulative_[j] = cumulative_[j - 1] + integrate(nodes_[j - 1], nodes_[j]);
}

double IssLyapunov::k(double tau) const {
  tau = std::max(tau, 0.0);
  return c0_ * std::min(1.0 / std::sqrt(tau + 1.0), c1_ * eta_(c2_ * std::sqrt(tau)));
}

double IssLyapunov::integrate(double a, double b) const {
  if (b <= a) return 0.0;
  return adaptive([this](double t) { return k(t); }, a, b, 1e-13, 30);
}

double IssLyapunov::h(double s) const {
  if (s <= 0.0) return 0.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return cumulative_[j] + integrate(nodes_[j], s);
}

double IssLyapunov::value(const Vector& z) const {
  return z.dot(P_ * z) + h(z.dot(q_.Q * z));
}

Vector IssLyapunov::gradient(const Vector& z) const {
  return 2.0 * P_ * z + 2.0 * k(z.dot(q_.Q * z)) * (q_.Q * z);
}

ScalarFunc IssLyapunov::alpha3() const {
  const double d = q_.delta;
  const double q1 = q_.q1;
  const double q2 = q_.q2;
  auto kc = [c0 = c0_, c1 = c1_, c2 = c2_, eta = eta_](double tau) {
    return c0 * std::min(1.0 / std::sqrt(tau + 1.0), c1 * eta(c2 * std::sqrt(tau)));
  };
  return ScalarFunc::custom(
      [kc, d, q1, q2](double s) {
        const double s2 = s * s;
        return 0.5 * d * s2 * std::min(kc(q1 * s2), kc(q2 * s2));
      },
      FuncClass::KInfinity, "alpha3");
}

ScalarFunc IssLyapunov::alpha4(const ScalarFunc& alpha) const {
  if (alpha.cls() != FuncClass::KInfinity)
    throw ValidationError("alpha4 requires alpha of class Kinf");
  const double lin = c0_ / std::sqrt(q_.q1);
  return ScalarFunc::custom(
      [lin, alpha](double s) { return lin * s + 2.0 * alpha.inverse(2.0 * s) * s; },
      FuncClass::KInfinity, "alpha4");
}

LyapunovFunction IssLyapunov::as_function() const {
  auto self = std::make_shared<IssLyapunov>(*this);
  return {[self](const Vector& z) { return self->value(z); },
          [self](const Vector& z) { return self->gradient(z); }};
}

std::shared_ptr<IssLyapunov> construct_iss_lyapunov(const LinearTriple& triple,
                                                    const CertificateP& P, const QCertificate& Q,
                                                    const ScalarFunc& eta, double eps) {
  if (P.P().rows() != triple.n() || Q.Q.rows() != triple.n())
    throw DimensionError("construct_iss_lyapunov: certificate sizes do not match the triple");
  return std::make_shared<IssLyapunov>(P.P(), Q, eta, eps);
}

IssCheckResult iss_lyapunov_check(const LyapunovFunction& V, const LinearTriple& t,
                                  const SectorData& sector, const ScalarFunc& alpha3,
                                  const ScalarFunc& alpha4, const IssCheckBox& box) {
  IssCheckResult out;
  const int samples = box.samples > 0 ? box.samples : t.n() * 1000;
  Rng rng(box.seed);
  auto radius = [&](double top) {
    // Half the draws are log-uniform so small amplitudes are exercised.
    return rng.uniform() < 0.5 ? top * rng.uniform() : top * std::pow(10.0, -4.0 * rng.uniform());
  };
  for (int i = 0; i < samples; ++i) {
    const Vector z = radius(box.z_radius) * rng.unit_vector(t.n());
    const Vector u = (i % 5 == 0 ? 0.0 : radius(box.u_radius)) * rng.unit_vector(t.m());
    const Vector y = t.C() * z;
    const Vector w = sample_F(y, sector, rng, i % 3);
    const double lhs = V.grad(z).dot(t.A() * z - t.B() * (w - u));
    const double a3 = alpha3(z.norm());
    const double a4 = alpha4(u.norm());
    const double viol = lhs + a3 - a4;
    if (viol > out.worst) {
      out.worst = viol;
      out.worst_z = z;
      out.worst_u = u;
      out.worst_w = w;
    }
    if (viol > box.rel_tol * (1.0 + std::abs(lhs) + a3 + a4)) out.pass = false;
    ++out.samples;
  }
  return out;
}

QuadraticIss quadratic_iss(const LinearTriple& triple, const CertificateP& strict_P) {
  if (strict_P.strictness() != Strictness::Strict)
    throw ValidationError("quadratic_iss needs a strict certificate");
  const Matrix P = strict_P.P();
  const double eps = strict_P.eps();
  const double cn = linalg::spectral_norm(triple.C());
  LyapunovFunction V{[P](const Vector& z) { return z.dot(P * z); },
                     [P](const Vector& z) { return Vector(2.0 * P * z); }};
  return {V, ScalarFunc::power(0.5 * eps, 2.0), ScalarFunc::power(2.0 * cn * cn / eps, 2.0)};
}

}  // namespace lurelab
