#include "lurelab/sector.hpp"

#include "lurelab/certcore.hpp"
#include "lurelab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lurelab {

namespace {

double tol_for(double a, double b) { return 1e-10 * (1.0 + std::abs(a) + std::abs(b)); }

std::vector<double> default_grid() { return log_grid(1e-6, 1e4, 241); }

}  // namespace

SectorData SectorData::make(ScalarFunc theta, ScalarFunc alpha, double mu, double c,
                            SectorVariant variant) {
  if (!(mu > 0.0) || !(c > 0.0)) throw ValidationError("sector requires mu > 0 and c > 0");
  if (c * mu < 1.0 - 1e-12) throw ValidationError("sector requires c * mu >= 1");
  for (double s : default_grid()) {
    const double a = alpha(s);
    const double t = theta(s);
    if (a > t + tol_for(a, t))
      throw ValidationError("sector requires alpha <= theta; fails at s=" + std::to_string(s));
  }
  SectorData d{theta, alpha, mu, c, variant, theta, false};
  return d;
}

SectorData SectorData::inflate_theta() const {
  SectorData d = *this;
  d.theta = (theta + alpha).with_class(theta.cls());
  d.inflated = true;
  return d;
}

double SectorData::r(double s) const {
  const double t = theta(s);
  const double a = alpha(s);
  return std::sqrt(std::max(0.0, t * t - a * a));
}

nlohmann::json SectorData::to_json() const {
  return {{"theta", theta.describe()},
          {"theta_raw", theta_raw.describe()},
          {"theta_inflated", inflated},
          {"alpha", alpha.describe()},
          {"alpha_class", to_string(alpha.cls())},
          {"mu", mu},
          {"c", c},
          {"variant", variant == SectorVariant::F ? "F" : "F0"}};
}

SectorIssues validate_sector(const SectorData& sector, const std::vector<double>& grid) {
  SectorIssues out;
  auto issue = [&](std::string s) {
    out.ok = false;
    out.issues.push_back(std::move(s));
  };
  if (sector.c * sector.mu < 1.0 - 1e-12) issue("c * mu < 1");
  double prev_r = -1.0;
  for (double s : grid) {
    const double a = sector.alpha(s);
    const double t = sector.theta(s);
    if (a > t + tol_for(a, t)) issue("alpha > theta at s=" + std::to_string(s));
    if (sector.variant == SectorVariant::F0) {
      const double r = sector.r(s);
      if (r < prev_r - tol_for(r, prev_r)) issue("r decreases near s=" + std::to_string(s));
      prev_r = r;
    }
  }
  return out;
}

Membership membership_F(const Vector& w, const Vector& y, const SectorData& sector) {
  if (w.size() != y.size()) throw DimensionError("membership_F: w and y differ in dimension");
  Membership m;
  const double ny = y.norm();
  const double nw = w.norm();
  const double ip = w.dot(y);
  const double th = sector.theta(ny);
  const double lower = ny * sector.alpha(ny);
  m.norm_bound = nw <= th + tol_for(nw, th);
  m.inner_bound = ip >= lower - tol_for(ip, lower);
  m.cone_active = sector.variant == SectorVariant::F && ny > sector.mu;
  m.cone_bound = !m.cone_active || sector.c * ip >= nw - tol_for(sector.c * ip, nw);
  m.member = m.norm_bound && m.inner_bound && m.cone_bound;
  return m;
}

Vector canonical_selection(const Vector& y, const SectorData& sector) {
  const double ny = y.norm();
  if (ny == 0.0) return Vector::Zero(y.size());
  return sector.theta(ny) * (y / ny);
}

Vector sample_F(const Vector& y, const SectorData& sector, Rng& rng, int kind) {
  const double ny = y.norm();
  if (ny == 0.0 || kind == 0) return canonical_selection(y, sector);
  const Vector yhat = y / ny;
  const double th = sector.theta(ny);
  const double al = std::min(sector.alpha(ny), th);
  double a;
  const double pick = rng.uniform();
  if (kind == 1 && pick < 0.25)
    a = al;
  else if (kind == 1 && pick < 0.5)
    a = th;
  else
    a = rng.uniform(al, th);
  double bmax = std::sqrt(std::max(0.0, th * th - a * a));
  if (sector.variant == SectorVariant::F && ny > sector.mu) {
    const double k = sector.c * ny;
    bmax = std::min(bmax, a * std::sqrt(std::max(0.0, k * k - 1.0)));
  }
  Vector w = a * yhat;
  if (y.size() >= 2 && bmax > 0.0) {
    Vector e = rng.normal_vector(y.size());
    e -= e.dot(yhat) * yhat;
    const double ne = e.norm();
    if (ne > 0.0) {
      const double b = kind == 1 ? bmax : bmax * rng.uniform();
      w += (rng.uniform() < 0.5 ? -b : b) * (e / ne);
    }
  }
  return w;
}

Interval interval_F0_1d(double y, const SectorData& sector) {
  if (y == 0.0) return {0.0, 0.0};
  const double s = std::abs(y);
  const double lo = sector.alpha(s);
  const double hi = sector.theta(s);
  return y > 0.0 ? Interval{lo, hi} : Interval{-hi, -lo};
}

namespace {

struct Cap {
  Eigen::Vector2d yhat = Eigen::Vector2d::Zero();
  Eigen::Vector2d perp = Eigen::Vector2d::Zero();
  double alpha = 0.0;
  double r = 0.0;
  bool point = true;  // F0(0) = {0}

  double half_chord() const { return std::sqrt(std::max(0.0, r * r - alpha * alpha)); }

  Eigen::Vector2d at(double a, double b) const { return a * yhat + b * perp; }

  double distance(const Eigen::Vector2d& p) const {
    if (point) return p.norm();
    const double a = p.dot(yhat);
    const double b = p.dot(perp);
    const double rho = std::hypot(a, b);
    if (a >= alpha && rho <= r) return 0.0;
    const double h = half_chord();
    double best = std::hypot(a - alpha, b - std::clamp(b, -h, h));
    if (rho > 0.0) {
      const double qa = r * a / rho;
      const double qb = r * b / rho;
      if (qa >= alpha) best = std::min(best, std::hypot(a - qa, b - qb));
    }
    return best;
  }

  std::vector<Eigen::Vector2d> boundary(int count) const {
    if (point) return {Eigen::Vector2d::Zero()};
    std::vector<Eigen::Vector2d> pts;
    const int arc = std::max(2, count / 2);
    const int chord = std::max(2, count - arc);
    const double phi = std::acos(std::clamp(alpha / r, -1.0, 1.0));
    for (int i = 0; i < arc; ++i) {
      const double psi = -phi + 2.0 * phi * i / (arc - 1);
      pts.push_back(at(r * std::cos(psi), r * std::sin(psi)));
    }
    const double h = half_chord();
    for (int i = 0; i < chord; ++i) pts.push_back(at(alpha, -h + 2.0 * h * i / (chord - 1)));
    return pts;
  }
};

Cap make_cap(const Vector& y, const SectorData& sector) {
  Cap cap;
  const double ny = y.norm();
  if (ny == 0.0) return cap;
  cap.point = false;
  cap.yhat = Eigen::Vector2d(y(0), y(1)) / ny;
  cap.perp = Eigen::Vector2d(-cap.yhat(1), cap.yhat(0));
  cap.r = sector.theta(ny);
  cap.alpha = std::min(sector.alpha(ny), cap.r);
  return cap;
}

}  // namespace

double hausdorff_F0(const Vector& y1, const Vector& y2, const SectorData& sector,
                    int boundary_samples) {
  if (y1.size() != y2.size()) throw DimensionError("hausdorff_F0: dimension mismatch");
  if (y1.size() > 2) throw UnsupportedDimensionError("hausdorff_F0 supports m = 1, 2 only");
  if (y1.size() == 1) {
    const Interval a = interval_F0_1d(y1(0), sector);
    const Interval b = interval_F0_1d(y2(0), sector);
    return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
  }
  if (y1 == y2) return 0.0;
  const Cap c1 = make_cap(y1, sector);
  const Cap c2 = make_cap(y2, sector);
  double d = 0.0;
  for (const auto& p : c1.boundary(boundary_samples)) d = std::max(d, c2.distance(p));
  for (const auto& p : c2.boundary(boundary_samples)) d = std::max(d, c1.distance(p));
  return d;
}

double lemma34_eps(const SectorData& sector) {
  return std::min(1.0 / (2.0 * sector.c), sector.alpha(sector.mu) / 2.0);
}

ScalarFunc lemma34_eta(const SectorData& sector) {
  const ScalarFunc& theta = sector.theta;
  const ScalarFunc& alpha = sector.alpha;
  const ScalarFunc beta1 =
      ScalarFunc::custom([theta](double s) { return s + theta(s); }, FuncClass::KInfinity, "s+theta");
  const ScalarFunc beta2 = ScalarFunc::custom(
      [theta](double s) { const double t = theta(s); return 2.0 * (s * s + t * t); },
      FuncClass::KInfinity, "2(s^2+theta^2)");
  const ScalarFunc beta3 =
      ScalarFunc::custom([alpha](double s) { return s * alpha(s); }, FuncClass::KInfinity, "s*alpha");
  return compose_eta(beta1, beta2, beta3, sector.mu);
}

Lemma34Report lemma34_bounds_check(const SectorData& sector, int samples, double radius,
                                   std::uint64_t seed) {
  Lemma34Report rep;
  rep.eps = lemma34_eps(sector);
  const ScalarFunc eta = lemma34_eta(sector);
  const bool alpha_kinf = sector.alpha.cls() == FuncClass::KInfinity;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const int dim = 1 + (i % 2);
    // Radii are drawn log-uniformly so both sides of mu are well covered.
    const double ny = radius * std::pow(10.0, -6.0 * rng.uniform());
    const Vector y = ny * rng.unit_vector(dim);
    const Vector w = sample_F(y, sector, rng, i % 3);
    const Vector u = rng.in_ball(dim, radius);
    const double ip = y.dot(w);
    const double tol = 1e-9 * (1.0 + std::abs(ip) + y.squaredNorm() + w.squaredNorm());
    if (alpha_kinf) {
      const double nu = u.norm();
      const double g1 = 2.0 * u.dot(y) - ip - 2.0 * sector.alpha.inverse(2.0 * nu) * nu;
      rep.worst_g1 = std::max(rep.worst_g1, g1);
      if (g1 > tol + 1e-9 * nu * nu) rep.pass = false;
    }
    if (ny <= sector.mu) {
      const double nw = w.norm();
      const double g2 = eta(ny) * ny * ny + eta(nw) * nw * nw - ip;
      rep.worst_g2 = std::max(rep.worst_g2, g2);
      if (g2 > tol) rep.pass = false;
    } else {
      const double g3 = rep.eps * (w.norm() + ny) - ip;
      rep.worst_g3 = std::max(rep.worst_g3, g3);
      if (g3 > tol) rep.pass = false;
    }
    ++rep.samples;
  }
  return rep;
}

}  // namespace lurelab
