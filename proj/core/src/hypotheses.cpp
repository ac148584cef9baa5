#include "lurelab/hypotheses.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lurelab {

CompactSetSpec CompactSetSpec::ball(Vector center, double radius) {
  if (!(radius >= 0.0) || !center.allFinite()) throw ValidationError("ball needs finite center, radius >= 0");
  CompactSetSpec g;
  g.dim_ = static_cast<int>(center.size());
  g.is_ball_ = true;
  g.center_ = std::move(center);
  g.radius_ = radius;
  return g;
}

CompactSetSpec CompactSetSpec::points(std::vector<Vector> cloud) {
  if (cloud.empty()) throw ValidationError("point cloud must be non-empty");
  CompactSetSpec g;
  g.dim_ = static_cast<int>(cloud.front().size());
  for (const auto& p : cloud)
    if (p.size() != g.dim_ || !p.allFinite()) throw ValidationError("point cloud entries must be finite and equal-sized");
  g.is_ball_ = false;
  g.cloud_ = std::move(cloud);
  g.center_ = Vector::Zero(g.dim_);
  return g;
}

double CompactSetSpec::reach() const {
  if (is_ball_) return center_.norm() + radius_;
  double r = 0.0;
  for (const auto& p : cloud_) r = std::max(r, p.norm());
  return r;
}

namespace {

std::vector<Vector> directions(int m, int count, std::uint64_t seed) {
  std::vector<Vector> dirs;
  if (m == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (m == 2) {
    for (int j = 0; j < count; ++j) {
      const double a = 2.0 * M_PI * j / count;
      Vector d(2);
      d << std::cos(a), std::sin(a);
      dirs.push_back(d);
    }
    return dirs;
  }
  Rng rng(seed);
  for (int i = 0; i < m; ++i) dirs.push_back(Vector::Unit(m, i)), dirs.push_back(-Vector::Unit(m, i));
  for (int j = 0; j < count * m; ++j) dirs.push_back(rng.unit_vector(m));
  return dirs;
}

double tol_for(double a, double b) { return 1e-10 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

std::vector<Vector> CompactSetSpec::samples(int per_shell) const {
  if (!is_ball_) return cloud_;
  std::vector<Vector> out{center_};
  if (radius_ == 0.0) return out;
  for (double frac : {1.0 / 3.0, 2.0 / 3.0, 1.0})
    for (const auto& d : directions(dim_, per_shell, 11)) out.push_back(center_ + frac * radius_ * d);
  return out;
}

bool HypothesisReport::passes(std::initializer_list<int> which) const {
  for (int i : which)
    if (!(*this)[i].pass) return false;
  return true;
}

nlohmann::json HypothesisReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  auto vec_json = [](const Vector& v) {
    std::vector<double> x(v.data(), v.data() + v.size());
    return nlohmann::json(x);
  };
  for (const auto& v : verdicts)
    arr.push_back({{"hypothesis", v.name},
                   {"pass", v.pass},
                   {"worst_violation", v.worst},
                   {"y", vec_json(v.y_at)},
                   {"z", vec_json(v.z_at)},
                   {"t", v.t_at},
                   {"note", v.note}});
  return {{"grid_points", grid_points}, {"verdicts", arr}};
}

std::vector<Vector> hypothesis_y_grid(int m, const SamplingPlan& plan) {
  const double R = plan.y_radius;
  std::vector<double> radii;
  if (m == 1) {
    const int half = std::max(1, (plan.points_1d - 1) / 2);
    for (int k = 1; k <= half; ++k) radii.push_back(R * k / half);
  } else {
    for (int k = 1; k <= plan.radial; ++k) radii.push_back(R * k / plan.radial);
  }
  for (int k = 0; k < plan.small_radii; ++k)
    radii.push_back(R * std::pow(10.0, -6.0 + 5.0 * k / std::max(1, plan.small_radii - 1)));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::vector<Vector> ys;
  for (const auto& d : directions(m, plan.angular, 5))
    for (double r : radii) ys.push_back(r * d);
  return ys;
}

HypothesisReport verify_A1_A5(const Nonlinearity& f, const CompactSetSpec& gamma,
                              const HypothesisCandidates& cand, const SamplingPlan& plan) {
  const int m = f.dim();
  if (gamma.dim() != m) throw DimensionError("verify_A1_A5: Gamma and f differ in dimension");
  HypothesisReport rep;
  const char* names[5] = {"A1", "A2", "A3", "A4", "A5"};
  for (int i = 0; i < 5; ++i) rep.verdicts[i].name = names[i];

  const auto ys = hypothesis_y_grid(m, plan);
  const auto zs = gamma.samples(plan.gamma_per_shell);
  const std::vector<double> times = f.time_invariant() ? std::vector<double>{0.0} : plan.times;

  auto record = [&](int idx, double viol, double tol, const Vector& y, const Vector& z, double t) {
    auto& v = rep.verdicts[idx];
    if (viol > v.worst) {
      v.worst = viol;
      v.y_at = y;
      v.z_at = z;
      v.t_at = t;
    }
    if (viol > tol) v.pass = false;
  };

  const auto class_grid = log_grid(plan.y_radius * 1e-6, plan.y_radius * 10.0, 120);
  const ClassCheck alpha_p = check_class(cand.alpha.with_class(FuncClass::P), class_grid);
  const ClassCheck alpha_k = check_class(cand.alpha.with_class(FuncClass::KInfinity), class_grid);
  const ClassCheck theta_k = check_class(cand.theta.with_class(FuncClass::KInfinity), class_grid);

  for (double t : times)
    for (const auto& z : zs) {
      const Vector fz = f(t, z);
      for (const auto& y : ys) {
        const Vector d = f(t, y + z) - fz;
        const double ny = y.norm();
        const double nd = d.norm();
        const double ip = y.dot(d);
        ++rep.grid_points;
        const double th = cand.theta(ny);
        record(0, nd - th, tol_for(nd, th), y, z, t);
        const double lower = ny * cand.alpha(ny);
        record(1, lower - ip, tol_for(lower, ip), y, z, t);
        record(2, lower - ip, tol_for(lower, ip), y, z, t);
        if (ny > cand.mu) record(3, nd - cand.c * ip, tol_for(nd, cand.c * ip), y, z, t);
        if (ny > 0.0) {
          const double ratio = ip / (ny * ny);
          record(4, cand.eps - ratio, 1e-12, y, z, t);
        }
      }
    }

  auto fail_note = [&](int idx, const std::string& note) {
    rep.verdicts[idx].pass = false;
    rep.verdicts[idx].note = note;
  };
  if (!theta_k.ok) fail_note(0, "theta not class Kinf: " + theta_k.reason);
  if (!alpha_p.ok) fail_note(1, "alpha not class P: " + alpha_p.reason);
  if (!alpha_k.ok) fail_note(2, "alpha not class Kinf: " + alpha_k.reason);
  if (cand.mu * cand.c < 1.0 - 1e-12) fail_note(3, "mu * c < 1");
  if (cand.mu >= plan.y_radius) fail_note(3, "mu lies beyond the sampled y radius, nothing left to test");
  if (!rep.verdicts[1].pass) fail_note(4, "requires (A2)");
  if (rep.verdicts[4].note.empty())
    rep.verdicts[4].note = "min <y, df>/|y|^2 checked against eps=" + std::to_string(cand.eps);
  return rep;
}

AlphaInfimum construct_alpha_infimum(const Nonlinearity& f, const CompactSetSpec& gamma,
                                     const std::vector<double>& radial_grid, int n_directions) {
  if (!f.time_invariant()) throw ValidationError("construct_alpha_infimum needs a time-invariant f");
  const int m = f.dim();
  if (gamma.dim() != m) throw DimensionError("construct_alpha_infimum: dimension mismatch");
  std::vector<double> radii;
  for (double s : radial_grid)
    if (s > 0.0) radii.push_back(s);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (radii.size() < 2) throw ValidationError("construct_alpha_infimum needs >= 2 positive radii");

  const auto dirs = directions(m, n_directions, 3);
  const auto zs = gamma.samples();
  AlphaInfimum out;
  out.radii = radii;
  for (double s : radii) {
    double best = std::numeric_limits<double>::infinity();
    Vector by, bz;
    for (const auto& z : zs) {
      const Vector fz = f(0.0, z);
      for (const auto& d : dirs) {
        const Vector y = s * d;
        const double g = y.dot(f(0.0, y + z) - fz) / s;
        if (g < best) {
          best = g;
          by = y;
          bz = z;
        }
      }
    }
    if (best < -1e-12 * (1.0 + s)) {
      out.violation = true;
      out.violation_y = by;
      out.violation_z = bz;
      throw ValidationError("construct_alpha_infimum: negative infimum " + std::to_string(best) +
                            " at |y|=" + std::to_string(s) + " (monotonicity hypothesis violated)");
    }
    out.raw.push_back(best);
  }
  std::vector<double> env(out.raw.size());
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t i = out.raw.size(); i-- > 0;) {
    run = std::min(run, out.raw[i]);
    env[i] = std::max(0.0, run);
  }
  bool strictly = env.front() > 0.0;
  for (std::size_t i = 1; i < env.size(); ++i) strictly = strictly && env[i] > env[i - 1];
  const std::size_t mid = env.size() / 2;
  out.kinf = strictly && env.back() >= 1.5 * env[mid];
  std::vector<double> xs{0.0}, ys{0.0};
  xs.insert(xs.end(), radii.begin(), radii.end());
  ys.insert(ys.end(), env.begin(), env.end());
  out.alpha = ScalarFunc::piecewise_linear(std::move(xs), std::move(ys),
                                           out.kinf ? FuncClass::KInfinity : FuncClass::P);
  return out;
}

double find_A4_mu(const Nonlinearity& f, const CompactSetSpec& gamma, double c,
                  const SamplingPlan& plan) {
  if (!(c > 0.0)) throw ValidationError("find_A4_mu needs c > 0");
  // Offset directions so the search grid differs from the verification grid.
  SamplingPlan p = plan;
  p.angular = plan.angular * 2;
  p.radial = plan.radial * 2;
  p.points_1d = plan.points_1d * 2 + 1;
  const auto ys = hypothesis_y_grid(f.dim(), p);
  const auto zs = gamma.samples(plan.gamma_per_shell * 2);
  const std::vector<double> times = f.time_invariant() ? std::vector<double>{0.0} : plan.times;
  double mu = 0.0;
  for (double t : times)
    for (const auto& z : zs) {
      const Vector fz = f(t, z);
      for (const auto& y : ys) {
        const Vector d = f(t, y + z) - fz;
        const double nd = d.norm();
        const double rhs = c * y.dot(d);
        if (nd > rhs + tol_for(nd, rhs)) mu = std::max(mu, y.norm());
      }
    }
  // Grid spacing margin: the next radius above a violation may still fail
  // between grid points.
  const double step = plan.y_radius / std::max(1, f.dim() == 1 ? (plan.points_1d - 1) / 2 : plan.radial);
  if (mu > 0.0) mu += step;
  return std::max(mu, 1.0 / c);
}

double power_law_monotone_constant(double d, int samples) {
  if (samples < 3) throw ValidationError("power_law_monotone_constant needs >= 3 samples");
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const double t = -1.0 + 3.0 * j / (samples - 1);
    best = std::min(best, power_law_eval(0.0, 1.0, d, t) - power_law_eval(0.0, 1.0, d, t - 1.0));
  }
  return best;
}

HypothesisCandidates power_law_candidates(const std::vector<PowerLawParams>& comps, double R) {
  if (comps.empty()) throw ValidationError("power_law_candidates needs components");
  std::vector<double> cd;
  for (const auto& p : comps) cd.push_back(power_law_monotone_constant(p.d));
  const double sqm = std::sqrt(static_cast<double>(comps.size()));
  HypothesisCandidates h;
  h.theta = ScalarFunc::custom(
      [comps, R](double s) {
        double acc = 0.0;
        for (const auto& p : comps) acc += (p.a0 + p.a1 * (p.d + 1.0) * std::pow(s + R, p.d)) * s;
        return acc;
      },
      FuncClass::KInfinity, "sum_i (a0 + a1 (d+1)(s+R)^d) s");
  h.alpha = ScalarFunc::custom(
      [comps, cd, sqm](double s) {
        if (s <= 0.0) return 0.0;
        const double r = s / sqm;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < comps.size(); ++i) {
          const auto& p = comps[i];
          best = std::min(best, p.a0 * r * r + p.a1 * cd[i] * std::pow(r, p.d + 2.0));
        }
        return best / s;
      },
      FuncClass::KInfinity, "min_i (a0 r^2 + a1 c_d r^(d+2)) / s, r = s/sqrt(m)");
  return h;
}

Nonlinearity diagonal_compose(const std::vector<Nonlinearity>& components) {
  return Nonlinearity::diagonal(components);
}

}  // namespace lurelab
