#include "lurelab/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lurelab {

void Trajectory::validate() const {
  if (static_cast<std::size_t>(states.rows()) != times.size())
    throw ValidationError("trajectory: times and states differ in length");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ValidationError("trajectory: times must increase strictly");
  if (!linalg::all_finite(states)) throw ValidationError("trajectory: non-finite state");
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size())
    throw AlignmentError("time grids differ in length");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, std::abs(a.times[k])))
      throw AlignmentError("time grids differ at node " + std::to_string(k));
}

LureSystem::LureSystem(LinearTriple triple, Nonlinearity f)
    : triple_(std::move(triple)), f_(std::move(f)) {
  if (f_.dim() != triple_.m())
    throw DimensionError("LureSystem: f acts on R^" + std::to_string(f_.dim()) +
                         " but C maps into R^" + std::to_string(triple_.m()));
}

void LureSystem::field(double t, const Vector& x, const Vector& forcing, Vector& out) const {
  const Vector y = triple_.C() * x;
  out.noalias() = triple_.A() * x;
  out.noalias() += triple_.B() * (forcing - f_(t, y));
}

namespace {

std::string blow_up_message(double t) {
  std::ostringstream os;
  os << "state left the ball of radius " << kBlowUpThreshold << " at t = " << t;
  return os.str();
}

}  // namespace

BlowUpError::BlowUpError(double escape_time, double last_time, Vector last_state)
    : Error(blow_up_message(escape_time)),
      escape_time_(escape_time),
      last_time_(last_time),
      last_state_(std::move(last_state)) {}

Trajectory simulate(const LureSystem& sys, const Vector& x0, const SignalSpec& v, double T,
                    double dt, const SignalSpec* u, double t0) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("simulate: dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("simulate: horizon must be positive");
  if (x0.size() != sys.n()) throw DimensionError("simulate: x0 has the wrong size");
  if (!linalg::all_finite(x0)) throw ValidationError("simulate: x0 is not finite");
  if (v.dim() != sys.m() || (u && u->dim() != sys.m()))
    throw DimensionError("simulate: forcing dimension differs from m");
  const long steps = std::llround(T / dt);
  if (steps < 1) throw ValidationError("simulate: horizon shorter than one step");

  Trajectory tr;
  tr.forcing_id = v.name();
  tr.info.dt = dt;
  tr.times.resize(static_cast<std::size_t>(steps) + 1);
  tr.states.resize(steps + 1, sys.n());
  for (long k = 0; k <= steps; ++k) tr.times[static_cast<std::size_t>(k)] = t0 + static_cast<double>(k) * dt;
  tr.states.row(0) = x0.transpose();

  const int n = sys.n();
  Vector x = x0, k1(n), k2(n), k3(n), k4(n), tmp(n), w(sys.m()), wu(sys.m());
  auto forcing = [&](double t, bool left) {
    v.eval_into(t, left, w);
    if (u) {
      u->eval_into(t, left, wu);
      w += wu;
    }
  };
  auto rk4 = [&](double s, double h, bool end_left) {
    forcing(s, false);
    sys.field(s, x, w, k1);
    forcing(s + 0.5 * h, false);
    tmp = x + 0.5 * h * k1;
    sys.field(s + 0.5 * h, tmp, w, k2);
    tmp = x + 0.5 * h * k2;
    sys.field(s + 0.5 * h, tmp, w, k3);
    forcing(s + h, end_left);
    tmp = x + h * k3;
    sys.field(s + h, tmp, w, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  std::vector<double> jumps;
  for (long k = 0; k < steps; ++k) {
    const double a = tr.times[static_cast<std::size_t>(k)];
    const double b = tr.times[static_cast<std::size_t>(k) + 1];
    jumps = v.breakpoints(a, b);
    if (u) {
      const auto more = u->breakpoints(a, b);
      jumps.insert(jumps.end(), more.begin(), more.end());
      std::sort(jumps.begin(), jumps.end());
    }
    // A jump at a is already handled by right-continuous evaluation.
    const double snap = 1e-12 * std::max(1.0, std::abs(b));
    double s = a;
    bool end_hit = false;
    for (double j : jumps) {
      if (j <= a + snap) continue;
      ++tr.info.breakpoints_hit;
      if (j >= b - snap) {
        end_hit = true;
        break;
      }
      rk4(s, j - s, true);
      ++tr.info.substeps;
      s = j;
    }
    rk4(s, b - s, end_hit);
    if (!linalg::all_finite(x) || x.norm() > kBlowUpThreshold)
      throw BlowUpError(b, a, tr.states.row(k).transpose());
    tr.states.row(k + 1) = x.transpose();
  }
  return tr;
}

GapSeries incremental_gap(const Trajectory& a, const Trajectory& b, const SignalSpec& v1,
                          const SignalSpec& v2) {
  require_same_grid(a, b);
  if (a.n() != b.n()) throw DimensionError("incremental_gap: state dimensions differ");
  if (v1.dim() != v2.dim()) throw DimensionError("incremental_gap: forcing dimensions differ");
  GapSeries g;
  const std::size_t N = a.size();
  g.times = a.times;
  g.gap.resize(N);
  g.forcing_integral.assign(N, 0.0);
  g.forcing_sup.assign(N, 0.0);
  Vector p(v1.dim()), q(v1.dim());
  double prev = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    g.gap[k] = (a.states.row(r) - b.states.row(r)).norm();
    v1.eval_into(a.times[k], false, p);
    v2.eval_into(a.times[k], false, q);
    const double dv = (p - q).norm();
    if (k > 0) {
      g.forcing_integral[k] = g.forcing_integral[k - 1] + 0.5 * (prev + dv) * (a.times[k] - a.times[k - 1]);
      g.forcing_sup[k] = std::max(g.forcing_sup[k - 1], dv);
    } else {
      g.forcing_sup[k] = dv;
    }
    prev = dv;
  }
  return g;
}

MonotonicityResult lyapunov_monotonicity(const Trajectory& traj, const CertificateP& cert) {
  MonotonicityResult r;
  if (traj.size() == 0) return r;
  const Matrix& P = cert.P();
  if (P.rows() != traj.n()) throw DimensionError("lyapunov_monotonicity: P has the wrong size");
  auto V = [&](std::size_t k) {
    const Vector x = traj.state(k);
    return x.dot(P * x);
  };
  const double dt = traj.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
  double prev = V(0);
  r.tolerance = dt * 1e-6 * (1.0 + prev);
  r.max_increase = traj.size() > 1 ? -1e300 : 0.0;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double cur = V(k);
    if (cur - prev > r.max_increase) {
      r.max_increase = cur - prev;
      r.at = k - 1;
    }
    prev = cur;
  }
  r.pass = r.max_increase <= r.tolerance;
  return r;
}

}  // namespace lurelab
