#pragma once

#include "lurelab/certcore.hpp"
#include "lurelab/errors.hpp"
#include "lurelab/nonlinearity.hpp"
#include "lurelab/signals.hpp"
#include "lurelab/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lurelab {

// x' = A x - B f(t, C x) + B (v + u).
class LureSystem {
 public:
  LureSystem(LinearTriple triple, Nonlinearity f);

  const LinearTriple& triple() const { return triple_; }
  const Nonlinearity& f() const { return f_; }
  int n() const { return triple_.n(); }
  int m() const { return triple_.m(); }

  std::optional<CertificateP> P;
  std::optional<QCertificate> Q;

  // Writes the vector field into out; forcing is v + u (already summed).
  void field(double t, const Vector& x, const Vector& forcing, Vector& out) const;

 private:
  LinearTriple triple_;
  Nonlinearity f_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(double escape_time, double last_time, Vector last_state);
  double escape_time() const { return escape_time_; }
  double last_time() const { return last_time_; }
  const Vector& last_state() const { return last_state_; }

 private:
  double escape_time_;
  double last_time_;
  Vector last_state_;
};

constexpr double kBlowUpThreshold = 1e9;

// Classical RK4 on t_k = t0 + k dt, k = 0..round(T / dt). Steps containing a
// forcing jump are split at the jump; a sub-step ending on a jump uses the
// left limit there. Throws ValidationError on bad arguments and BlowUpError
// when the state leaves the ball of radius 1e9 or stops being finite.
Trajectory simulate(const LureSystem& system, const Vector& x0, const SignalSpec& v, double T,
                    double dt, const SignalSpec* u = nullptr, double t0 = 0.0);

struct GapSeries {
  std::vector<double> times;
  std::vector<double> gap;               // |x1(t) - x2(t)|
  std::vector<double> forcing_integral;  // int_0^t |v1 - v2| (trapezoid)
  std::vector<double> forcing_sup;       // max over grid nodes in [0, t]
};

// Throws AlignmentError when the grids differ.
GapSeries incremental_gap(const Trajectory& a, const Trajectory& b, const SignalSpec& v1,
                          const SignalSpec& v2);

struct MonotonicityResult {
  bool pass = true;
  double max_increase = 0.0;  // max_k V(x_{k+1}) - V(x_k)
  double tolerance = 0.0;     // dt * 1e-6 * (1 + V(x_0))
  std::size_t at = 0;         // index of the worst increase
};

// For unforced runs only; forced runs are not rejected but the verdict is
// meaningless there.
MonotonicityResult lyapunov_monotonicity(const Trajectory& traj, const CertificateP& P);

// ---- exponential fits --------------------------------------------------

struct FitWindow {
  // Negative bounds mean: start after exclude_fraction of the record, end at
  // the last node.
  double t_start = -1.0;
  double t_end = -1.0;
  double exclude_fraction = 0.1;
  // Lift the fitted line to the upper envelope of the data in the window.
  bool envelope = false;
};

struct ExpFit {
  double M = 0.0;            // M' / gap(0)
  double M_prime = 0.0;      // exp(intercept)
  double gamma = 0.0;
  double residual = 0.0;     // RMS of log errors
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t nodes = 0;
  bool contraction() const { return gamma > 0.0; }
  double operator()(double t, double gap0) const;  // M e^{-gamma t} gap0

  nlohmann::json to_json() const;
};

// log gap(t) ~ log M' - gamma t by least squares on the window. Nodes with
// gap <= 1e-300 are masked. Throws InsufficientDataError with < 8 nodes.
ExpFit fit_exponential(const GapSeries& gap, const FitWindow& window = {});

// Fraction of nodes with t >= t_from where gap(t) <= fit(t, gap(0)).
double envelope_coverage(const ExpFit& fit, const GapSeries& gap, double t_from);

// psi(s, t) = M e^{-gamma t} s, phi(s) = a s.
struct IissSurrogate {
  double M = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  nlohmann::json to_json() const;
};

// gamma: smallest fitted decay rate among members with zero forcing
// difference (positive fits only); M: smallest constant covering those
// members; a: smallest gain covering the remaining members given (M, gamma).
// Throws InsufficientDataError when no member has zero forcing difference.
IissSurrogate fit_iiss_surrogate(const std::vector<GapSeries>& training,
                                 const FitWindow& window = {});

struct IissCheck {
  bool pass = true;
  bool kl_valid = true;  // gamma > 0
  std::vector<bool> member_pass;
  std::vector<double> worst_excess;  // max_k gap - bound, per member
  IissSurrogate surrogate;
  nlohmann::json to_json() const;
};

// gap(t) <= M e^{-gamma t} gap(0) + a int_0^t |dv| at every node, with a
// relative slack of rel_tol. Fails outright when gamma <= 0.
IissCheck iiss_bound_check(const std::vector<GapSeries>& held_out, const IissSurrogate& s,
                           double rel_tol = 1e-9);

}  // namespace lurelab
