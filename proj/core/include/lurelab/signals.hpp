#pragma once

#include "lurelab/linear.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lurelab {

// s(t) = -1 + mod(t, 2 pi) / pi, right-continuous.
double sawtooth(double t);

enum class SignalClass { Periodic, AlmostPeriodic, StepanovAP, AsymptoticallyAP, Generic };
const char* to_string(SignalClass cls);

// One scalar building block of a forcing signal.
struct SignalTerm {
  enum class Kind { Constant, Sawtooth, Sine, Decay, PseudoRandom, Sampled };
  Kind kind = Kind::Constant;
  double amplitude = 1.0;
  double rate = 1.0;   // sawtooth: s(rate t); sine: sin(rate t + phase); decay: t e^{-rate t}; cell width
  double phase = 0.0;
  std::uint64_t seed = 0;
  // Sampled data on a uniform grid, linearly interpolated, held constant
  // outside the grid.
  std::shared_ptr<const std::vector<double>> samples;
  double t0 = 0.0;
  double dt = 1.0;

  double eval(double t, bool left) const;
  // Jump locations in [a, b].
  void breakpoints(double a, double b, std::vector<double>& out) const;
};

// v(t) = sum_k terms[k](t) * directions[k], with directions in R^m.
class SignalSpec {
 public:
  SignalSpec() = default;
  SignalSpec(std::string name, int dim, SignalClass cls);

  SignalSpec& add(const SignalTerm& term, const Vector& direction);

  // Right-continuous value; left = true gives the left limit.
  Vector operator()(double t, bool left = false) const;
  void eval_into(double t, bool left, Vector& out) const;

  // Sorted jump locations in [a, b].
  std::vector<double> breakpoints(double a, double b) const;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  SignalClass cls() const { return cls_; }
  // Declared period (Periodic class), else 0.
  double period() const { return period_; }
  void set_period(double tau) { period_ = tau; }
  // Angular frequencies of the almost-periodic part, where known.
  std::vector<double> frequencies() const;
  const std::vector<SignalTerm>& terms() const { return terms_; }

  // t -> v(t + tau).
  SignalSpec shifted(double tau) const;
  double shift() const { return shift_; }
  // t -> k v(t).
  SignalSpec scaled(double k) const;

  nlohmann::json descriptor() const;

 private:
  std::string name_;
  int dim_ = 1;
  SignalClass cls_ = SignalClass::Generic;
  double period_ = 0.0;
  double shift_ = 0.0;
  std::vector<SignalTerm> terms_;
  std::vector<Vector> directions_;
};

SignalSpec zero_signal(int m);
SignalSpec constant_signal(const Vector& c);
SignalSpec sine_signal(double omega, int m = 1, double amplitude = 1.0);

// v_p, v_s, v_ap and v_aap acting along the last coordinate of R^m.
std::map<std::string, SignalSpec> make_example_forcings(int m = 2);

// Piecewise-constant values in [-1, 1] on cells of the given width, from a
// seeded hash; a negative control for period scans.
SignalSpec pseudo_random_signal(double cell, std::uint64_t seed, int m = 1);

// Scalar samples on a uniform grid. Throws ValidationError when the times
// are not uniformly spaced (relative 1e-9).
SignalSpec sampled_signal(const std::vector<double>& times, const std::vector<double>& values,
                          std::string name = "sampled");

// Named lookup: "zero", "v_p", "v_s", "v_ap", "v_aap"; throws ValidationError.
SignalSpec signal_by_name(const std::string& name, int m);

}  // namespace lurelab
