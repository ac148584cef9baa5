#include "lurelab/signals.hpp"

#include "lurelab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lurelab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Integer part of r, with r snapped onto a nearby integer so that jump
// locations computed as k * width land exactly on the jump.
double cycle_index(double r, bool left) {
  const double k = std::round(r);
  if (std::abs(r - k) <= 1e-12 * std::max(1.0, std::abs(r))) return left ? k - 1.0 : k;
  return std::floor(r);
}

double snapped_fraction(double r, bool left) {
  const double k = std::round(r);
  if (std::abs(r - k) <= 1e-12 * std::max(1.0, std::abs(r))) return left ? 1.0 : 0.0;
  return r - std::floor(r);
}

double hash01(std::uint64_t seed, std::int64_t j) {
  std::uint64_t z = seed ^ (static_cast<std::uint64_t>(j) * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

void grid_points(double width, double a, double b, std::vector<double>& out) {
  if (!(width > 0.0) || b < a) return;
  const double k0 = std::ceil(a / width - 1e-12);
  const double k1 = std::floor(b / width + 1e-12);
  for (double k = k0; k <= k1; k += 1.0) out.push_back(k * width);
}

}  // namespace

double sawtooth(double t) {
  const double r = t / kTwoPi;
  return -1.0 + 2.0 * snapped_fraction(r, false);
}

const char* to_string(SignalClass cls) {
  switch (cls) {
    case SignalClass::Periodic: return "periodic";
    case SignalClass::AlmostPeriodic: return "almost-periodic";
    case SignalClass::StepanovAP: return "stepanov-almost-periodic";
    case SignalClass::AsymptoticallyAP: return "asymptotically-almost-periodic";
    case SignalClass::Generic: return "generic";
  }
  return "generic";
}

double SignalTerm::eval(double t, bool left) const {
  switch (kind) {
    case Kind::Constant: return amplitude;
    case Kind::Sawtooth:
      return amplitude * (-1.0 + 2.0 * snapped_fraction(rate * t / kTwoPi, left));
    case Kind::Sine: return amplitude * std::sin(rate * t + phase);
    case Kind::Decay: return t < 0.0 ? 0.0 : amplitude * t * std::exp(-rate * t);
    case Kind::PseudoRandom: {
      const double j = cycle_index(t / rate, left);
      return amplitude * (2.0 * hash01(seed, static_cast<std::int64_t>(j)) - 1.0);
    }
    case Kind::Sampled: {
      const auto& v = *samples;
      const double r = (t - t0) / dt;
      if (r <= 0.0) return amplitude * v.front();
      const double last = static_cast<double>(v.size() - 1);
      if (r >= last) return amplitude * v.back();
      const auto j = static_cast<std::size_t>(std::floor(r));
      const double f = r - static_cast<double>(j);
      return amplitude * ((1.0 - f) * v[j] + f * v[j + 1]);
    }
  }
  return 0.0;
}

void SignalTerm::breakpoints(double a, double b, std::vector<double>& out) const {
  if (kind == Kind::Sawtooth && rate != 0.0) grid_points(kTwoPi / std::abs(rate), a, b, out);
  if (kind == Kind::PseudoRandom) grid_points(rate, a, b, out);
}

SignalSpec::SignalSpec(std::string name, int dim, SignalClass cls)
    : name_(std::move(name)), dim_(dim), cls_(cls) {
  if (dim < 1) throw ValidationError("signal dimension must be positive");
}

SignalSpec& SignalSpec::add(const SignalTerm& term, const Vector& direction) {
  if (direction.size() != dim_) throw DimensionError("signal term direction has wrong size");
  if (term.kind == SignalTerm::Kind::PseudoRandom && !(term.rate > 0.0))
    throw ValidationError("pseudo-random cell width must be positive");
  terms_.push_back(term);
  directions_.push_back(direction);
  return *this;
}

void SignalSpec::eval_into(double t, bool left, Vector& out) const {
  out.setZero(dim_);
  const double ts = t + shift_;
  for (std::size_t k = 0; k < terms_.size(); ++k) out += terms_[k].eval(ts, left) * directions_[k];
}

Vector SignalSpec::operator()(double t, bool left) const {
  Vector out;
  eval_into(t, left, out);
  return out;
}

std::vector<double> SignalSpec::breakpoints(double a, double b) const {
  std::vector<double> out;
  for (const auto& term : terms_) term.breakpoints(a + shift_, b + shift_, out);
  for (double& t : out) t -= shift_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SignalSpec SignalSpec::shifted(double tau) const {
  SignalSpec s = *this;
  s.shift_ += tau;
  return s;
}

SignalSpec SignalSpec::scaled(double k) const {
  SignalSpec s = *this;
  for (auto& d : s.directions_) d *= k;
  return s;
}

std::vector<double> SignalSpec::frequencies() const {
  std::vector<double> f;
  for (const auto& term : terms_)
    if (term.kind == SignalTerm::Kind::Sine || term.kind == SignalTerm::Kind::Sawtooth)
      f.push_back(std::abs(term.rate));
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

nlohmann::json SignalSpec::descriptor() const {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    const char* kind = "constant";
    switch (t.kind) {
      case SignalTerm::Kind::Constant: kind = "constant"; break;
      case SignalTerm::Kind::Sawtooth: kind = "sawtooth"; break;
      case SignalTerm::Kind::Sine: kind = "sine"; break;
      case SignalTerm::Kind::Decay: kind = "decay"; break;
      case SignalTerm::Kind::PseudoRandom: kind = "pseudo-random"; break;
      case SignalTerm::Kind::Sampled: kind = "sampled"; break;
    }
    std::vector<double> dir(directions_[k].data(), directions_[k].data() + dim_);
    terms.push_back({{"kind", kind}, {"amplitude", t.amplitude}, {"rate", t.rate},
                     {"phase", t.phase}, {"direction", dir}});
  }
  nlohmann::json j{{"name", name_}, {"dim", dim_}, {"class", to_string(cls_)}, {"terms", terms}};
  if (period_ > 0.0) j["period"] = period_;
  if (shift_ != 0.0) j["shift"] = shift_;
  return j;
}

SignalSpec zero_signal(int m) { return SignalSpec("zero", m, SignalClass::Periodic); }

SignalSpec constant_signal(const Vector& c) {
  SignalSpec s("constant", static_cast<int>(c.size()), SignalClass::Periodic);
  SignalTerm t;
  t.kind = SignalTerm::Kind::Constant;
  s.add(t, c);
  return s;
}

SignalSpec sine_signal(double omega, int m, double amplitude) {
  SignalSpec s("sine", m, SignalClass::Periodic);
  SignalTerm t;
  t.kind = SignalTerm::Kind::Sine;
  t.rate = omega;
  t.amplitude = amplitude;
  s.add(t, Vector::Unit(m, m - 1));
  if (omega != 0.0) s.set_period(kTwoPi / std::abs(omega));
  return s;
}

std::map<std::string, SignalSpec> make_example_forcings(int m) {
  const Vector e = Vector::Unit(m, m - 1);
  auto term = [](SignalTerm::Kind kind, double rate) {
    SignalTerm t;
    t.kind = kind;
    t.rate = rate;
    return t;
  };
  const SignalTerm saw1 = term(SignalTerm::Kind::Sawtooth, 0.75);
  const SignalTerm saw2 = term(SignalTerm::Kind::Sawtooth, 0.75 * std::sqrt(2.0));
  const SignalTerm sin1 = term(SignalTerm::Kind::Sine, 2.0 * std::sqrt(2.0) * M_PI);
  const SignalTerm sin2 = term(SignalTerm::Kind::Sine, 2.0 * M_PI);
  const SignalTerm zeta = term(SignalTerm::Kind::Decay, 1.5);

  std::map<std::string, SignalSpec> out;
  SignalSpec vp("v_p", m, SignalClass::Periodic);
  vp.add(saw1, e);
  vp.set_period(kTwoPi / 0.75);
  out.emplace("v_p", vp);

  SignalSpec vs("v_s", m, SignalClass::StepanovAP);
  vs.add(saw1, e).add(saw2, e);
  out.emplace("v_s", vs);

  SignalSpec vap("v_ap", m, SignalClass::AlmostPeriodic);
  vap.add(sin1, e).add(sin2, e);
  out.emplace("v_ap", vap);

  SignalSpec vaap("v_aap", m, SignalClass::AsymptoticallyAP);
  vaap.add(saw1, e).add(saw2, e).add(zeta, e);
  out.emplace("v_aap", vaap);
  return out;
}

SignalSpec pseudo_random_signal(double cell, std::uint64_t seed, int m) {
  SignalSpec s("pseudo-random", m, SignalClass::Generic);
  SignalTerm t;
  t.kind = SignalTerm::Kind::PseudoRandom;
  t.rate = cell;
  t.seed = seed;
  s.add(t, Vector::Unit(m, m - 1));
  return s;
}

SignalSpec sampled_signal(const std::vector<double>& times, const std::vector<double>& values,
                          std::string name) {
  if (times.size() != values.size() || times.size() < 2)
    throw ValidationError("sampled signal needs >= 2 (t, v) rows");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ValidationError("sampled signal times must increase");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expect = times.front() + dt * static_cast<double>(i);
    if (std::abs(times[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)) + 1e-9 * dt)
      throw ValidationError("sampled signal grid is not uniform at row " + std::to_string(i));
  }
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("sampled signal has non-finite values");
  SignalSpec s(std::move(name), 1, SignalClass::Generic);
  SignalTerm t;
  t.kind = SignalTerm::Kind::Sampled;
  t.samples = std::make_shared<const std::vector<double>>(values);
  t.t0 = times.front();
  t.dt = dt;
  s.add(t, Vector::Ones(1));
  return s;
}

SignalSpec signal_by_name(const std::string& name, int m) {
  if (name == "zero") return zero_signal(m);
  auto ex = make_example_forcings(m);
  auto it = ex.find(name);
  if (it != ex.end()) return it->second;
  if (name.rfind("sine:", 0) == 0) {
    try {
      return sine_signal(std::stod(name.substr(5)), m);
    } catch (const std::invalid_argument&) {
    }
  }
  throw ValidationError("unknown forcing '" + name + "' (expected zero, v_p, v_s, v_ap, v_aap, sine:<omega>)");
}

}  // namespace lurelab
