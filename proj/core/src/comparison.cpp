#include "lurelab/comparison.hpp"

#include "lurelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lurelab {

namespace {

using Fn = std::function<double(double)>;

std::shared_ptr<const Fn> wrap(Fn fn) { return std::make_shared<const Fn>(std::move(fn)); }

double eval_polynomial(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

}  // namespace

const char* to_string(FuncClass cls) {
  switch (cls) {
    case FuncClass::K: return "K";
    case FuncClass::KInfinity: return "Kinf";
    case FuncClass::P: return "P";
    case FuncClass::L: return "L";
    case FuncClass::Generic: return "generic";
  }
  return "generic";
}

FuncClass func_class_from_string(const std::string& name) {
  if (name == "K") return FuncClass::K;
  if (name == "Kinf" || name == "KInfinity") return FuncClass::KInfinity;
  if (name == "P") return FuncClass::P;
  if (name == "L") return FuncClass::L;
  if (name == "generic") return FuncClass::Generic;
  throw ValidationError("unknown function class '" + name + "'");
}

ScalarFunc ScalarFunc::identity() { return power(1.0, 1.0, FuncClass::KInfinity); }

ScalarFunc ScalarFunc::zero() {
  return ScalarFunc(wrap([](double) { return 0.0; }), FuncClass::Generic, PolynomialForm{{0.0}});
}

ScalarFunc ScalarFunc::power(double coef, double exponent, FuncClass cls) {
  if (!(exponent > 0.0)) throw ValidationError("power exponent must be positive");
  return ScalarFunc(wrap([coef, exponent](double s) { return coef * std::pow(s, exponent); }),
                    cls, PowerForm{coef, exponent});
}

ScalarFunc ScalarFunc::polynomial(std::vector<double> coeffs, FuncClass cls) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  auto c = coeffs;
  return ScalarFunc(wrap([c](double s) { return eval_polynomial(c, s); }), cls,
                    PolynomialForm{std::move(coeffs)});
}

ScalarFunc ScalarFunc::piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                        FuncClass cls) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ValidationError("piecewise-linear function needs matching xs/ys with >= 2 points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ValidationError("piecewise-linear breakpoints must increase");
  const bool extend_slope = cls == FuncClass::KInfinity;
  auto fn = [xs, ys, extend_slope](double s) {
    if (s <= xs.front()) return ys.front();
    if (s >= xs.back()) {
      if (!extend_slope) return ys.back();
      const std::size_t k = xs.size() - 1;
      const double slope = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
      return ys.back() + slope * (s - xs.back());
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double t = (s - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
  };
  return ScalarFunc(wrap(std::move(fn)), cls, PiecewiseLinearForm{std::move(xs), std::move(ys)});
}

ScalarFunc ScalarFunc::custom(std::function<double(double)> fn, FuncClass cls, std::string label) {
  return ScalarFunc(wrap(std::move(fn)), cls, OpaqueForm{std::move(label)});
}

ScalarFunc ScalarFunc::with_class(FuncClass cls) const { return ScalarFunc(fn_, cls, form_); }

double ScalarFunc::inverse(double value, double rel_tol) const {
  if (value <= (*this)(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while ((*this)(hi) < value) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi))
      throw ValidationError("inverse: function does not reach " + std::to_string(value));
  }
  double flo = (*this)(lo), fhi = (*this)(hi);
  for (int it = 0; it < 400 && hi - lo > rel_tol * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = (*this)(mid);
    if (fm >= value) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  // Interpolating inside the final bracket keeps the result continuous in value.
  if (fhi > flo) return lo + (hi - lo) * std::clamp((value - flo) / (fhi - flo), 0.0, 1.0);
  return hi;
}

std::string ScalarFunc::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PolynomialForm>) {
          os << "poly[";
          for (std::size_t i = 0; i < f.coeffs.size(); ++i) os << (i ? "," : "") << f.coeffs[i];
          os << "]";
        } else if constexpr (std::is_same_v<T, PowerForm>) {
          os << f.coef << "*s^" << f.exponent;
        } else if constexpr (std::is_same_v<T, PiecewiseLinearForm>) {
          os << "pwl(" << f.xs.size() << " pts)";
        } else {
          os << f.label;
        }
      },
      form_);
  return os.str();
}

ScalarFunc operator+(const ScalarFunc& a, const ScalarFunc& b) {
  const auto* pa = std::get_if<PolynomialForm>(&a.form());
  const auto* pb = std::get_if<PolynomialForm>(&b.form());
  const FuncClass cls = a.cls() == b.cls() ? a.cls() : FuncClass::Generic;
  if (pa && pb) {
    std::vector<double> c(std::max(pa->coeffs.size(), pb->coeffs.size()), 0.0);
    for (std::size_t i = 0; i < pa->coeffs.size(); ++i) c[i] += pa->coeffs[i];
    for (std::size_t i = 0; i < pb->coeffs.size(); ++i) c[i] += pb->coeffs[i];
    return ScalarFunc::polynomial(std::move(c), cls);
  }
  return ScalarFunc::custom([a, b](double s) { return a(s) + b(s); }, cls,
                            "(" + a.describe() + ")+(" + b.describe() + ")");
}

ScalarFunc operator*(double k, const ScalarFunc& f) {
  if (const auto* p = std::get_if<PowerForm>(&f.form()))
    return ScalarFunc::power(k * p->coef, p->exponent, f.cls());
  if (const auto* p = std::get_if<PolynomialForm>(&f.form())) {
    auto c = p->coeffs;
    for (auto& x : c) x *= k;
    return ScalarFunc::polynomial(std::move(c), f.cls());
  }
  return ScalarFunc::custom([k, f](double s) { return k * f(s); }, f.cls(),
                            std::to_string(k) + "*(" + f.describe() + ")");
}

ScalarFunc squared(const ScalarFunc& f) {
  if (const auto* p = std::get_if<PowerForm>(&f.form()))
    return ScalarFunc::power(p->coef * p->coef, 2.0 * p->exponent, f.cls());
  return ScalarFunc::custom([f](double s) { const double v = f(s); return v * v; }, f.cls(),
                            "(" + f.describe() + ")^2");
}

ScalarFunc times_identity(const ScalarFunc& f) {
  if (const auto* p = std::get_if<PowerForm>(&f.form()))
    return ScalarFunc::power(p->coef, p->exponent + 1.0, f.cls());
  return ScalarFunc::custom([f](double s) { return s * f(s); }, f.cls(),
                            "s*(" + f.describe() + ")");
}

ClassCheck check_class(const ScalarFunc& f, const std::vector<double>& grid) {
  const FuncClass cls = f.cls();
  ClassCheck out;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.reason = std::move(why);
    return out;
  };
  if (cls == FuncClass::Generic) return out;
  const double f0 = f(0.0);
  if (cls != FuncClass::L && std::abs(f0) > 1e-12) return fail("f(0) != 0");
  double prev = f0;
  double prev_s = 0.0;
  for (double s : grid) {
    const double v = f(s);
    if (!std::isfinite(v) || v < 0.0) return fail("negative or non-finite at s=" + std::to_string(s));
    if (s > 0.0 && cls == FuncClass::P && !(v > 0.0))
      return fail("not positive at s=" + std::to_string(s));
    if ((cls == FuncClass::K || cls == FuncClass::KInfinity) && s > prev_s && !(v > prev))
      return fail("not strictly increasing near s=" + std::to_string(s));
    if (cls == FuncClass::L && s > prev_s && v > prev + 1e-15)
      return fail("not non-increasing near s=" + std::to_string(s));
    if (s > prev_s) {
      prev = v;
      prev_s = s;
    }
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g{0.0};
  if (count <= 0) return g;
  if (count == 1) {
    g.push_back(hi);
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  std::vector<double> g;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
  return g;
}

}  // namespace lurelab
