#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lurelab {

// Comparison-function classes. K: continuous, zero at zero, strictly
// increasing. KInfinity: K and unbounded. P: continuous, zero at zero,
// positive elsewhere. L: non-increasing to zero.
enum class FuncClass { K, KInfinity, P, L, Generic };

const char* to_string(FuncClass cls);
FuncClass func_class_from_string(const std::string& name);

// sum_i coeffs[i] * s^i
struct PolynomialForm {
  std::vector<double> coeffs;
};

// coef * s^exponent
struct PowerForm {
  double coef = 1.0;
  double exponent = 1.0;
};

// Linear interpolation through (xs, ys); xs strictly increasing, xs[0] = 0.
struct PiecewiseLinearForm {
  std::vector<double> xs;
  std::vector<double> ys;
};

// No closed form; the label is informational only.
struct OpaqueForm {
  std::string label;
};

using FuncForm = std::variant<PolynomialForm, PowerForm, PiecewiseLinearForm, OpaqueForm>;

// An evaluable map R+ -> R+ carrying its comparison class and, when known,
// a closed-form descriptor that survives serialisation.
class ScalarFunc {
 public:
  static ScalarFunc identity();
  static ScalarFunc zero();
  static ScalarFunc power(double coef, double exponent, FuncClass cls = FuncClass::KInfinity);
  static ScalarFunc polynomial(std::vector<double> coeffs, FuncClass cls = FuncClass::KInfinity);
  // Beyond the last breakpoint a KInfinity function continues with its last
  // slope; every other class is held constant.
  static ScalarFunc piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                     FuncClass cls = FuncClass::P);
  static ScalarFunc custom(std::function<double(double)> fn, FuncClass cls, std::string label);

  double operator()(double s) const { return (*fn_)(s); }

  // Smallest s >= 0 with f(s) >= value, by bracketing and bisection.
  // Only meaningful for increasing functions.
  double inverse(double value, double rel_tol = 1e-12) const;

  FuncClass cls() const { return cls_; }
  const FuncForm& form() const { return form_; }
  std::string describe() const;

  ScalarFunc with_class(FuncClass cls) const;

 private:
  ScalarFunc(std::shared_ptr<const std::function<double(double)>> fn, FuncClass cls, FuncForm form)
      : fn_(std::move(fn)), cls_(cls), form_(std::move(form)) {}

  std::shared_ptr<const std::function<double(double)>> fn_;
  FuncClass cls_;
  FuncForm form_;
};

ScalarFunc operator+(const ScalarFunc& a, const ScalarFunc& b);
ScalarFunc operator*(double k, const ScalarFunc& f);
// s -> f(s)^2
ScalarFunc squared(const ScalarFunc& f);
// s -> s * f(s)
ScalarFunc times_identity(const ScalarFunc& f);

struct ClassCheck {
  bool ok = true;
  std::string reason;
};

// Spot-checks the declared class on a grid: zero at zero (K, KInfinity, P),
// non-negativity, and monotonicity for K / KInfinity.
ClassCheck check_class(const ScalarFunc& f, const std::vector<double>& grid);

// 0, then `count` points geometrically spaced between lo and hi.
std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace lurelab
