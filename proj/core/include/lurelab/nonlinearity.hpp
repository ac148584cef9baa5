#pragma once

#include "lurelab/linear.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace lurelab {

// a0 z + a1 z |z|^d
double power_law_eval(double a0, double a1, double d, double z);

enum class NonlinearityKind { Zero, Identity, NegatedIdentity, PowerLaw, Diagonal, Custom };

struct PowerLawParams {
  double a0 = 0.0;
  double a1 = 1.0;
  double d = 1.0;
};

// The feedback map f(t, y) of a Lur'e system, R_+ x R^m -> R^m.
class Nonlinearity {
 public:
  using VectorFn = std::function<Vector(double, const Vector&)>;
  using ScalarFn = std::function<double(double, double)>;

  static Nonlinearity zero(int m);
  static Nonlinearity identity(int m);
  static Nonlinearity negated_identity(int m);
  // Scalar (m = 1). Requires a0 >= 0, a1 > 0, d > 0.
  static Nonlinearity power_law(double a0, double a1, double d);
  // (f(t, z))_i = f_i(t, z_i); every component must be scalar.
  static Nonlinearity diagonal(const std::vector<Nonlinearity>& components);
  static Nonlinearity custom(int m, VectorFn fn, bool time_invariant, std::string label);
  static Nonlinearity custom_scalar(ScalarFn fn, bool time_invariant, std::string label);

  // Presets by descriptor: {"type": "power-law", "a0":..,"a1":..,"d":..},
  // {"type": "identity", "m": 2}, {"type": "negated-identity", "m": 2},
  // {"type": "zero", "m": 1}, {"type": "diagonal", "components": [...]}.
  static Nonlinearity from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Vector operator()(double t, const Vector& y) const;
  // Only for m = 1.
  double scalar(double t, double y) const;

  int dim() const { return dim_; }
  NonlinearityKind kind() const { return kind_; }
  bool time_invariant() const { return time_invariant_; }
  const PowerLawParams& power_params() const { return power_; }
  const std::vector<Nonlinearity>& components() const { return components_; }
  const std::string& label() const { return label_; }

 private:
  Nonlinearity() = default;

  int dim_ = 1;
  NonlinearityKind kind_ = NonlinearityKind::Custom;
  bool time_invariant_ = true;
  std::string label_;
  PowerLawParams power_;
  std::vector<Nonlinearity> components_;
  std::shared_ptr<const VectorFn> vector_fn_;
  std::shared_ptr<const ScalarFn> scalar_fn_;  // set iff dim_ == 1
  // Set for diagonal maps: componentwise scalar evaluators.
  std::vector<std::shared_ptr<const ScalarFn>> diag_fns_;
};

}  // namespace lurelab
