#include "lurelab/nonlinearity.hpp"

#include "lurelab/errors.hpp"

#include <cmath>

namespace lurelab {

double power_law_eval(double a0, double a1, double d, double z) {
  return a0 * z + a1 * z * std::pow(std::abs(z), d);
}

namespace {

std::shared_ptr<const Nonlinearity::ScalarFn> wrap_scalar(Nonlinearity::ScalarFn fn) {
  return std::make_shared<const Nonlinearity::ScalarFn>(std::move(fn));
}

}  // namespace

Nonlinearity Nonlinearity::zero(int m) {
  if (m < 1) throw ValidationError("nonlinearity dimension must be positive");
  Nonlinearity f;
  f.dim_ = m;
  f.kind_ = NonlinearityKind::Zero;
  f.label_ = "zero";
  if (m == 1) f.scalar_fn_ = wrap_scalar([](double, double) { return 0.0; });
  return f;
}

Nonlinearity Nonlinearity::identity(int m) {
  Nonlinearity f = zero(m);
  f.kind_ = NonlinearityKind::Identity;
  f.label_ = "identity";
  if (m == 1) f.scalar_fn_ = wrap_scalar([](double, double y) { return y; });
  return f;
}

Nonlinearity Nonlinearity::negated_identity(int m) {
  Nonlinearity f = zero(m);
  f.kind_ = NonlinearityKind::NegatedIdentity;
  f.label_ = "negated-identity";
  if (m == 1) f.scalar_fn_ = wrap_scalar([](double, double y) { return -y; });
  return f;
}

Nonlinearity Nonlinearity::power_law(double a0, double a1, double d) {
  if (!(a0 >= 0.0) || !(a1 > 0.0) || !(d > 0.0))
    throw ValidationError("power law requires a0 >= 0, a1 > 0, d > 0");
  Nonlinearity f;
  f.dim_ = 1;
  f.kind_ = NonlinearityKind::PowerLaw;
  f.power_ = {a0, a1, d};
  f.label_ = "power-law";
  if (d == 1.0)
    f.scalar_fn_ = wrap_scalar([a0, a1](double, double z) { return a0 * z + a1 * z * std::abs(z); });
  else
    f.scalar_fn_ = wrap_scalar([a0, a1, d](double, double z) { return power_law_eval(a0, a1, d, z); });
  return f;
}

Nonlinearity Nonlinearity::diagonal(const std::vector<Nonlinearity>& components) {
  if (components.empty()) throw ValidationError("diagonal nonlinearity needs components");
  Nonlinearity f;
  f.dim_ = static_cast<int>(components.size());
  f.kind_ = NonlinearityKind::Diagonal;
  f.label_ = "diagonal";
  f.components_ = components;
  for (const auto& c : components) {
    if (c.dim() != 1) throw ValidationError("diagonal components must be scalar");
    f.diag_fns_.push_back(c.scalar_fn_);
    f.time_invariant_ = f.time_invariant_ && c.time_invariant();
  }
  if (f.dim_ == 1) f.scalar_fn_ = f.diag_fns_[0];
  return f;
}

Nonlinearity Nonlinearity::custom(int m, VectorFn fn, bool time_invariant, std::string label) {
  if (m < 1) throw ValidationError("nonlinearity dimension must be positive");
  Nonlinearity f;
  f.dim_ = m;
  f.kind_ = NonlinearityKind::Custom;
  f.time_invariant_ = time_invariant;
  f.label_ = std::move(label);
  auto shared = std::make_shared<const VectorFn>(std::move(fn));
  f.vector_fn_ = shared;
  if (m == 1)
    f.scalar_fn_ = wrap_scalar([shared](double t, double y) {
      Vector v(1);
      v(0) = y;
      return (*shared)(t, v)(0);
    });
  return f;
}

Nonlinearity Nonlinearity::custom_scalar(ScalarFn fn, bool time_invariant, std::string label) {
  Nonlinearity f;
  f.dim_ = 1;
  f.kind_ = NonlinearityKind::Custom;
  f.time_invariant_ = time_invariant;
  f.label_ = std::move(label);
  f.scalar_fn_ = wrap_scalar(std::move(fn));
  return f;
}

Vector Nonlinearity::operator()(double t, const Vector& y) const {
  if (y.size() != dim_) throw DimensionError("nonlinearity argument has wrong dimension");
  switch (kind_) {
    case NonlinearityKind::Zero: return Vector::Zero(dim_);
    case NonlinearityKind::Identity: return y;
    case NonlinearityKind::NegatedIdentity: return -y;
    case NonlinearityKind::Diagonal: {
      Vector out(dim_);
      for (int i = 0; i < dim_; ++i) out(i) = (*diag_fns_[i])(t, y(i));
      return out;
    }
    default: break;
  }
  if (vector_fn_) return (*vector_fn_)(t, y);
  Vector out(1);
  out(0) = (*scalar_fn_)(t, y(0));
  return out;
}

double Nonlinearity::scalar(double t, double y) const {
  if (!scalar_fn_) throw DimensionError("scalar evaluation of a vector nonlinearity");
  return (*scalar_fn_)(t, y);
}

Nonlinearity Nonlinearity::from_json(const nlohmann::json& j) {
  if (j.is_string()) return from_json(nlohmann::json{{"type", j.get<std::string>()}});
  if (!j.is_object() || !j.contains("type"))
    throw ValidationError("nonlinearity descriptor needs a 'type'");
  const std::string type = j.at("type").get<std::string>();
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : j.items()) {
      bool known = k == "type";
      for (const char* a : keys) known = known || k == a;
      if (!known) throw ValidationError("unknown key '" + k + "' in nonlinearity '" + type + "'");
    }
  };
  const int m = j.value("m", 1);
  if (type == "zero") return allow({"m"}), zero(m);
  if (type == "identity") return allow({"m"}), identity(m);
  if (type == "negated-identity") return allow({"m"}), negated_identity(m);
  if (type == "power-law") {
    allow({"a0", "a1", "d"});
    return power_law(j.value("a0", 0.0), j.value("a1", 1.0), j.value("d", 1.0));
  }
  if (type == "diagonal") {
    allow({"components"});
    std::vector<Nonlinearity> comps;
    for (const auto& c : j.at("components")) comps.push_back(from_json(c));
    return diagonal(comps);
  }
  throw ValidationError("unknown nonlinearity type '" + type + "'");
}

nlohmann::json Nonlinearity::to_json() const {
  switch (kind_) {
    case NonlinearityKind::Zero: return {{"type", "zero"}, {"m", dim_}};
    case NonlinearityKind::Identity: return {{"type", "identity"}, {"m", dim_}};
    case NonlinearityKind::NegatedIdentity: return {{"type", "negated-identity"}, {"m", dim_}};
    case NonlinearityKind::PowerLaw:
      return {{"type", "power-law"}, {"a0", power_.a0}, {"a1", power_.a1}, {"d", power_.d}};
    case NonlinearityKind::Diagonal: {
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& c : components_) comps.push_back(c.to_json());
      return {{"type", "diagonal"}, {"components", comps}};
    }
    case NonlinearityKind::Custom: break;
  }
  return {{"type", "custom"}, {"label", label_}, {"m", dim_}};
}

}  // namespace lurelab
