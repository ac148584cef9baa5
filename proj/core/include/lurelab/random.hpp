#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace lurelab {

// Seeded generator with platform-independent real-valued draws. The engine is
// std::mt19937_64 (whose output sequence is fixed by the standard); the
// standard distributions are not, so doubles are mapped by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Independent stream for task `index` of a parallel loop.
  Rng fork(std::uint64_t index) const {
    return Rng(seed_mix(seed_ ^ seed_mix(index + 0x9E3779B97F4A7C15ULL)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  // Uniform on the unit sphere in R^n.
  Eigen::VectorXd unit_vector(Eigen::Index n) {
    Eigen::VectorXd v = normal_vector(n);
    double nv = v.norm();
    while (nv == 0.0) {
      v = normal_vector(n);
      nv = v.norm();
    }
    return v / nv;
  }

  // Uniform in the closed ball of the given radius.
  Eigen::VectorXd in_ball(Eigen::Index n, double radius) {
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return r * unit_vector(n);
  }

  Eigen::VectorXd in_box(Eigen::Index n, double half_width) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(-half_width, half_width);
    return v;
  }

 private:
  static std::uint64_t seed_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lurelab
