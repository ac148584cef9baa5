#pragma once

#include "lurelab/comparison.hpp"
#include "lurelab/nonlinearity.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lurelab {

// Closed ball (center, radius) or an explicit finite point cloud.
class CompactSetSpec {
 public:
  static CompactSetSpec ball(Vector center, double radius);
  static CompactSetSpec points(std::vector<Vector> cloud);

  int dim() const { return dim_; }
  bool is_ball() const { return is_ball_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  // Largest norm of a member.
  double reach() const;
  // Representative members: the cloud itself, or center, shells and
  // boundary points of the ball.
  std::vector<Vector> samples(int per_shell = 16) const;

 private:
  int dim_ = 1;
  bool is_ball_ = true;
  Vector center_;
  double radius_ = 0.0;
  std::vector<Vector> cloud_;
};

// Candidate data for the five hypotheses on one compact set.
struct HypothesisCandidates {
  ScalarFunc theta = ScalarFunc::zero();  // (A1), class Kinf
  ScalarFunc alpha = ScalarFunc::zero();  // (A2), class P; (A3) additionally needs Kinf
  double mu = 1.0;   // (A4)
  double c = 1.0;    // (A4)
  double eps = 1e-4; // (A5): inner-product ratio floor
};

struct SamplingPlan {
  double y_radius = 10.0;
  int radial = 64;
  int angular = 32;
  int points_1d = 201;
  // Log-spaced radii added below the linear radial grid, down to
  // y_radius * 1e-6, so small-signal behaviour is visible.
  int small_radii = 24;
  int gamma_per_shell = 16;
  std::vector<double> times{0.0};
};

struct HypothesisVerdict {
  std::string name;
  bool pass = true;
  double worst = -1e300;  // largest violation (positive = violated)
  Vector y_at;
  Vector z_at;
  double t_at = 0.0;
  std::string note;
};

struct HypothesisReport {
  std::array<HypothesisVerdict, 5> verdicts;
  int grid_points = 0;

  const HypothesisVerdict& operator[](int i) const { return verdicts.at(i - 1); }
  bool passes(std::initializer_list<int> which) const;
  nlohmann::json to_json() const;
};

// The y-grid used by the verifiers: 1-d points, or radial x angular in 2-d,
// random directions in higher dimension.
std::vector<Vector> hypothesis_y_grid(int m, const SamplingPlan& plan);

HypothesisReport verify_A1_A5(const Nonlinearity& f, const CompactSetSpec& gamma,
                              const HypothesisCandidates& cand, const SamplingPlan& plan = {});

struct AlphaInfimum {
  ScalarFunc alpha = ScalarFunc::zero();
  std::vector<double> radii;
  std::vector<double> raw;  // sampled infimum before the monotone envelope
  bool kinf = false;        // growth test passed
  bool violation = false;   // a negative infimum was seen
  Vector violation_y;
  Vector violation_z;
};

// alpha(s) = inf over |y| = s (sampled directions) and z in Gamma of
// <y, f(y+z) - f(z)> / |y|, made monotone (running minimum from the right),
// clamped at 0 and returned as a piecewise-linear function. Throws
// ValidationError if a negative infimum is found.
AlphaInfimum construct_alpha_infimum(const Nonlinearity& f, const CompactSetSpec& gamma,
                                     const std::vector<double>& radial_grid, int directions = 32);

// Smallest mu on the grid such that |f(y+z) - f(z)| <= c <y, f(y+z) - f(z)>
// for every sampled |y| > mu, then raised to at least 1/c.
double find_A4_mu(const Nonlinearity& f, const CompactSetSpec& gamma, double c,
                  const SamplingPlan& plan = {});

// Brute-force inf of (a - b)(g(a) - g(b)) / |a - b|^{d+2} for g(z) = z|z|^d;
// by homogeneity this is the minimum over t of g(t) - g(t - 1).
double power_law_monotone_constant(double d, int samples = 200001);

// Candidate (A1)-(A3) functions for a diagonal map of power laws on a ball
// of radius R around 0.
HypothesisCandidates power_law_candidates(const std::vector<PowerLawParams>& comps, double R);

// Componentwise composition (f(t, z))_i = f_i(t, z_i).
Nonlinearity diagonal_compose(const std::vector<Nonlinearity>& components);

}  // namespace lurelab
