#pragma once

#include "lurelab/comparison.hpp"
#include "lurelab/linear.hpp"
#include "lurelab/random.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace lurelab {

enum class SectorVariant { F, F0 };

// Bounding data of the sector correspondence
//   F(y) = { w : |w| <= theta(|y|), <w, y> >= |y| alpha(|y|),
//                c <w, y> >= |w| whenever |y| > mu },
// and of F0, which drops the last condition.
struct SectorData {
  ScalarFunc theta;
  ScalarFunc alpha;
  double mu = 1.0;
  double c = 1.0;
  SectorVariant variant = SectorVariant::F;
  // theta as supplied, before any theta -> theta + alpha inflation.
  ScalarFunc theta_raw;
  bool inflated = false;

  // Validates mu > 0, c > 0, c mu >= 1 and alpha <= theta on a grid; throws
  // ValidationError otherwise.
  static SectorData make(ScalarFunc theta, ScalarFunc alpha, double mu, double c,
                         SectorVariant variant = SectorVariant::F);

  // Same data with theta replaced by theta + alpha, which makes
  // sqrt(theta^2 - alpha^2) non-decreasing whenever theta and alpha are.
  SectorData inflate_theta() const;

  // r(s) = sqrt(theta(s)^2 - alpha(s)^2)
  double r(double s) const;

  nlohmann::json to_json() const;
};

struct SectorIssues {
  bool ok = true;
  std::vector<std::string> issues;
};

// Grid checks of the invariants: alpha <= theta, c mu >= 1 and, for F0,
// monotone r.
SectorIssues validate_sector(const SectorData& sector, const std::vector<double>& grid);

struct Membership {
  bool member = false;
  bool norm_bound = false;   // |w| <= theta(|y|)
  bool inner_bound = false;  // <w, y> >= |y| alpha(|y|)
  bool cone_bound = false;   // c <w, y> >= |w| (vacuous when inactive)
  bool cone_active = false;
};

Membership membership_F(const Vector& w, const Vector& y, const SectorData& sector);

// theta(|y|) y / |y|, and 0 at y = 0.
Vector canonical_selection(const Vector& y, const SectorData& sector);

// Elements of F(y) (or F0(y)) written as a yhat + b e with e a unit vector
// orthogonal to y. kind 0: canonical; 1: boundary (largest admissible |b|);
// 2: interior (uniform a, uniform fraction of the admissible |b|).
Vector sample_F(const Vector& y, const SectorData& sector, Rng& rng, int kind);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// F0(y) = sign(y) [alpha(|y|), theta(|y|)] for m = 1.
Interval interval_F0_1d(double y, const SectorData& sector);

// Hausdorff distance between F0(y1) and F0(y2): exact for m = 1, boundary
// sampled with exact projections for m = 2. Throws UnsupportedDimensionError
// for m > 2.
double hausdorff_F0(const Vector& y1, const Vector& y2, const SectorData& sector,
                    int boundary_samples = 512);

struct Lemma34Report {
  bool pass = true;
  double eps = 0.0;
  double worst_g1 = -1e300;  // max of 2<u,y> - <y,w> - 2 alpha^{-1}(2|u|)|u|
  double worst_g2 = -1e300;  // max of eta(|y|)|y|^2 + eta(|w|)|w|^2 - <y,w>, |y| <= mu
  double worst_g3 = -1e300;  // max of eps(|w| + |y|) - <y,w>, |y| > mu
  int samples = 0;
};

// eps = min{1/(2c), alpha(mu)/2}
double lemma34_eps(const SectorData& sector);
// eta from compose_eta with beta1 = s + theta, beta2 = 2(s^2 + theta^2),
// beta3 = s alpha.
ScalarFunc lemma34_eta(const SectorData& sector);

Lemma34Report lemma34_bounds_check(const SectorData& sector, int samples = 10000,
                                   double radius = 10.0, std::uint64_t seed = 1);

}  // namespace lurelab
