#include "lurelab/errors.hpp"
#include "lurelab/experiments.hpp"
#include "lurelab/hypotheses.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lurelab;

namespace {

CompactSetSpec ball(int m, double r) { return CompactSetSpec::ball(Vector::Zero(m), r); }

HypothesisCandidates identity_candidates() {
  HypothesisCandidates c;
  c.theta = ScalarFunc::identity();
  c.alpha = ScalarFunc::identity();
  c.mu = 1.0;
  c.c = 1.0;
  return c;
}

}  // namespace

TEST(Hypotheses, IdentityPassesAll) {
  for (int m : {1, 2}) {
    const auto rep = verify_A1_A5(Nonlinearity::identity(m), ball(m, 2.0), identity_candidates());
    for (int i = 1; i <= 5; ++i) EXPECT_TRUE(rep[i].pass) << "m=" << m << " A" << i << " " << rep[i].note;
    EXPECT_GT(rep.grid_points, 0);
  }
}

TEST(Hypotheses, NegatedIdentityFailsA2WithWitness) {
  const auto rep = verify_A1_A5(Nonlinearity::negated_identity(2), ball(2, 1.0), identity_candidates());
  EXPECT_FALSE(rep[2].pass);
  ASSERT_EQ(rep[2].y_at.size(), 2);
  EXPECT_GT(rep[2].y_at.norm(), 0.0);
  EXPECT_GT(rep[2].worst, 0.0);
  EXPECT_FALSE(rep[5].pass);
}

TEST(Hypotheses, ScalarA2ImpliesA4WithUnitConstants) {
  // In one dimension <y, df> = |y| |df| once (A2) holds, so |df| <= c <y, df>
  // whenever |y| >= 1/c.
  for (double d : {1.0, 1.5, 3.0}) {
    const auto f = Nonlinearity::power_law(0.0, 1.0, d);
    HypothesisCandidates c = power_law_candidates({{0.0, 1.0, d}}, 2.0);
    c.mu = 1.0;
    c.c = 1.0;
    const auto rep = verify_A1_A5(f, ball(1, 2.0), c);
    EXPECT_TRUE(rep.passes({1, 2, 3, 4})) << "d=" << d;
  }
}

TEST(Hypotheses, QuadraticDragWithInfimumAlpha) {
  const auto f = Nonlinearity::power_law(0.0, 1.0, 1.0);
  const auto gamma = ball(1, 1.0);
  SamplingPlan plan;
  std::vector<double> radii;
  for (const auto& y : hypothesis_y_grid(1, plan)) radii.push_back(y.norm());
  const auto inf = construct_alpha_infimum(f, gamma, radii);
  // Brute force: c = min over the sampled radii of alpha(s) / s^2.
  double c = 1e300;
  for (std::size_t i = 0; i < inf.radii.size(); ++i) c = std::min(c, inf.raw[i] / (inf.radii[i] * inf.radii[i]));
  EXPECT_GE(c, 0.5 - 1e-9);
  HypothesisCandidates cand = power_law_candidates({{0.0, 1.0, 1.0}}, 1.0);
  cand.alpha = ScalarFunc::power(c, 2.0);
  const auto rep = verify_A1_A5(f, gamma, cand, plan);
  EXPECT_TRUE(rep[2].pass) << rep[2].worst;
  EXPECT_TRUE(rep[3].pass) << rep[3].worst;
}

TEST(Hypotheses, TwoMassDiagonalPassesA1ToA4AndFailsA5) {
  const auto p = preset_two_mass();
  for (double R : {1.0, 2.0, 5.0}) {
    const auto rep = verify_preset_hypotheses(p, R);
    EXPECT_TRUE(rep.passes({1, 2, 3, 4})) << "R=" << R << " " << rep.to_json().dump();
    EXPECT_FALSE(rep[5].pass) << "R=" << R;
  }
}

TEST(Hypotheses, LinearTermRestoresA5) {
  const auto f = Nonlinearity::power_law(0.5, 1.0, 1.0);
  HypothesisCandidates c = power_law_candidates({{0.5, 1.0, 1.0}}, 1.0);
  c.mu = 1.0;
  c.c = 1.0;
  c.eps = 0.25;
  EXPECT_TRUE(verify_A1_A5(f, ball(1, 1.0), c)[5].pass);
}

TEST(Hypotheses, UntestableMuFailsA4) {
  auto c = identity_candidates();
  c.mu = 50.0;
  c.c = 1.0;
  EXPECT_FALSE(verify_A1_A5(Nonlinearity::identity(1), ball(1, 1.0), c)[4].pass);
}

TEST(AlphaInfimum, IdentityGivesIdentity) {
  const auto radii = linear_grid(0.1, 5.0, 50);
  const auto inf = construct_alpha_infimum(Nonlinearity::identity(2), CompactSetSpec::points({Vector::Zero(2)}), radii);
  for (double s : radii) EXPECT_NEAR(inf.alpha(s), s, 1e-12);
  EXPECT_TRUE(inf.kinf);
}

TEST(AlphaInfimum, QuadraticAtOrigin) {
  const auto radii = linear_grid(0.1, 5.0, 50);
  const auto inf = construct_alpha_infimum(Nonlinearity::power_law(0.0, 1.0, 1.0),
                                           CompactSetSpec::points({Vector::Zero(1)}), radii);
  for (double s : radii) EXPECT_NEAR(inf.alpha(s), s * s, 1e-12 * (1.0 + s * s));
}

TEST(AlphaInfimum, CubicOnUnitBallIsPositive) {
  const auto cubic = Nonlinearity::custom_scalar([](double, double z) { return z * z * z; }, true, "z^3");
  const auto radii = linear_grid(0.05, 3.0, 60);
  const auto gamma = ball(1, 1.0);
  const auto inf = construct_alpha_infimum(cubic, gamma, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) EXPECT_GT(inf.alpha(radii[i]), 0.0);
  // Grid infimum oracle: the envelope never exceeds the sampled infimum.
  for (std::size_t i = 0; i < inf.radii.size(); ++i) {
    double best = 1e300;
    for (const auto& z : gamma.samples())
      for (double sgn : {-1.0, 1.0}) {
        const double y = sgn * inf.radii[i];
        best = std::min(best, y * (std::pow(y + z(0), 3) - std::pow(z(0), 3)) / std::abs(y));
      }
    EXPECT_LE(inf.alpha(inf.radii[i]), best + 1e-12);
  }
}

TEST(AlphaInfimum, NegativeInfimumThrows) {
  EXPECT_THROW(construct_alpha_infimum(Nonlinearity::negated_identity(1), ball(1, 1.0), linear_grid(0.1, 1.0, 5)),
               ValidationError);
}

TEST(PowerLawConstant, MatchesBruteForceOnPairs) {
  for (double d : {1.0, 2.0, 3.0}) {
    const double c = power_law_monotone_constant(d);
    oracle::Gen g(static_cast<std::uint64_t>(d));
    double worst = 1e300;
    for (int i = 0; i < 20000; ++i) {
      const double a = g.uniform(-3.0, 3.0), b = g.uniform(-3.0, 3.0);
      if (std::abs(a - b) < 1e-3) continue;
      const double ga = a * std::pow(std::abs(a), d), gb = b * std::pow(std::abs(b), d);
      worst = std::min(worst, (a - b) * (ga - gb) / std::pow(std::abs(a - b), d + 2.0));
    }
    EXPECT_LE(c, worst + 1e-9);
    EXPECT_GT(c, 0.0);
    EXPECT_NEAR(c, worst, 0.05 * worst);
  }
  EXPECT_NEAR(power_law_monotone_constant(1.0), 0.5, 1e-9);
}

// For f = id, |d| <= 2 <y, d> holds exactly when |y| >= 1/2. The search may
// overshoot by one radial grid step but never undershoot.
TEST(FindMu, IdentityNeedsOnlyReciprocal) {
  const SamplingPlan plan;
  const double mu = find_A4_mu(Nonlinearity::identity(2), ball(2, 1.0), 2.0, plan);
  EXPECT_GE(mu, 0.5);
  EXPECT_LE(mu, 0.5 + plan.y_radius / plan.radial);
  EXPECT_DOUBLE_EQ(find_A4_mu(Nonlinearity::identity(1), ball(1, 1.0), 1.0e-3, plan), 1.0e3);
}

TEST(CompactSet, Samples) {
  const auto b = ball(2, 3.0);
  EXPECT_DOUBLE_EQ(b.reach(), 3.0);
  for (const auto& z : b.samples()) EXPECT_LE(z.norm(), 3.0 + 1e-12);
  const auto pts = CompactSetSpec::points({Vector::Ones(2), -2.0 * Vector::Ones(2)});
  EXPECT_EQ(pts.samples().size(), 2u);
  EXPECT_NEAR(pts.reach(), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_THROW(CompactSetSpec::ball(Vector::Zero(1), -1.0), ValidationError);
}
