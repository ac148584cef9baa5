#include "lurelab/experiments.hpp"
#include "lurelab/simcore.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace lurelab;

namespace {

GapSeries series(const std::function<double(double)>& gap, double T, double dt,
                 const std::function<double(double)>& dv = nullptr) {
  GapSeries g;
  const long n = std::llround(T / dt);
  double prev = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    g.times.push_back(t);
    g.gap.push_back(gap(t));
    const double d = dv ? dv(t) : 0.0;
    g.forcing_integral.push_back(k == 0 ? 0.0 : g.forcing_integral.back() + 0.5 * (prev + d) * dt);
    g.forcing_sup.push_back(k == 0 ? d : std::max(g.forcing_sup.back(), d));
    prev = d;
  }
  return g;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(FitExponential, ExactExponential) {
  const auto g = series([](double t) { return 3.0 * std::exp(-0.5 * t); }, 20.0, 0.01);
  const auto fit = fit_exponential(g);
  EXPECT_NEAR(fit.gamma, 0.5, 1e-12);
  EXPECT_NEAR(fit.M_prime, 3.0, 1e-10);
  EXPECT_NEAR(fit.M * g.gap.front(), 3.0, 1e-10);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_TRUE(fit.contraction());
  EXPECT_NEAR(fit.t_start, 2.0, 1e-12);
  EXPECT_NEAR(fit(4.0, g.gap.front()), 3.0 * std::exp(-2.0), 1e-10);
}

TEST(FitExponential, ModulatedDecay) {
  const auto g = series([](double t) { return std::exp(-t) * (2.0 + std::sin(t)); }, 30.0, 0.01);
  const auto fit = fit_exponential(g);
  EXPECT_GE(fit.gamma, 0.9);
  EXPECT_LE(fit.gamma, 1.1);
  EXPECT_GT(fit.residual, 0.0);
}

TEST(FitExponential, GrowthGivesNegativeRate) {
  const auto g = series([](double t) { return 0.1 * std::exp(0.2 * t); }, 10.0, 0.05);
  const auto fit = fit_exponential(g);
  EXPECT_NEAR(fit.gamma, -0.2, 1e-12);
  EXPECT_FALSE(fit.contraction());
}

TEST(FitExponential, TooFewNodes) {
  const auto g = series([](double t) { return std::exp(-t); }, 0.7, 0.1);
  EXPECT_THROW(fit_exponential(g), InsufficientDataError);
  GapSeries empty;
  EXPECT_THROW(fit_exponential(empty), InsufficientDataError);
  // Zero gaps are masked, leaving nothing to fit.
  const auto zeros = series([](double) { return 0.0; }, 10.0, 0.1);
  EXPECT_THROW(fit_exponential(zeros), InsufficientDataError);
}

TEST(FitExponential, ExplicitWindow) {
  // Two regimes; fitting the second alone recovers its rate.
  const auto g = series(
      [](double t) { return t < 5.0 ? std::exp(-2.0 * t) : std::exp(-10.0 - 0.5 * (t - 5.0)); }, 20.0, 0.01);
  FitWindow w;
  w.t_start = 6.0;
  w.t_end = 19.0;
  const auto fit = fit_exponential(g, w);
  EXPECT_NEAR(fit.gamma, 0.5, 1e-10);
  EXPECT_NEAR(fit.t_start, 6.0, 0.0);
  EXPECT_NEAR(fit.t_end, 19.0, 0.0);
}

TEST(FitExponential, EnvelopeBoundsTheWindow) {
  const auto g = series([](double t) { return std::exp(-0.3 * t) * (1.5 + std::cos(2.0 * t)); }, 40.0, 0.01);
  FitWindow w;
  w.envelope = true;
  const auto env = fit_exponential(g, w);
  const auto plain = fit_exponential(g);
  EXPECT_EQ(env.gamma, plain.gamma);
  EXPECT_GT(env.M, plain.M);
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    if (g.times[k] < env.t_start) continue;
    EXPECT_LE(g.gap[k], env(g.times[k], g.gap.front()) * (1.0 + 1e-12)) << "t = " << g.times[k];
  }
  EXPECT_GE(envelope_coverage(env, g, env.t_start), 1.0 - 1e-12);
  EXPECT_LT(envelope_coverage(plain, g, plain.t_start), 1.0);
}

TEST(EnvelopeCoverage, CountsFromStart) {
  const auto g = series([](double t) { return std::exp(-t); }, 10.0, 0.1);
  ExpFit f;
  f.M = 1.0;
  f.gamma = 2.0;  // under the data everywhere but t = 0
  EXPECT_NEAR(envelope_coverage(f, g, 0.0), 1.0 / 101.0, 1e-12);
  f.gamma = 1.0;
  EXPECT_EQ(envelope_coverage(f, g, 0.0), 1.0);
}

TEST(Iiss, UnforcedEnsemblePasses) {
  std::vector<GapSeries> train, held;
  for (double c : {1.0, 2.0}) train.push_back(series([c](double t) { return c * std::exp(-0.4 * t); }, 20.0, 0.01));
  for (double c : {0.5, 3.0}) held.push_back(series([c](double t) { return c * std::exp(-0.45 * t); }, 20.0, 0.01));
  const auto s = fit_iiss_surrogate(train);
  EXPECT_NEAR(s.gamma, 0.4, 1e-10);
  EXPECT_NEAR(s.M, 1.0, 1e-10);
  EXPECT_EQ(s.a, 0.0);
  const auto chk = iiss_bound_check(held, s);
  EXPECT_TRUE(chk.pass);
  EXPECT_TRUE(chk.kl_valid);
  EXPECT_EQ(chk.member_pass.size(), 2u);
}

TEST(Iiss, ForcedMemberFitsGain) {
  std::vector<GapSeries> train;
  train.push_back(series([](double t) { return std::exp(-0.5 * t); }, 20.0, 0.01));
  // gap = e^{-t/2} + 0.2 t with unit forcing difference: a = 0.2 covers it.
  train.push_back(series([](double t) { return std::exp(-0.5 * t) + 0.2 * t; }, 20.0, 0.01,
                         [](double) { return 1.0; }));
  const auto s = fit_iiss_surrogate(train);
  EXPECT_NEAR(s.gamma, 0.5, 1e-10);
  EXPECT_NEAR(s.a, 0.2, 1e-9);
  EXPECT_TRUE(iiss_bound_check(train, s).pass);

  std::vector<GapSeries> worse{series([](double t) { return std::exp(-0.5 * t) + 0.3 * t; }, 20.0, 0.01,
                                      [](double) { return 1.0; })};
  const auto chk = iiss_bound_check(worse, s);
  EXPECT_FALSE(chk.pass);
  EXPECT_GT(chk.worst_excess[0], 0.0);
}

TEST(Iiss, NeedsAnUnforcedMember) {
  std::vector<GapSeries> train{series([](double t) { return std::exp(-t); }, 10.0, 0.01,
                                      [](double) { return 0.5; })};
  EXPECT_THROW(fit_iiss_surrogate(train), InsufficientDataError);
}

// z'' = -z + z' under f = -id: gaps between runs grow, so no KL surrogate exists.
TEST(Iiss, AdversarialNegatedIdentityFails) {
  const auto base = preset_one_mass();
  const auto p = with_nonlinearity(base, Nonlinearity::negated_identity(1));
  const auto zero = zero_signal(1);
  auto gap_of = [&](const Vector& a, const Vector& b) {
    const auto ta = simulate(p.system, a, zero, 10.0, 1e-2);
    const auto tb = simulate(p.system, b, zero, 10.0, 1e-2);
    return incremental_gap(ta, tb, zero, zero);
  };
  std::vector<GapSeries> train{gap_of(vec({1.0, 0.0}), vec({0.0, 0.0})),
                               gap_of(vec({0.0, 0.5}), vec({0.2, 0.0}))};
  std::vector<GapSeries> held{gap_of(vec({-0.3, 0.4}), vec({0.1, 0.1}))};
  const auto s = fit_iiss_surrogate(train);
  EXPECT_EQ(s.gamma, 0.0);
  const auto chk = iiss_bound_check(held, s);
  EXPECT_FALSE(chk.kl_valid);
  EXPECT_FALSE(chk.pass);
}

TEST(Iiss, JsonCarriesVerdict) {
  std::vector<GapSeries> train{series([](double t) { return std::exp(-t); }, 10.0, 0.01)};
  const auto s = fit_iiss_surrogate(train);
  const auto j = iiss_bound_check(train, s).to_json();
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_NEAR(j.at("surrogate").at("gamma").get<double>(), 1.0, 1e-10);
}
