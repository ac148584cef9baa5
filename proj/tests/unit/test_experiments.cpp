#include "lurelab/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lurelab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Presets, AllNamedPresetsCertify) {
  for (const auto& name : preset_names()) {
    const auto p = preset_by_name(name);
    EXPECT_EQ(p.name, name);
    EXPECT_TRUE(p.certified()) << name;
    EXPECT_TRUE(p.lmi.ok) << name;
    EXPECT_TRUE(p.detectability.detectable) << name;
    EXPECT_EQ(p.initial_conditions.size(), 2u);
    for (const char* f : {"zero", "v_p", "v_s", "v_ap", "v_aap"}) EXPECT_NO_THROW(p.forcing(f)) << f;
  }
  EXPECT_THROW(preset_by_name("three-mass"), ValidationError);
}

TEST(Presets, TwoMassMatrices) {
  const auto p = preset_two_mass();
  const auto& A = p.system.triple().A();
  EXPECT_NEAR(A(1, 0), -(0.5 + 1.2) / 1.5, 1e-15);
  EXPECT_NEAR(A(1, 2), 1.2 / 1.5, 1e-15);
  EXPECT_NEAR(A(3, 0), 1.2 / 0.75, 1e-15);
  EXPECT_NEAR(A(3, 2), -1.2 / 0.75, 1e-15);
  EXPECT_EQ(p.initial_conditions[0], vec({0.25, 0.25, -0.05, -0.025}));
  // f = (y1 |y1|, y2 |y2|^{3/2})
  const Vector w = p.system.f()(0.0, vec({-2.0, 4.0}));
  EXPECT_NEAR(w(0), -4.0, 1e-14);
  EXPECT_NEAR(w(1), 32.0, 1e-12);
}

TEST(Presets, WecShape) {
  const auto p = preset_wec(3);
  EXPECT_EQ(p.system.n(), 5);
  EXPECT_EQ(p.system.m(), 1);
  EXPECT_TRUE(p.certified());
}

TEST(Presets, Rejections) {
  EXPECT_THROW(preset_one_mass(-1.0), PresetRejected);
  EXPECT_THROW(preset_one_mass(1.0, 0.0), PresetRejected);
  EXPECT_THROW(preset_wec(0), PresetRejected);
  WecParams w;
  w.Ar = Matrix::Identity(2, 2);
  w.Br = Matrix::Zero(2, 1);
  w.Br(0, 0) = 1.0;
  EXPECT_THROW(preset_wec(w), PresetRejected);
  w.Ar = -Matrix::Identity(2, 2);
  w.Br = Matrix::Zero(3, 1);
  EXPECT_THROW(preset_wec(w), PresetRejected);
}

TEST(Presets, JsonDescribesPreset) {
  const auto j = preset_two_mass().to_json();
  EXPECT_EQ(j.at("name"), "two-mass");
  EXPECT_EQ(j.at("forcings").size(), 5u);
  EXPECT_EQ(j.at("initial_conditions").size(), 2u);
}

TEST(Presets, HypothesesOnTwoMass) {
  SamplingPlan plan;
  const auto r = verify_preset_hypotheses(preset_two_mass(), 2.0, plan);
  EXPECT_TRUE(r.passes({1, 2, 3, 4}));
  EXPECT_FALSE(r[5].pass);
}

TEST(Presets, HypothesesWithLinearTermPassA5) {
  const auto r = verify_preset_hypotheses(preset_one_mass(1.0, 1.0, {0.25, 1.0, 1.0}), 2.0);
  EXPECT_TRUE(r.passes({1, 2, 3, 4, 5}));
}

TEST(Entrainment, ZeroForcingAtRestStaysAtRest) {
  const auto p = preset_one_mass();
  EntrainmentOptions o;
  o.horizon = 10.0;
  o.dt = 1e-2;
  const auto r = run_entrainment(p, "zero", Vector::Zero(2), Vector::Zero(2), o);
  EXPECT_EQ(r.x.states.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.ref.states.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(r.gap_pass);
  EXPECT_FALSE(r.fit.has_value());
  EXPECT_FALSE(r.fit_note.empty());
  EXPECT_TRUE(r.pass());
}

TEST(Entrainment, UncertifiedPresetIsRejected) {
  auto p = preset_one_mass();
  p.lmi.ok = false;
  EXPECT_THROW(run_entrainment(p, "v_p", p.initial_conditions[0], p.initial_conditions[1]), PresetRejected);
  EXPECT_THROW(run_gain_ladder(p, "v_p", {1.0}), PresetRejected);
}

TEST(Entrainment, UnknownForcing) {
  const auto p = preset_one_mass();
  EXPECT_THROW(run_entrainment(p, "v_q", p.initial_conditions[0], p.initial_conditions[1]), ValidationError);
}

TEST(Entrainment, PeriodicReportCarriesPeriod) {
  const auto p = preset_one_mass();
  EntrainmentOptions o;
  o.horizon = 60.0;
  o.dt = 1e-2;
  const auto r = run_entrainment(p, "v_p", p.initial_conditions[0], p.initial_conditions[1], o);
  ASSERT_TRUE(r.period.has_value());
  EXPECT_NEAR(*r.period, 2.0 * M_PI / 0.75, 1e-12);
  ASSERT_TRUE(r.periodicity_residual.has_value());
  const auto j = r.report();
  EXPECT_EQ(j.at("forcing_class"), "periodic");
  EXPECT_TRUE(j.contains("periodicity"));
  EXPECT_EQ(j.at("pass").get<bool>(), r.pass());
}

// The decaying term only shifts the transient, so the settled responses to
// v_aap and v_s agree.
TEST(Entrainment, AsymptoticForcingMatchesItsLimit) {
  const auto p = preset_two_mass();
  EntrainmentOptions o;
  o.horizon = 100.0;
  o.dt = 1e-2;
  const auto a = run_entrainment(p, "v_aap", p.initial_conditions[0], p.initial_conditions[1], o);
  const auto s = run_entrainment(p, "v_s", p.initial_conditions[0], p.initial_conditions[1], o);
  double worst = 0.0;
  const std::size_t from = a.ref.size() * 9 / 10;
  for (std::size_t k = from; k < a.ref.size(); ++k)
    worst = std::max(worst, (a.ref.state(k) - s.ref.state(k)).norm());
  EXPECT_LE(worst, 2e-2);
}

TEST(PeriodicityResidual, ExactPeriodicPath) {
  Trajectory z;
  const double dt = 1e-3;
  const int N = 20000;
  z.states.resize(N + 1, 2);
  for (int k = 0; k <= N; ++k) {
    const double t = k * dt;
    z.times.push_back(t);
    z.states(k, 0) = std::sin(2.0 * M_PI * t);
    z.states(k, 1) = std::cos(4.0 * M_PI * t);
  }
  EXPECT_LE(periodicity_residual(z, 1.0, 0.0), 1e-12);
  EXPECT_LE(periodicity_residual(z, 2.0, 5.0), 1e-12);
  // A quarter-period shift: |d|^2 = 5 - s - 4 s^2 with s = sin(4 pi t), peak at s = -1/8.
  EXPECT_NEAR(periodicity_residual(z, 0.25, 0.0), 2.25, 1e-3);
  EXPECT_EQ(periodicity_residual(z, 0.0, 0.0), 0.0);
}

TEST(Ladder, SkipsZeroRadius) {
  LadderOptions o;
  o.horizon = 30.0;
  o.dt = 1e-2;
  const auto l = run_gain_ladder(preset_one_mass(), "v_p", {0.0, 1.0}, o);
  ASSERT_EQ(l.rows.size(), 2u);
  EXPECT_TRUE(l.rows[0].skipped);
  EXPECT_FALSE(l.rows[1].skipped);
  EXPECT_EQ(l.rows[1].training.size(), 2u);
  EXPECT_TRUE(l.to_json().at("rows")[0].at("skipped").get<bool>());
}

TEST(Ladder, NeedsTwoPairs) {
  LadderOptions o;
  o.pairs = 1;
  EXPECT_THROW(run_gain_ladder(preset_one_mass(), "v_p", {1.0}, o), ValidationError);
}

TEST(Ladder, NegatedIdentityIsFlagged) {
  const auto p = with_nonlinearity(preset_one_mass(), Nonlinearity::negated_identity(1));
  LadderOptions o;
  o.horizon = 20.0;
  o.dt = 1e-2;
  const auto l = run_gain_ladder(p, "v_p", {1.0, 2.0}, o);
  for (const auto& row : l.rows) {
    EXPECT_TRUE(row.rejected || !row.contraction) << "R = " << row.R;
    EXPECT_FALSE(row.note.empty());
  }
}

TEST(Ladder, SeedDeterminesRows) {
  LadderOptions o;
  o.horizon = 20.0;
  o.dt = 1e-2;
  o.seed = 7;
  const auto a = run_gain_ladder(preset_one_mass(), "v_p", {1.0}, o);
  const auto b = run_gain_ladder(preset_one_mass(), "v_p", {1.0}, o);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}
