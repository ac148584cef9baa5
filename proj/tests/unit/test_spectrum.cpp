#include "lurelab/apsignals.hpp"
#include "lurelab/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace lurelab;

namespace {

const double kTwoPi = 2.0 * M_PI;
const double kTwoRootTwoPi = 2.0 * std::sqrt(2.0) * M_PI;

SignalSpec forcing(const std::string& id) { return make_example_forcings(1).at(id); }

Trajectory grid_trajectory(double T, double dt, const std::function<Vector(double)>& x) {
  Trajectory tr;
  const int N = static_cast<int>(std::lround(T / dt));
  const int n = static_cast<int>(x(0.0).size());
  tr.states.resize(N + 1, n);
  for (int k = 0; k <= N; ++k) {
    tr.times.push_back(k * dt);
    tr.states.row(k) = x(k * dt).transpose();
  }
  return tr;
}

}  // namespace

TEST(Fourier, SineAtItsFrequency) {
  const auto c = fourier_coefficient(sine_signal(kTwoPi), kTwoPi, 200.0);
  EXPECT_NEAR(c.value(0).real(), 0.0, 1e-3);
  EXPECT_NEAR(c.value(0).imag(), -0.5, 1e-3);
  EXPECT_GE(c.error_proxy, 0.0);
}

TEST(Fourier, IncommensurateProbeIsSmall) {
  EXPECT_LE(std::abs(fourier_coefficient(sine_signal(kTwoPi), 1.0, 200.0).value(0)), 1e-2);
}

TEST(Fourier, ZeroSignal) {
  for (double l : {0.0, 1.0, kTwoPi}) EXPECT_EQ(fourier_coefficient(zero_signal(2), l, 50.0).value.norm(), 0.0);
}

TEST(Fourier, MatchesTrapezoidOracle) {
  // Two-sided average of a smooth AP signal against an independent quadrature.
  const auto v = forcing("v_ap");
  const double T = 40.0, l = 3.3;
  const double re = oracle::trapezoid([&](double t) { return std::cos(l * t) * v(t)(0); }, -T, T, 400000) / (2 * T);
  const double im = oracle::trapezoid([&](double t) { return -std::sin(l * t) * v(t)(0); }, -T, T, 400000) / (2 * T);
  const auto c = fourier_coefficient(v, l, T);
  EXPECT_NEAR(c.value(0).real(), re, 1e-6);
  EXPECT_NEAR(c.value(0).imag(), im, 1e-6);
}

TEST(Fourier, AlmostPeriodicForcingMagnitudes) {
  for (double l : {kTwoPi, kTwoRootTwoPi})
    EXPECT_NEAR(std::abs(fourier_coefficient(forcing("v_ap"), l, 500.0).value(0)), 0.5, 1e-2);
}

TEST(Fourier, OffModuleProbesDecay) {
  const auto v = forcing("v_ap");
  const double a = std::abs(fourier_coefficient(v, 5.0, 100.0).value(0));
  const double b = std::abs(fourier_coefficient(v, 5.0, 800.0).value(0));
  EXPECT_LT(b, a);
  EXPECT_LT(b, 1e-3);
}

TEST(Fourier, AsymptoticPartAveragesOut) {
  // The difference is exactly the decaying term's coefficient, which both
  // error proxies together bound by the triangle inequality.
  const auto vs = forcing("v_s"), va = forcing("v_aap");
  double prev = 1e300;
  for (double T : {100.0, 200.0, 400.0}) {
    const auto cs = fourier_coefficient(vs, 0.75, T);
    const auto ca = fourier_coefficient(va, 0.75, T);
    const double diff = std::abs(cs.value(0) - ca.value(0));
    EXPECT_LE(diff, cs.error_proxy + ca.error_proxy + 1e-12) << "T=" << T;
    EXPECT_LT(diff, prev);
    prev = diff;
  }
}

TEST(ApSignals, SupNormTailProperty) {
  const auto v = forcing("v_ap");
  auto sup_on = [&](double a, double b) {
    double s = 0.0;
    for (double t = a; t <= b; t += 1e-3) s = std::max(s, std::abs(v(t)(0)));
    return s;
  };
  const double base = sup_on(0.0, 200.0);
  for (double tau : {0.0, 50.0, 100.0}) EXPECT_NEAR(sup_on(tau, tau + 200.0), base, 0.02 * base);
}

TEST(Module, Examples) {
  auto harm = module_check({kTwoPi, 2.0 * kTwoPi}, {kTwoPi}, 1e-9);
  EXPECT_TRUE(harm.contained);
  EXPECT_EQ(harm.matches[1].coefficients, std::vector<int>{2});
  auto sum = module_check({kTwoPi + kTwoRootTwoPi}, {kTwoPi, kTwoRootTwoPi}, 1e-9);
  EXPECT_TRUE(sum.contained);
  EXPECT_EQ(sum.matches[0].coefficients, (std::vector<int>{1, 1}));
  EXPECT_FALSE(module_check({1.0}, {kTwoPi}, 1e-6).contained);
}

TEST(Module, DifferenceFrequencyAndBound) {
  const auto d = module_check({2.0 * kTwoPi - kTwoRootTwoPi}, {kTwoPi, kTwoRootTwoPi}, 1e-9);
  EXPECT_TRUE(d.contained);
  EXPECT_EQ(d.matches[0].coefficients, (std::vector<int>{2, -1}));
  EXPECT_FALSE(module_check({7.0 * kTwoPi}, {kTwoPi}, 1e-9).contained);
  EXPECT_TRUE(module_check({7.0 * kTwoPi}, {kTwoPi}, 1e-9, 7).contained);
}

TEST(Spectrum, EstimateFindsSinusoids) {
  const double T = 100.0, dt = 1e-3;
  std::vector<double> t;
  Matrix x(static_cast<int>(T / dt) + 1, 1);
  for (int k = 0; k <= static_cast<int>(T / dt); ++k) {
    t.push_back(k * dt);
    x(k, 0) = 0.3 + std::sin(kTwoPi * t.back()) + 0.5 * std::cos(kTwoRootTwoPi * t.back());
  }
  const auto s = estimate_spectrum(t, x);
  ASSERT_EQ(s.frequencies.size(), 2u);
  EXPECT_NEAR(s.frequencies[0], kTwoPi, 1e-2);
  EXPECT_NEAR(s.frequencies[1], kTwoRootTwoPi, 1e-2);
  EXPECT_NEAR(std::abs(s.coefficients[0](0)), 0.5, 2e-2);
  EXPECT_NEAR(std::abs(s.coefficients[1](0)), 0.25, 2e-2);
  EXPECT_TRUE(module_check(s.frequencies, {kTwoPi, kTwoRootTwoPi}, 1e-2).contained);
}

TEST(Spectrum, FromSignalWithProbes) {
  const auto s = spectrum_from_signal(forcing("v_ap"), {kTwoPi, kTwoRootTwoPi}, 500.0, {1.0, 5.0});
  ASSERT_EQ(s.coefficients.size(), 2u);
  for (const auto& c : s.coefficients) EXPECT_NEAR(std::abs(c(0)), 0.5, 1e-2);
  for (double m : s.probe_magnitudes) EXPECT_LT(m, 1e-2);
}

TEST(AapCheck, IdenticalTrajectories) {
  const auto x = grid_trajectory(20.0, 0.01, [](double t) { return Vector(Vector::Constant(2, std::sin(t))); });
  const auto r = aap_decompose_check(x, x);
  EXPECT_TRUE(r.pass);
  for (double v : r.tail_sup) EXPECT_EQ(v, 0.0);
}

TEST(AapCheck, DecayingOffset) {
  auto base = [](double t) { Vector v(2); v << std::sin(t), std::cos(2.0 * t); return v; };
  const auto z = grid_trajectory(20.0, 0.01, base);
  const auto x = grid_trajectory(20.0, 0.01, [&](double t) { Vector v = base(t); v(0) += std::exp(-t); return v; });
  const auto r = aap_decompose_check(x, z);
  EXPECT_TRUE(r.pass);
  for (std::size_t k = 0; k < r.times.size(); ++k) EXPECT_NEAR(r.tail_sup[k], std::exp(-r.times[k]), 1e-12);
}

TEST(AapCheck, GridMismatchThrows) {
  const auto a = grid_trajectory(1.0, 0.01, [](double) { return Vector(Vector::Zero(1)); });
  const auto b = grid_trajectory(1.0, 0.02, [](double) { return Vector(Vector::Zero(1)); });
  EXPECT_THROW(aap_decompose_check(a, b), AlignmentError);
}
