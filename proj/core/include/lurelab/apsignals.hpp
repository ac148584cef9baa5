#pragma once

#include "lurelab/signals.hpp"
#include "lurelab/trajectory.hpp"

#include <complex>
#include <string>
#include <vector>

namespace lurelab {

using CVector = Eigen::VectorXcd;

// ---- Stepanov norms and periods ----------------------------------------

struct StepanovNorm {
  double value = 0.0;   // fine-grid value
  double coarse = 0.0;  // sup over windows spaced window_step
  double fine = 0.0;    // sup over windows spaced window_step / 2
  double argmax = 0.0;  // window start attaining the fine value
};

// sup_a int_a^{a+1} |v(t)| dt over a in [0, T - 1]. Integrals are composite
// trapezoid rules with step <= h, split at the jumps of v. Throws RangeError
// when T < 1.
StepanovNorm stepanov_norm(const SignalSpec& v, double T, double window_step = 0.05,
                           double h = 1e-3);

// sup over a in [a_lo, a_hi] of int_a^{a+1} |v(t + tau) - v(t)| dt.
double stepanov_distance(const SignalSpec& v, double tau, double a_lo, double a_hi,
                         double window_step = 0.05, double h = 1e-2, double* argmax = nullptr);

struct PeriodScanOptions {
  double epsilon = 0.1;
  double tau_lo = 0.0;
  double tau_hi = 100.0;
  double tau_step = 0.0;  // 0: min declared period / 200, else 0.01
  double a_lo = 0.0;
  double a_hi = 20.0;
  double window_step = 0.05;
  double h = 1e-2;
  double l = 0.0;  // declared inclusion length for the density verdict
};

struct StepanovReport {
  double epsilon = 0.0;
  std::vector<double> taus;
  std::vector<double> distances;
  std::vector<double> accepted;
  // Largest gap between consecutive accepted periods, counting the two ends
  // of the scanned range; infinity when none is accepted.
  double max_gap = 0.0;
  double l = 0.0;
  bool relatively_dense = false;
  double tau_lo = 0.0;
  double tau_hi = 0.0;

  nlohmann::json to_json() const;
};

StepanovReport stepanov_period_scan(const SignalSpec& v, const PeriodScanOptions& options);

// v(t + s) sampled at s_j = j / (nodes - 1), j = 0..nodes-1.
struct BochnerProfile {
  double t = 0.0;
  Matrix values;  // nodes x m
};

BochnerProfile bochner_transform(const SignalSpec& v, double t, int nodes = 256);
// Trapezoid L1([0, 1]) distance between two profiles on the same nodes.
double l1_distance(const BochnerProfile& a, const BochnerProfile& b);

// ---- Fourier coefficients and spectra ------------------------------------

struct FourierCoefficient {
  double lambda = 0.0;
  double T = 0.0;
  CVector value;
  double error_proxy = 0.0;  // |v_T - v_{T/2}|
};

// (1 / 2T) int_{-T}^{T} e^{-i lambda t} v(t) dt, with v extended to t < 0
// by its own formula.
FourierCoefficient fourier_coefficient(const SignalSpec& v, double lambda, double T, double h = 0.0);

struct SpectrumEstimate {
  std::vector<double> frequencies;
  std::vector<CVector> coefficients;
  double horizon = 0.0;
  std::vector<double> probe_frequencies;
  std::vector<double> probe_magnitudes;

  nlohmann::json to_json() const;
};

// Coefficients of a signal at given frequencies plus off-spectrum probes.
SpectrumEstimate spectrum_from_signal(const SignalSpec& v, const std::vector<double>& frequencies,
                                      double T, const std::vector<double>& probes = {});

struct SpectrumOptions {
  double lambda_max = 30.0;
  double rel_threshold = 0.05;  // peaks below this fraction of the largest are dropped
  double oversampling = 4.0;    // grid step 2 pi / (L * oversampling)
};

// Peaks of the Hann-windowed amplitude spectrum of uniformly sampled data
// (rows = times, columns = channels), mean removed, refined by golden
// section.
SpectrumEstimate estimate_spectrum(const std::vector<double>& times, const Matrix& samples,
                                   const SpectrumOptions& options = {});

struct ModuleMatch {
  double lambda = 0.0;
  bool found = false;
  std::vector<int> coefficients;  // one per generator
  double residual = 0.0;
};

struct ModuleCheck {
  bool contained = true;
  double tol = 0.0;
  std::vector<ModuleMatch> matches;

  nlohmann::json to_json() const;
};

// Every lambda in `spectrum` must lie within tol of sum_i k_i g_i with
// |k_i| <= max_coeff, using at most max_generators of the generators.
ModuleCheck module_check(const std::vector<double>& spectrum, const std::vector<double>& generators,
                         double tol, int max_coeff = 6, int max_generators = 3);
ModuleCheck module_check(const SpectrumEstimate& a, const SpectrumEstimate& b, double tol,
                         int max_coeff = 6, int max_generators = 3);

struct AapCheck {
  bool pass = false;
  double threshold = 1e-2;
  std::vector<double> times;
  std::vector<double> tail_sup;  // sup over [t_k, T] of |x - zap|
  double final_decile_sup = 0.0;
};

// Throws AlignmentError when the grids differ.
AapCheck aap_decompose_check(const Trajectory& x, const Trajectory& zap, double threshold = 1e-2);

}  // namespace lurelab
