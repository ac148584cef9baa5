#pragma once

#include "lurelab/apsignals.hpp"
#include "lurelab/certcore.hpp"
#include "lurelab/hypotheses.hpp"
#include "lurelab/simcore.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lurelab {

// A verified model with its forcings, initial conditions and thresholds.
struct ExperimentPreset {
  ExperimentPreset(std::string name, LureSystem system, CertificateP P);

  std::string name;
  LureSystem system;
  CertificateP P;
  LmiVerdict lmi;
  DetectabilityReport detectability;
  std::map<std::string, SignalSpec> forcings;
  std::vector<Vector> initial_conditions;
  SignalSpec pto;  // additive input u; zero unless set
  // Power-law components behind f, used to build hypothesis candidates.
  std::vector<PowerLawParams> components;
  double horizon = 100.0;
  double dt = 1e-3;
  double settle_fraction = 0.5;
  double gap_threshold = 1e-2;
  double periodicity_threshold = 5e-3;
  double spectrum_tol = 1e-2;

  bool certified() const { return lmi.ok && detectability.detectable; }
  const SignalSpec& forcing(const std::string& id) const;
  nlohmann::json to_json() const;
};

// Thrown when a preset fails its certificate checks; what() carries the
// report.
class PresetRejected : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// m z'' + k z + f(z') = v with P = diag(k, m); f defaults to y |y|.
ExperimentPreset preset_one_mass(double m = 1.0, double k = 1.0,
                                 PowerLawParams f = {0.0, 1.0, 1.0});

// Two coupled masses, m1 = 1.5, m2 = 0.75, k1 = 0.5, k2 = 1.2 and
// f = (y1 |y1|, y2 |y2|^{3/2}).
ExperimentPreset preset_two_mass();

struct WecParams {
  double m = 1.0;
  double m_inf = 0.5;
  double k = 1.0;
  Matrix Ar;  // empty: default passive pair of order nr
  Matrix Br;
  PowerLawParams drag{0.1, 1.0, 1.0};
};

// Heave-only point absorber with a passive radiation model of order nr.
ExperimentPreset preset_wec(int nr = 2);
ExperimentPreset preset_wec(const WecParams& params);

// "one-mass", "two-mass" or "wec"; throws ValidationError otherwise.
ExperimentPreset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

// Same linear part and certificates with another feedback map.
ExperimentPreset with_nonlinearity(const ExperimentPreset& preset, const Nonlinearity& f);

// (A1)-(A5) on the ball of radius R in R^m, with candidates built from the
// preset's power-law components.
HypothesisReport verify_preset_hypotheses(const ExperimentPreset& preset, double R,
                                          const SamplingPlan& plan = {});

struct EntrainmentResult {
  std::string preset;
  std::string forcing;
  SignalClass forcing_class = SignalClass::Generic;
  Trajectory x;    // from the first initial condition
  Trajectory ref;  // from the second; post-settle part is the limit proxy
  GapSeries gap;
  AapCheck convergence;
  double settle_time = 0.0;

  std::optional<double> period;
  std::optional<double> periodicity_residual;
  std::optional<ExpFit> fit;
  std::string fit_note;

  std::vector<double> generators;
  std::optional<SpectrumEstimate> spectrum;
  std::optional<ModuleCheck> module;
  bool spectrum_required = false;

  bool gap_pass = false;
  bool periodicity_pass = true;
  bool spectrum_pass = true;
  bool pass() const { return gap_pass && periodicity_pass && spectrum_pass; }
  nlohmann::json report() const;
};

struct EntrainmentOptions {
  double horizon = 0.0;  // 0: preset default
  double dt = 0.0;       // 0: preset default
  double settle_fraction = -1.0;  // negative: preset default
};

// Throws PresetRejected for uncertified presets and propagates BlowUpError.
EntrainmentResult run_entrainment(const ExperimentPreset& preset, const std::string& forcing,
                                  const Vector& x0_a, const Vector& x0_b,
                                  const EntrainmentOptions& options = {});

// sup over t in [t_from, T - tau] of |z(t + tau) - z(t)|, with z(t + tau)
// linearly interpolated between grid nodes.
double periodicity_residual(const Trajectory& z, double tau, double t_from);

struct LadderRow {
  double R = 0.0;
  bool skipped = false;
  bool rejected = false;
  std::string note;
  std::vector<ExpFit> training;
  ExpFit combined;  // max M and min gamma over the training fits
  double held_out_coverage = 0.0;  // worst over held-out pairs, after settle
  bool contraction = false;
  nlohmann::json to_json() const;
};

struct GainLadder {
  std::string preset;
  std::string forcing;
  std::vector<LadderRow> rows;
  bool gamma_nonincreasing = true;  // trend across increasing R
  nlohmann::json to_json() const;
};

struct LadderOptions {
  int pairs = 4;  // half training, half held out
  std::uint64_t seed = 1;
  double horizon = 0.0;
  double dt = 0.0;
};

// Per R: pairs of initial conditions with |x_i(0)| <= R/2 and the forcing
// scaled to sup-norm R/2, equal for both members of a pair.
GainLadder run_gain_ladder(const ExperimentPreset& preset, const std::string& forcing,
                           const std::vector<double>& radii, const LadderOptions& options = {});

}  // namespace lurelab
