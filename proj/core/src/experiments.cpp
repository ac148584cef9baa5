#include "lurelab/experiments.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/parallel.hpp"
#include "lurelab/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lurelab {

namespace {

constexpr double kPresetTol = 1e-10;

void certify(ExperimentPreset& p) {
  p.lmi = lmi_verify(p.system.triple(), p.P, kPresetTol);
  p.detectability = detectability_check(p.system.triple());
  if (!p.certified()) {
    std::ostringstream os;
    os << "preset '" << p.name << "' rejected:";
    if (!p.lmi.ok) os << " LMI fails (block max eig " << p.lmi.report.block_max << ", tolerance "
                      << p.lmi.tolerance << ")";
    if (!p.detectability.detectable) os << " (C, A) not detectable: " << p.detectability.message;
    throw PresetRejected(os.str());
  }
}

Nonlinearity power_law_map(const std::vector<PowerLawParams>& comps) {
  if (comps.size() == 1) return Nonlinearity::power_law(comps[0].a0, comps[0].a1, comps[0].d);
  std::vector<Nonlinearity> parts;
  for (const auto& c : comps) parts.push_back(Nonlinearity::power_law(c.a0, c.a1, c.d));
  return Nonlinearity::diagonal(parts);
}

nlohmann::json matrix_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(M.cols()));
    for (Eigen::Index j = 0; j < M.cols(); ++j) r[static_cast<std::size_t>(j)] = M(i, j);
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

double sup_norm(const SignalSpec& v, double T, double dt) {
  double s = 0.0;
  Vector buf(v.dim());
  const long N = std::llround(T / dt);
  for (long k = 0; k <= N; ++k) {
    v.eval_into(static_cast<double>(k) * dt, false, buf);
    s = std::max(s, buf.norm());
  }
  return s;
}

}  // namespace

ExperimentPreset::ExperimentPreset(std::string n, LureSystem s, CertificateP p)
    : name(std::move(n)), system(std::move(s)), P(std::move(p)), pto(zero_signal(system.m())) {}

const SignalSpec& ExperimentPreset::forcing(const std::string& id) const {
  const auto it = forcings.find(id);
  if (it == forcings.end()) throw ValidationError("preset '" + name + "' has no forcing '" + id + "'");
  return it->second;
}

nlohmann::json ExperimentPreset::to_json() const {
  const auto& t = system.triple();
  nlohmann::json ics = nlohmann::json::array();
  for (const auto& x : initial_conditions) ics.push_back(to_std(x));
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& [k, v] : forcings) fs.push_back(k);
  return {{"name", name},
          {"A", matrix_json(t.A())},
          {"B", matrix_json(t.B())},
          {"C", matrix_json(t.C())},
          {"P", matrix_json(P.P())},
          {"f", system.f().to_json()},
          {"forcings", fs},
          {"initial_conditions", ics},
          {"horizon", horizon},
          {"dt", dt},
          {"lmi_ok", lmi.ok},
          {"lmi_block_max", lmi.report.block_max},
          {"lmi_tolerance", lmi.tolerance},
          {"detectable", detectability.detectable}};
}

ExperimentPreset preset_one_mass(double m, double k, PowerLawParams f) {
  if (!(m > 0.0) || !(k > 0.0)) throw PresetRejected("one-mass preset needs m > 0 and k > 0");
  Matrix A(2, 2), B(2, 1), C(1, 2);
  A << 0.0, 1.0, -k / m, 0.0;
  B << 0.0, 1.0 / m;
  C << 0.0, 1.0;
  Matrix P(2, 2);
  P << k, 0.0, 0.0, m;
  ExperimentPreset p("one-mass", LureSystem(LinearTriple(A, B, C), power_law_map({f})), CertificateP(P));
  p.components = {f};
  certify(p);
  p.forcings = make_example_forcings(1);
  p.forcings.emplace("zero", zero_signal(1));
  p.initial_conditions = {Vector::Unit(2, 0), Vector::Zero(2)};
  return p;
}

ExperimentPreset preset_two_mass() {
  const double m1 = 1.5, m2 = 0.75, k1 = 0.5, k2 = 1.2;
  Matrix A(4, 4), B(4, 2), C(2, 4), P(4, 4);
  A << 0, 1, 0, 0,
       -(k2 + k1) / m1, 0, k2 / m1, 0,
       0, 0, 0, 1,
       k2 / m2, 0, -k2 / m2, 0;
  B << 0, 0,
       1 / m1, -1 / m1,
       0, 0,
       0, 1 / m2;
  C << 0, 1, 0, 0,
       0, -1, 0, 1;
  P << k1 + k2, 0, -k2, 0,
       0, m1, 0, 0,
       -k2, 0, k2, 0,
       0, 0, 0, m2;
  const std::vector<PowerLawParams> comps{{0.0, 1.0, 1.0}, {0.0, 1.0, 1.5}};
  ExperimentPreset p("two-mass", LureSystem(LinearTriple(A, B, C), power_law_map(comps)), CertificateP(P));
  p.components = comps;
  certify(p);
  p.forcings = make_example_forcings(2);
  p.forcings.emplace("zero", zero_signal(2));
  Vector x0(4);
  x0 << 0.25, 0.25, -0.05, -0.025;
  p.initial_conditions = {x0, Vector::Zero(4)};
  return p;
}

ExperimentPreset preset_wec(int nr) {
  if (nr < 1) throw PresetRejected("wec preset needs radiation order >= 1");
  WecParams w;
  w.Ar = Matrix::Zero(nr, nr);
  int i = 0;
  for (; i + 1 < nr; i += 2) w.Ar.block(i, i, 2, 2) << -1.0, -2.0, 2.0, -1.0;
  if (i < nr) w.Ar(i, i) = -1.0;
  w.Br = Matrix::Zero(nr, 1);
  w.Br(0, 0) = 1.0;
  return preset_wec(w);
}

ExperimentPreset preset_wec(const WecParams& w) {
  if (!(w.m > 0.0) || !(w.m_inf > 0.0) || !(w.k > 0.0))
    throw PresetRejected("wec preset needs m, m_inf, k > 0");
  if (w.Ar.rows() < 1 || w.Ar.rows() != w.Ar.cols() || w.Br.rows() != w.Ar.rows() || w.Br.cols() != 1)
    throw PresetRejected("wec radiation pair has inconsistent shapes");
  const int nr = static_cast<int>(w.Ar.rows());
  const LinearTriple rad(w.Ar, w.Br, w.Br.transpose());
  const auto rv = lmi_verify(rad, Matrix::Identity(nr, nr), Strictness::SemiDefinite, 0.0, kPresetTol);
  if (!rv.ok) throw PresetRejected("wec radiation pair is not passive: A_r + A_r^T is not <= 0");
  if (!hurwitz_check(w.Ar).hurwitz) throw PresetRejected("wec radiation matrix A_r is not Hurwitz");

  const double M = w.m + w.m_inf;
  const int n = 2 + nr;
  Matrix A = Matrix::Zero(n, n), B = Matrix::Zero(n, 1), C = Matrix::Zero(1, n), P = Matrix::Zero(n, n);
  A(0, 1) = 1.0;
  A(1, 0) = -w.k / M;
  A.block(1, 2, 1, nr) = -w.Br.transpose() / M;
  A.block(2, 1, nr, 1) = w.Br;
  A.block(2, 2, nr, nr) = w.Ar;
  B(1, 0) = 1.0 / M;
  C(0, 1) = 1.0;
  P(0, 0) = w.k;
  P(1, 1) = M;
  P.block(2, 2, nr, nr).setIdentity();
  ExperimentPreset p("wec", LureSystem(LinearTriple(A, B, C), power_law_map({w.drag})), CertificateP(P));
  p.components = {w.drag};
  certify(p);
  p.forcings = make_example_forcings(1);
  p.forcings.emplace("zero", zero_signal(1));
  p.initial_conditions = {Vector::Unit(n, 0), Vector::Zero(n)};
  return p;
}

std::vector<std::string> preset_names() { return {"one-mass", "two-mass", "wec"}; }

ExperimentPreset preset_by_name(const std::string& name) {
  if (name == "one-mass") return preset_one_mass();
  if (name == "two-mass") return preset_two_mass();
  if (name == "wec") return preset_wec();
  throw ValidationError("unknown preset '" + name + "' (expected one-mass, two-mass, wec)");
}

ExperimentPreset with_nonlinearity(const ExperimentPreset& preset, const Nonlinearity& f) {
  ExperimentPreset p = preset;
  p.system = LureSystem(preset.system.triple(), f);
  return p;
}

HypothesisReport verify_preset_hypotheses(const ExperimentPreset& preset, double R,
                                          const SamplingPlan& plan) {
  const int m = preset.system.m();
  const auto gamma = CompactSetSpec::ball(Vector::Zero(m), R);
  HypothesisCandidates cand = power_law_candidates(preset.components, R);
  cand.c = 1.0;
  cand.mu = find_A4_mu(preset.system.f(), gamma, cand.c, plan);
  return verify_A1_A5(preset.system.f(), gamma, cand, plan);
}

double periodicity_residual(const Trajectory& z, double tau, double t_from) {
  if (z.size() < 2 || !(tau > 0.0)) return 0.0;
  const double t0 = z.times.front();
  const double dt = z.times[1] - z.times[0];
  const double T = z.times.back();
  double worst = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double t = z.times[k];
    if (t < t_from - 1e-12) continue;
    if (t + tau > T) break;
    const double r = (t + tau - t0) / dt;
    auto j = static_cast<std::size_t>(std::floor(r));
    if (j + 1 >= z.size()) j = z.size() - 2;
    const double a = r - static_cast<double>(j);
    const auto J = static_cast<Eigen::Index>(j);
    const Eigen::RowVectorXd shifted = (1.0 - a) * z.states.row(J) + a * z.states.row(J + 1);
    worst = std::max(worst, (shifted - z.states.row(static_cast<Eigen::Index>(k))).norm());
  }
  return worst;
}

nlohmann::json EntrainmentResult::report() const {
  nlohmann::json j{{"preset", preset},
                   {"forcing", forcing},
                   {"forcing_class", to_string(forcing_class)},
                   {"horizon", x.times.empty() ? 0.0 : x.times.back()},
                   {"dt", x.info.dt},
                   {"settle_time", settle_time},
                   {"substeps", x.info.substeps},
                   {"gap", {{"final_decile_sup", convergence.final_decile_sup},
                            {"threshold", convergence.threshold},
                            {"pass", gap_pass}}},
                   {"pass", pass()}};
  if (period) {
    j["periodicity"] = {{"tau", *period},
                        {"residual", periodicity_residual ? *periodicity_residual : 0.0},
                        {"pass", periodicity_pass}};
  }
  if (fit) j["fit"] = fit->to_json();
  if (!fit_note.empty()) j["fit_note"] = fit_note;
  if (spectrum) {
    j["spectrum"] = spectrum->to_json();
    j["spectrum"]["generators"] = generators;
    j["spectrum"]["required"] = spectrum_required;
    j["spectrum"]["pass"] = spectrum_pass;
    if (module) j["spectrum"]["module"] = module->to_json();
  }
  return j;
}

EntrainmentResult run_entrainment(const ExperimentPreset& preset, const std::string& forcing_id,
                                  const Vector& x0_a, const Vector& x0_b,
                                  const EntrainmentOptions& o) {
  if (!preset.certified()) throw PresetRejected("preset '" + preset.name + "' is not certified");
  const SignalSpec& v = preset.forcing(forcing_id);
  const double T = o.horizon > 0.0 ? o.horizon : preset.horizon;
  const double dt = o.dt > 0.0 ? o.dt : preset.dt;
  const double settle = o.settle_fraction >= 0.0 ? o.settle_fraction : preset.settle_fraction;

  EntrainmentResult r;
  r.preset = preset.name;
  r.forcing = forcing_id;
  r.forcing_class = v.cls();
  const Vector* ics[2] = {&x0_a, &x0_b};
  Trajectory* outs[2] = {&r.x, &r.ref};
  parallel_for(2, [&](std::size_t i) {
    *outs[i] = simulate(preset.system, *ics[i], v, T, dt, &preset.pto);
  });
  r.gap = incremental_gap(r.x, r.ref, v, v);
  r.convergence = aap_decompose_check(r.x, r.ref, preset.gap_threshold);
  r.gap_pass = r.convergence.pass;
  r.settle_time = r.x.times.front() + settle * (r.x.times.back() - r.x.times.front());

  try {
    r.fit = fit_exponential(r.gap);
  } catch (const InsufficientDataError& e) {
    r.fit_note = e.what();
  }

  if (v.cls() == SignalClass::Periodic && v.period() > 0.0) {
    r.period = v.period();
    r.periodicity_residual = periodicity_residual(r.ref, v.period(), std::max(r.settle_time, r.ref.times.back() - 2.0 * v.period()));
    r.periodicity_pass = *r.periodicity_residual <= preset.periodicity_threshold;
  }

  r.generators = v.frequencies();
  if (!r.generators.empty()) {
    const auto& C = preset.system.triple().C();
    std::vector<double> times;
    std::vector<Eigen::Index> rows;
    for (std::size_t k = 0; k < r.ref.size(); ++k)
      if (r.ref.times[k] >= r.settle_time) {
        times.push_back(r.ref.times[k]);
        rows.push_back(static_cast<Eigen::Index>(k));
      }
    Matrix y(static_cast<Eigen::Index>(rows.size()), C.rows());
    for (std::size_t k = 0; k < rows.size(); ++k)
      y.row(static_cast<Eigen::Index>(k)) = (C * r.ref.states.row(rows[k]).transpose()).transpose();
    if (times.size() >= 16) {
      r.spectrum = estimate_spectrum(times, y);
      r.module = module_check(r.spectrum->frequencies, r.generators, preset.spectrum_tol);
    }
    r.spectrum_required = v.cls() == SignalClass::AlmostPeriodic;
    if (r.spectrum_required) r.spectrum_pass = r.module && r.module->contained && !r.spectrum->frequencies.empty();
  }
  return r;
}

nlohmann::json LadderRow::to_json() const {
  nlohmann::json j{{"R", R}, {"skipped", skipped}, {"rejected", rejected}, {"contraction", contraction}};
  if (!note.empty()) j["note"] = note;
  if (!skipped && !rejected) {
    j["fit"] = combined.to_json();
    j["held_out_coverage"] = held_out_coverage;
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& f : training) tr.push_back(f.to_json());
    j["training"] = tr;
  }
  return j;
}

nlohmann::json GainLadder::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) rs.push_back(r.to_json());
  return {{"preset", preset}, {"forcing", forcing}, {"rows", rs}, {"gamma_nonincreasing", gamma_nonincreasing}};
}

GainLadder run_gain_ladder(const ExperimentPreset& preset, const std::string& forcing_id,
                           const std::vector<double>& radii, const LadderOptions& o) {
  if (!preset.certified()) throw PresetRejected("preset '" + preset.name + "' is not certified");
  if (o.pairs < 2) throw ValidationError("gain ladder needs >= 2 pairs per radius");
  const SignalSpec& v = preset.forcing(forcing_id);
  const double T = o.horizon > 0.0 ? o.horizon : preset.horizon;
  const double dt = o.dt > 0.0 ? o.dt : preset.dt;
  const double vsup = sup_norm(v, T, dt);
  const int n = preset.system.n();
  const int n_train = o.pairs / 2;

  GainLadder out;
  out.preset = preset.name;
  out.forcing = forcing_id;
  Rng root(o.seed);
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    LadderRow row;
    row.R = radii[ri];
    if (!(row.R > 0.0)) {
      row.skipped = true;
      row.note = "R = 0 admits only the trivial pair; skipped";
      out.rows.push_back(row);
      continue;
    }
    Rng rng = root.fork(ri);
    const double half = 0.5 * row.R;
    const SignalSpec vr = vsup > 0.0 ? v.scaled(half / vsup) : v;
    std::vector<Vector> x1(static_cast<std::size_t>(o.pairs)), x2(static_cast<std::size_t>(o.pairs));
    for (int k = 0; k < o.pairs; ++k) {
      x1[static_cast<std::size_t>(k)] = rng.in_ball(n, half);
      x2[static_cast<std::size_t>(k)] = rng.in_ball(n, half);
    }
    std::vector<GapSeries> gaps(static_cast<std::size_t>(o.pairs));
    std::vector<std::string> errors(static_cast<std::size_t>(o.pairs));
    parallel_for(static_cast<std::size_t>(o.pairs), [&](std::size_t k) {
      try {
        const auto a = simulate(preset.system, x1[k], vr, T, dt, &preset.pto);
        const auto b = simulate(preset.system, x2[k], vr, T, dt, &preset.pto);
        gaps[k] = incremental_gap(a, b, vr, vr);
      } catch (const BlowUpError& e) {
        errors[k] = e.what();
      }
    });
    for (const auto& e : errors)
      if (!e.empty()) {
        row.rejected = true;
        row.note = "diverged: " + e;
        break;
      }
    if (!row.rejected) {
      row.combined.gamma = 1e300;
      for (int k = 0; k < n_train; ++k) {
        FitWindow w;
        w.envelope = true;
        try {
          row.training.push_back(fit_exponential(gaps[static_cast<std::size_t>(k)], w));
        } catch (const InsufficientDataError& e) {
          row.rejected = true;
          row.note = e.what();
          break;
        }
        const auto& f = row.training.back();
        row.combined.M = std::max(row.combined.M, f.M);
        row.combined.gamma = std::min(row.combined.gamma, f.gamma);
        row.combined.residual = std::max(row.combined.residual, f.residual);
        row.combined.t_start = f.t_start;
        row.combined.t_end = f.t_end;
        row.combined.nodes = f.nodes;
      }
    }
    if (!row.rejected) {
      const double settle = preset.settle_fraction * T;
      row.held_out_coverage = 1.0;
      for (int k = n_train; k < o.pairs; ++k)
        row.held_out_coverage = std::min(row.held_out_coverage,
                                         envelope_coverage(row.combined, gaps[static_cast<std::size_t>(k)], settle));
      row.contraction = row.combined.gamma > 0.0;
      if (!row.contraction) row.note = "fit rejected: gamma <= 0";
    }
    out.rows.push_back(row);
  }
  double prev = 1e300;
  for (const auto& r : out.rows) {
    if (r.skipped || r.rejected) continue;
    if (r.combined.gamma > prev * (1.0 + 1e-12)) out.gamma_nonincreasing = false;
    prev = r.combined.gamma;
  }
  return out;
}

}  // namespace lurelab
