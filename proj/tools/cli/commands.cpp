#include "cli.hpp"

#include "lurelab/apsignals.hpp"
#include "lurelab/errors.hpp"
#include "lurelab/experiments.hpp"
#include "lurelab/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <map>
#include <ostream>
#include <utility>

namespace lurelab::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  bool quiet;
  void say(const std::string& line) const {
    if (!quiet) out << line << '\n';
  }
};

Vector to_vector(const std::vector<double>& v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

ExperimentPreset load_preset(const RunConfig& cfg) {
  ExperimentPreset p = preset_by_name(cfg.preset);
  if (cfg.nonlinearity) {
    nlohmann::json j = *cfg.nonlinearity;
    if (j.is_string()) {
      const auto t = j.get<std::string>();
      j = nlohmann::json{{"type", t}};
      if (t == "zero" || t == "identity" || t == "negated-identity") j["m"] = p.system.m();
    }
    p = with_nonlinearity(p, Nonlinearity::from_json(j));
  }
  return p;
}

Vector initial_condition(const ExperimentPreset& p, const std::optional<std::vector<double>>& given,
                         std::size_t fallback) {
  if (!given) return p.initial_conditions.at(fallback);
  if (static_cast<int>(given->size()) != p.system.n())
    throw ConfigError("initial condition has " + std::to_string(given->size()) + " entries, preset '" +
                      p.name + "' needs " + std::to_string(p.system.n()));
  return to_vector(*given);
}

void require_checked(const RunConfig& cfg) {
  if (cfg.nonlinearity && !cfg.force)
    throw ConfigError("a replaced nonlinearity is unverified; run 'verify' first or pass --force");
}

fs::path run_dir(const RunConfig& cfg, const std::string& a, const std::string& b) {
  return output_root(cfg) / a / b;
}

int cmd_verify(const Context& c) {
  const auto p = load_preset(c.cfg);
  const auto radii = c.cfg.radii.empty() ? std::vector<double>{1.0, 2.0, 5.0} : c.cfg.radii;
  nlohmann::json rep{{"command", "verify"}, {"preset", p.to_json()}};
  bool pass = p.certified();

  nlohmann::json det{{"pass", p.detectability.detectable}, {"message", p.detectability.message}};
  if (p.detectability.witness) {
    det["method"] = p.detectability.witness->method;
    det["spectral_abscissa"] = p.detectability.witness->spectral_abscissa;
  }
  rep["detectability"] = det;
  rep["lmi"] = {{"pass", p.lmi.ok},
                {"block_max", p.lmi.report.block_max},
                {"P_min", p.lmi.report.P_min},
                {"tolerance", p.lmi.tolerance},
                {"coupling_residual", p.lmi.coupling_residual}};
  c.say(std::string("detectability: ") + (p.detectability.detectable ? "pass" : "FAIL"));
  c.say(std::string("lmi: ") + (p.lmi.ok ? "pass" : "FAIL"));

  nlohmann::json hyp = nlohmann::json::array();
  for (double R : radii) {
    if (!(R > 0.0)) throw ConfigError("radii must be positive");
    const auto h = verify_preset_hypotheses(p, R);
    const bool ok = h.passes({1, 2, 3, 4});
    pass = pass && ok;
    auto j = h.to_json();
    j["R"] = R;
    j["required"] = {1, 2, 3, 4};
    j["pass"] = ok;
    hyp.push_back(j);
    std::string line = "hypotheses R=" + io::format_double(R) + ":";
    for (int i = 1; i <= 5; ++i) line += " A" + std::to_string(i) + (h[i].pass ? "=pass" : "=FAIL");
    c.say(line);
    for (int i = 1; i <= 4; ++i)
      if (!h[i].pass && h[i].y_at.size() > 0)
        c.say("  A" + std::to_string(i) + " witness y=" + nlohmann::json(to_std(h[i].y_at)).dump() +
              " z=" + nlohmann::json(to_std(h[i].z_at)).dump() + " violation=" + io::format_double(h[i].worst));
  }
  rep["hypotheses"] = hyp;
  rep["pass"] = pass;
  const auto dir = run_dir(c.cfg, p.name, "verify");
  io::write_atomic(dir / "report.json", io::json_text(rep));
  c.say(std::string("verify: ") + (pass ? "pass" : "FAIL") + " -> " + (dir / "report.json").string());
  return pass ? kPass : kCheckFailed;
}

void write_blow_up(const fs::path& dir, const BlowUpError& e, const std::string& cmd) {
  nlohmann::json rep{{"command", cmd},
                     {"pass", false},
                     {"blow_up", {{"escape_time", e.escape_time()},
                                  {"last_time", e.last_time()},
                                  {"last_state", to_std(e.last_state())},
                                  {"threshold", kBlowUpThreshold}}}};
  io::write_atomic(dir / "report.json", io::json_text(rep));
}

int cmd_simulate(const Context& c) {
  require_checked(c.cfg);
  const auto p = load_preset(c.cfg);
  const auto& v = p.forcing(c.cfg.forcing);
  const Vector x0 = initial_condition(p, c.cfg.x0, 0);
  const double T = c.cfg.horizon.value_or(p.horizon);
  const double dt = c.cfg.dt.value_or(p.dt);
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("horizon and dt must be positive");
  const auto dir = run_dir(c.cfg, p.name, c.cfg.forcing);
  try {
    const auto tr = simulate(p.system, x0, v, T, dt, &p.pto);
    io::write_atomic(dir / "trajectories.csv", io::trajectory_csv(tr, &p.P.P()));
    nlohmann::json rep{{"command", "simulate"},
                       {"preset", p.name},
                       {"forcing", v.descriptor()},
                       {"x0", to_std(x0)},
                       {"horizon", T},
                       {"dt", dt},
                       {"integrator", {{"method", tr.info.method},
                                       {"substeps", tr.info.substeps},
                                       {"breakpoints_hit", tr.info.breakpoints_hit}}},
                       {"final_state", to_std(tr.state(tr.size() - 1))},
                       {"pass", true}};
    io::write_atomic(dir / "report.json", io::json_text(rep));
    c.say("simulate: " + std::to_string(tr.size()) + " nodes -> " + (dir / "trajectories.csv").string());
    return kPass;
  } catch (const BlowUpError& e) {
    write_blow_up(dir, e, "simulate");
    c.say(std::string("simulate: blow-up, ") + e.what());
    return kBlowUp;
  }
}

int cmd_entrain(const Context& c) {
  require_checked(c.cfg);
  const auto p = load_preset(c.cfg);
  const Vector xa = initial_condition(p, c.cfg.x0, 0);
  const Vector xb = initial_condition(p, c.cfg.x0_ref, 1);
  EntrainmentOptions o;
  o.horizon = c.cfg.horizon.value_or(0.0);
  o.dt = c.cfg.dt.value_or(0.0);
  o.settle_fraction = c.cfg.settle.value_or(-1.0);
  if ((c.cfg.horizon && !(o.horizon > 0.0)) || (c.cfg.dt && !(o.dt > 0.0)))
    throw ConfigError("horizon and dt must be positive");
  if (c.cfg.settle && !(o.settle_fraction >= 0.0 && o.settle_fraction < 1.0))
    throw ConfigError("settle must lie in [0, 1)");
  const auto dir = run_dir(c.cfg, p.name, c.cfg.forcing);
  try {
    const auto r = run_entrainment(p, c.cfg.forcing, xa, xb, o);
    io::write_atomic(dir / "trajectories.csv", io::trajectory_csv(r.x, &p.P.P()));
    io::write_atomic(dir / "trajectories_ref.csv", io::trajectory_csv(r.ref, &p.P.P()));
    io::write_atomic(dir / "gaps.csv", io::gaps_csv(r.gap, &r.convergence.tail_sup));
    nlohmann::json fits{{"gap_fit", r.fit ? r.fit->to_json() : nlohmann::json(nullptr)}};
    if (!r.fit_note.empty()) fits["note"] = r.fit_note;
    io::write_atomic(dir / "fits.json", io::json_text(fits));
    auto rep = r.report();
    rep["command"] = "entrain";
    rep["x0"] = to_std(xa);
    rep["x0_ref"] = to_std(xb);
    io::write_atomic(dir / "report.json", io::json_text(rep));
    c.say("entrain " + p.name + "/" + c.cfg.forcing + ": gap final-decile sup " +
          io::format_double(r.convergence.final_decile_sup) + (r.gap_pass ? " pass" : " FAIL"));
    if (r.periodicity_residual)
      c.say("  periodicity residual " + io::format_double(*r.periodicity_residual) +
            (r.periodicity_pass ? " pass" : " FAIL"));
    if (r.module)
      c.say(std::string("  spectrum contained in module: ") + (r.module->contained ? "true" : "false") +
            (r.spectrum_required ? "" : " (informational)"));
    return r.pass() ? kPass : kCheckFailed;
  } catch (const BlowUpError& e) {
    write_blow_up(dir, e, "entrain");
    c.say(std::string("entrain: blow-up, ") + e.what());
    return kBlowUp;
  }
}

int cmd_analyze(const Context& c) {
  const auto& cfg = c.cfg;
  SignalSpec v;
  std::string id;
  if (cfg.sampled) {
    const auto s = io::read_sampled_csv(*cfg.sampled);
    v = sampled_signal(s.times, s.values, fs::path(*cfg.sampled).stem().string());
    id = v.name();
  } else {
    id = cfg.signal.value_or(cfg.forcing);
    v = signal_by_name(id, 1);
  }
  const double H = cfg.horizon.value_or(200.0);
  if (!(H >= 1.0)) throw ConfigError("analyze needs horizon >= 1");
  const double dt = cfg.dt.value_or(1e-3);
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");

  nlohmann::json rep{{"command", "analyze"}, {"signal", v.descriptor()}, {"range", {0.0, H}}};
  double sup = 0.0;
  Vector buf(v.dim());
  const long N = std::llround(H / dt);
  for (long k = 0; k <= N; ++k) {
    v.eval_into(static_cast<double>(k) * dt, false, buf);
    sup = std::max(sup, buf.norm());
  }
  rep["sup_norm"] = sup;
  const auto sn = stepanov_norm(v, H);
  rep["stepanov_norm"] = {{"value", sn.value}, {"coarse", sn.coarse}, {"fine", sn.fine}, {"argmax", sn.argmax}};
  c.say("stepanov norm " + io::format_double(sn.value) + ", sup norm " + io::format_double(sup));

  const auto dir = output_root(cfg) / "analyze" / id;
  if (cfg.scan_periods) {
    PeriodScanOptions o;
    o.epsilon = cfg.epsilon;
    o.tau_hi = cfg.tau_max.value_or(v.period() > 0.0 ? 5.0 * v.period() : 50.0);
    o.l = cfg.inclusion_length.value_or(0.0);
    const auto scan = stepanov_period_scan(v, o);
    auto js = scan.to_json();
    if (v.period() > 0.0) {
      nlohmann::json exact = nlohmann::json::array();
      for (int k = 1; k * v.period() <= o.tau_hi + 1e-9; ++k)
        exact.push_back({{"tau", k * v.period()},
                         {"distance", stepanov_distance(v, k * v.period(), o.a_lo, o.a_hi, o.window_step, o.h)}});
      js["declared_period_multiples"] = exact;
    }
    rep["period_scan"] = js;
    io::write_atomic(dir / "period_scan.csv", io::period_scan_csv(scan));
    c.say("period scan: " + std::to_string(scan.accepted.size()) + " accepted of " +
          std::to_string(scan.taus.size()));
  }
  if (!cfg.fourier.empty()) {
    std::vector<FourierCoefficient> table;
    nlohmann::json jt = nlohmann::json::array();
    for (double lambda : cfg.fourier) {
      table.push_back(fourier_coefficient(v, lambda, H));
      const auto& fc = table.back();
      jt.push_back({{"lambda", lambda}, {"magnitude", fc.value.norm()}, {"error_proxy", fc.error_proxy}});
      c.say("fourier lambda=" + io::format_double(lambda) + " |v^|=" + io::format_double(fc.value.norm()));
    }
    rep["fourier"] = jt;
    io::write_atomic(dir / "fourier.csv", io::fourier_csv(table));
  }
  rep["pass"] = true;
  io::write_atomic(dir / "report.json", io::json_text(rep));
  return kPass;
}

int cmd_ladder(const Context& c) {
  require_checked(c.cfg);
  const auto p = load_preset(c.cfg);
  LadderOptions o;
  o.seed = c.cfg.seed;
  o.horizon = c.cfg.horizon.value_or(0.0);
  o.dt = c.cfg.dt.value_or(0.0);
  if ((c.cfg.horizon && !(o.horizon > 0.0)) || (c.cfg.dt && !(o.dt > 0.0)))
    throw ConfigError("horizon and dt must be positive");
  const auto radii = c.cfg.radii.empty() ? std::vector<double>{1.0, 2.0, 5.0} : c.cfg.radii;
  const auto ladder = run_gain_ladder(p, c.cfg.forcing, radii, o);
  bool pass = true;
  for (const auto& r : ladder.rows) {
    if (r.skipped) {
      c.say("R=" + io::format_double(r.R) + ": " + r.note);
      continue;
    }
    pass = pass && r.contraction && !r.rejected;
    c.say("R=" + io::format_double(r.R) + ": " +
          (r.rejected ? "rejected (" + r.note + ")"
                      : "M=" + io::format_double(r.combined.M) + " gamma=" + io::format_double(r.combined.gamma) +
                            (r.contraction ? "" : " FLAGGED")));
  }
  const auto dir = run_dir(c.cfg, p.name, c.cfg.forcing);
  io::write_atomic(dir / "fits.json", io::json_text(ladder.to_json()));
  nlohmann::json rep{{"command", "ladder"}, {"preset", p.name}, {"forcing", c.cfg.forcing},
                     {"seed", c.cfg.seed}, {"pass", pass}};
  io::write_atomic(dir / "report.json", io::json_text(rep));
  return pass ? kPass : kCheckFailed;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Context c{cfg, out, cfg.verbosity == "quiet"};
  try {
    if (cfg.command == "verify") return cmd_verify(c);
    if (cfg.command == "simulate") return cmd_simulate(c);
    if (cfg.command == "entrain") return cmd_entrain(c);
    if (cfg.command == "analyze") return cmd_analyze(c);
    if (cfg.command == "ladder") return cmd_ladder(c);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const RangeError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability checks and experiments for forced Lur'e systems", "lurelab"};
  app.require_subcommand(1);

  std::string config, preset, forcing, x0, x0_ref, out_dir, nonlinearity, radii, signal, sampled, fourier;
  double horizon = 0, dt = 0, settle = 0, epsilon = 0, tau_max = 0, incl = 0;
  std::uint64_t seed = 0;
  bool scan = false, force = false, quiet = false;

  struct Opts {
    CLI::Option *config, *preset, *forcing, *x0, *horizon, *dt, *seed, *out, *nonlinearity, *force, *quiet;
    CLI::Option *x0_ref = nullptr, *settle = nullptr, *radii = nullptr, *signal = nullptr, *sampled = nullptr,
                *scan = nullptr, *epsilon = nullptr, *tau_max = nullptr, *fourier = nullptr, *incl = nullptr;
  };
  std::map<std::string, Opts> opts;
  const std::pair<const char*, const char*> commands[] = {
      {"verify", "certify a preset and check its hypotheses"},
      {"simulate", "integrate one forced run"},
      {"entrain", "compare two runs under the same forcing"},
      {"analyze", "Stepanov, period and Fourier analysis of a signal"},
      {"ladder", "fit incremental envelopes across input radii"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    Opts o{};
    o.config = sub->add_option("--config", config, "JSON run configuration");
    o.preset = sub->add_option("--preset", preset, "one-mass | two-mass | wec");
    o.forcing = sub->add_option("--forcing", forcing, "zero | v_p | v_s | v_ap | v_aap");
    o.x0 = sub->add_option("--x0", x0, "initial condition, comma separated");
    o.horizon = sub->add_option("--horizon", horizon, "simulation or analysis horizon");
    o.dt = sub->add_option("--dt", dt, "time step");
    o.seed = sub->add_option("--seed", seed, "random seed");
    o.out = sub->add_option("--out", out_dir, "output root (LURELAB_OUT overrides)");
    o.nonlinearity = sub->add_option("--nonlinearity", nonlinearity, "replacement f as JSON or a name");
    o.force = sub->add_flag("--force", force, "run with an unverified nonlinearity");
    o.quiet = sub->add_flag("--quiet", quiet, "suppress summary lines");
    const std::string n = name;
    if (n == "verify" || n == "ladder") o.radii = sub->add_option("--radii", radii, "radii, comma separated");
    if (n == "entrain") {
      o.x0_ref = sub->add_option("--x0-ref", x0_ref, "reference initial condition");
      o.settle = sub->add_option("--settle", settle, "settle fraction of the horizon");
    }
    if (n == "analyze") {
      o.signal = sub->add_option("--signal", signal, "named signal");
      o.sampled = sub->add_option("--sampled", sampled, "CSV of (t, v) on a uniform grid");
      o.scan = sub->add_flag("--scan-periods", scan, "scan Stepanov epsilon-periods");
      o.epsilon = sub->add_option("--epsilon", epsilon, "epsilon for the period scan");
      o.tau_max = sub->add_option("--tau-max", tau_max, "largest scanned period");
      o.incl = sub->add_option("--inclusion-length", incl, "declared l for relative density");
      o.fourier = sub->add_option("--fourier", fourier, "frequencies, e.g. 2pi,2sqrt2pi");
    }
    opts.emplace(n, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  RunConfig cfg;
  try {
    const auto subs = app.get_subcommands();
    const std::string cmd = subs.front()->get_name();
    const Opts& o = opts.at(cmd);
    if (o.config->count()) cfg = load_config_file(config, cfg);
    if (!cfg.command.empty() && cfg.command != cmd)
      throw ConfigError("config is for '" + cfg.command + "' but the command is '" + cmd + "'");
    cfg.command = cmd;
    if (o.preset->count()) cfg.preset = preset;
    if (o.forcing->count()) cfg.forcing = forcing;
    if (o.x0->count()) cfg.x0 = parse_number_list(x0);
    if (o.horizon->count()) cfg.horizon = horizon;
    if (o.dt->count()) cfg.dt = dt;
    if (o.seed->count()) cfg.seed = seed;
    if (o.out->count()) cfg.out = out_dir;
    if (o.nonlinearity->count()) {
      try {
        cfg.nonlinearity = nlohmann::json::parse(nonlinearity);
      } catch (const nlohmann::json::parse_error&) {
        cfg.nonlinearity = nlohmann::json(nonlinearity);
      }
    }
    if (o.force->count()) cfg.force = true;
    if (o.quiet->count()) cfg.verbosity = "quiet";
    if (o.radii && o.radii->count()) cfg.radii = parse_number_list(radii);
    if (o.x0_ref && o.x0_ref->count()) cfg.x0_ref = parse_number_list(x0_ref);
    if (o.settle && o.settle->count()) cfg.settle = settle;
    if (o.signal && o.signal->count()) cfg.signal = signal;
    if (o.sampled && o.sampled->count()) cfg.sampled = sampled;
    if (o.scan && o.scan->count()) cfg.scan_periods = true;
    if (o.epsilon && o.epsilon->count()) cfg.epsilon = epsilon;
    if (o.tau_max && o.tau_max->count()) cfg.tau_max = tau_max;
    if (o.incl && o.incl->count()) cfg.inclusion_length = incl;
    if (o.fourier && o.fourier->count()) cfg.fourier = parse_frequency_list(fourier);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return execute(cfg, out, err);
}

}  // namespace lurelab::cli
