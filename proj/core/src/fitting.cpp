#include "lurelab/simcore.hpp"

#include <algorithm>
#include <cmath>

namespace lurelab {

namespace {

constexpr double kFloor = 1e-300;

}  // namespace

double ExpFit::operator()(double t, double gap0) const { return M * std::exp(-gamma * t) * gap0; }

nlohmann::json ExpFit::to_json() const {
  return {{"M", M},         {"M_prime", M_prime}, {"gamma", gamma},
          {"residual", residual}, {"window", {t_start, t_end}}, {"nodes", nodes},
          {"contraction", contraction()}};
}

ExpFit fit_exponential(const GapSeries& g, const FitWindow& w) {
  if (g.times.empty() || g.times.size() != g.gap.size())
    throw InsufficientDataError("fit_exponential: empty or ragged gap series");
  const double t0 = g.times.front();
  const double t1 = g.times.back();
  ExpFit fit;
  fit.t_start = w.t_start >= 0.0 ? w.t_start : t0 + w.exclude_fraction * (t1 - t0);
  fit.t_end = w.t_end >= 0.0 ? w.t_end : t1;

  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    const double t = g.times[k] - t0;
    if (g.times[k] < fit.t_start || g.times[k] > fit.t_end || !(g.gap[k] > kFloor)) continue;
    const double y = std::log(g.gap[k]);
    n += 1;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  if (n < 8) throw InsufficientDataError("fit_exponential: fewer than 8 usable nodes in the window");
  const double den = n * stt - st * st;
  if (!(den > 0.0)) throw InsufficientDataError("fit_exponential: degenerate window");
  const double slope = (n * sty - st * sy) / den;
  double intercept = (sy - slope * st) / n;

  double ss = 0.0, lift = -1e300;
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    if (g.times[k] < fit.t_start || g.times[k] > fit.t_end || !(g.gap[k] > kFloor)) continue;
    const double e = std::log(g.gap[k]) - (intercept + slope * (g.times[k] - t0));
    ss += e * e;
    lift = std::max(lift, e);
  }
  fit.residual = std::sqrt(ss / n);
  if (w.envelope) intercept += lift;
  fit.nodes = static_cast<std::size_t>(n);
  fit.gamma = -slope;
  fit.M_prime = std::exp(intercept);
  fit.M = g.gap.front() > kFloor ? fit.M_prime / g.gap.front() : 0.0;
  return fit;
}

double envelope_coverage(const ExpFit& fit, const GapSeries& g, double t_from) {
  if (g.times.empty()) return 1.0;
  const double t0 = g.times.front();
  const double gap0 = g.gap.front();
  std::size_t total = 0, covered = 0;
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    if (g.times[k] < t_from) continue;
    ++total;
    if (g.gap[k] <= fit(g.times[k] - t0, gap0)) ++covered;
  }
  return total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;
}

nlohmann::json IissSurrogate::to_json() const { return {{"M", M}, {"gamma", gamma}, {"a", a}}; }

IissSurrogate fit_iiss_surrogate(const std::vector<GapSeries>& training, const FitWindow& w) {
  std::vector<const GapSeries*> free, forced;
  for (const auto& g : training) {
    if (g.times.empty()) continue;
    (g.forcing_integral.back() > 0.0 ? forced : free).push_back(&g);
  }
  if (free.empty())
    throw InsufficientDataError("fit_iiss_surrogate: no training member with equal forcings");
  IissSurrogate s;
  bool have_gamma = false;
  for (const auto* g : free) {
    if (!(g->gap.front() > kFloor)) continue;
    const double gamma = fit_exponential(*g, w).gamma;
    if (gamma > 0.0 && (!have_gamma || gamma < s.gamma)) {
      s.gamma = gamma;
      have_gamma = true;
    }
  }
  if (!have_gamma) s.gamma = 0.0;
  for (const auto* g : free) {
    const double gap0 = g->gap.front();
    if (!(gap0 > kFloor)) continue;
    for (std::size_t k = 0; k < g->times.size(); ++k)
      s.M = std::max(s.M, g->gap[k] / (std::exp(-s.gamma * (g->times[k] - g->times.front())) * gap0));
  }
  for (const auto* g : forced) {
    const double gap0 = g->gap.front();
    for (std::size_t k = 0; k < g->times.size(); ++k) {
      if (!(g->forcing_integral[k] > 0.0)) continue;
      const double psi = s.M * std::exp(-s.gamma * (g->times[k] - g->times.front())) * gap0;
      s.a = std::max(s.a, (g->gap[k] - psi) / g->forcing_integral[k]);
    }
  }
  return s;
}

nlohmann::json IissCheck::to_json() const {
  return {{"pass", pass},
          {"kl_valid", kl_valid},
          {"member_pass", member_pass},
          {"worst_excess", worst_excess},
          {"surrogate", surrogate.to_json()}};
}

IissCheck iiss_bound_check(const std::vector<GapSeries>& held_out, const IissSurrogate& s,
                           double rel_tol) {
  IissCheck out;
  out.surrogate = s;
  // psi(s, t) = M e^{-gamma t} s is class KL only for gamma > 0.
  out.kl_valid = s.gamma > 0.0 && std::isfinite(s.M);
  out.pass = out.kl_valid;
  for (const auto& g : held_out) {
    bool ok = true;
    double worst = -1e300;
    const double gap0 = g.gap.empty() ? 0.0 : g.gap.front();
    for (std::size_t k = 0; k < g.times.size(); ++k) {
      const double bound = s.M * std::exp(-s.gamma * (g.times[k] - g.times.front())) * gap0 +
                           s.a * g.forcing_integral[k];
      const double excess = g.gap[k] - bound;
      worst = std::max(worst, excess);
      if (excess > rel_tol * (bound + g.gap[k])) ok = false;
    }
    out.member_pass.push_back(ok);
    out.worst_excess.push_back(worst);
    out.pass = out.pass && ok;
  }
  return out;
}

}  // namespace lurelab
