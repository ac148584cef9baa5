#include "lurelab/apsignals.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lurelab {

namespace {

// Composite trapezoid on [a, b] for an integrand g(t, left) that is smooth
// inside the interval; the right end uses the left limit.
template <class G>
double trapezoid(const G& g, double a, double b, double h) {
  const double len = b - a;
  if (!(len > 0.0)) return 0.0;
  const long n = std::max(1L, static_cast<long>(std::ceil(len / h - 1e-9)));
  const double step = len / static_cast<double>(n);
  double sum = 0.5 * (g(a, false) + g(b, true));
  for (long i = 1; i < n; ++i) sum += g(a + static_cast<double>(i) * step, false);
  return sum * step;
}

template <class G>
double piecewise_integral(const G& g, const std::vector<double>& jumps, double a, double b,
                          double h) {
  double total = 0.0;
  double lo = a;
  for (auto it = std::upper_bound(jumps.begin(), jumps.end(), a); it != jumps.end() && *it < b;
       ++it) {
    total += trapezoid(g, lo, *it, h);
    lo = *it;
  }
  return total + trapezoid(g, lo, b, h);
}

struct WindowSup {
  double value = 0.0;
  double argmax = 0.0;
};

// sup over a = a_lo + j * step <= a_hi of int_a^{a+1} g.
template <class G>
WindowSup window_sup(const G& g, const std::vector<double>& jumps, double a_lo, double a_hi,
                     double step, double h) {
  const long J = static_cast<long>(std::floor((a_hi - a_lo) / step + 1e-9));
  WindowSup out;
  out.value = -1.0;
  const double per = 1.0 / step;
  const long L = std::lround(per);
  if (L >= 1 && std::abs(per - static_cast<double>(L)) <= 1e-9 * per) {
    const long cells = J + L;
    std::vector<double> prefix(static_cast<std::size_t>(cells) + 1, 0.0);
    for (long i = 0; i < cells; ++i) {
      const double c0 = a_lo + static_cast<double>(i) * step;
      const double c1 = a_lo + static_cast<double>(i + 1) * step;
      prefix[static_cast<std::size_t>(i) + 1] =
          prefix[static_cast<std::size_t>(i)] + piecewise_integral(g, jumps, c0, c1, h);
    }
    for (long j = 0; j <= J; ++j) {
      const double w = prefix[static_cast<std::size_t>(j + L)] - prefix[static_cast<std::size_t>(j)];
      if (w > out.value) {
        out.value = w;
        out.argmax = a_lo + static_cast<double>(j) * step;
      }
    }
  } else {
    for (long j = 0; j <= J; ++j) {
      const double a = a_lo + static_cast<double>(j) * step;
      const double w = piecewise_integral(g, jumps, a, a + 1.0, h);
      if (w > out.value) {
        out.value = w;
        out.argmax = a;
      }
    }
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

}  // namespace

StepanovNorm stepanov_norm(const SignalSpec& v, double T, double window_step, double h) {
  if (!(T >= 1.0)) throw RangeError("stepanov_norm: range [0, T] needs T >= 1");
  if (!(window_step > 0.0) || !(h > 0.0)) throw ValidationError("stepanov_norm: steps must be positive");
  const auto jumps = v.breakpoints(0.0, T);
  Vector buf(v.dim());
  auto g = [&](double t, bool left) {
    v.eval_into(t, left, buf);
    return buf.norm();
  };
  StepanovNorm out;
  out.coarse = window_sup(g, jumps, 0.0, T - 1.0, window_step, h).value;
  const auto fine = window_sup(g, jumps, 0.0, T - 1.0, 0.5 * window_step, h);
  out.fine = fine.value;
  out.value = fine.value;
  out.argmax = fine.argmax;
  return out;
}

double stepanov_distance(const SignalSpec& v, double tau, double a_lo, double a_hi,
                         double window_step, double h, double* argmax) {
  if (!(window_step > 0.0) || !(h > 0.0)) throw ValidationError("stepanov_distance: steps must be positive");
  if (a_hi < a_lo) throw RangeError("stepanov_distance: empty window range");
  auto jumps = v.breakpoints(a_lo, a_hi + 1.0);
  for (double b : v.breakpoints(a_lo + tau, a_hi + 1.0 + tau)) jumps.push_back(b - tau);
  std::sort(jumps.begin(), jumps.end());
  Vector x(v.dim()), y(v.dim());
  auto g = [&](double t, bool left) {
    v.eval_into(t + tau, left, x);
    v.eval_into(t, left, y);
    return (x - y).norm();
  };
  const auto ws = window_sup(g, jumps, a_lo, a_hi, window_step, h);
  if (argmax) *argmax = ws.argmax;
  return ws.value;
}

nlohmann::json StepanovReport::to_json() const {
  nlohmann::json j{{"epsilon", epsilon},
                   {"tau_range", {tau_lo, tau_hi}},
                   {"accepted_count", accepted.size()},
                   {"accepted", accepted},
                   {"l", l},
                   {"relatively_dense", relatively_dense},
                   {"scope", "empirical relative density on the scanned range"}};
  j["max_gap"] = std::isfinite(max_gap) ? nlohmann::json(max_gap) : nlohmann::json(nullptr);
  return j;
}

StepanovReport stepanov_period_scan(const SignalSpec& v, const PeriodScanOptions& o) {
  double step = o.tau_step;
  if (!(step > 0.0)) step = v.period() > 0.0 ? v.period() / 200.0 : 0.01;
  if (o.tau_hi < o.tau_lo) throw RangeError("stepanov_period_scan: empty tau range");
  StepanovReport r;
  r.epsilon = o.epsilon;
  r.l = o.l;
  r.tau_lo = o.tau_lo;
  r.tau_hi = o.tau_hi;
  const long count = static_cast<long>(std::floor((o.tau_hi - o.tau_lo) / step + 1e-9)) + 1;
  r.taus.resize(static_cast<std::size_t>(count));
  r.distances.resize(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) r.taus[static_cast<std::size_t>(i)] = o.tau_lo + static_cast<double>(i) * step;
  parallel_for(r.taus.size(), [&](std::size_t i) {
    r.distances[i] = stepanov_distance(v, r.taus[i], o.a_lo, o.a_hi, o.window_step, o.h);
  });
  for (std::size_t i = 0; i < r.taus.size(); ++i)
    if (r.distances[i] <= o.epsilon) r.accepted.push_back(r.taus[i]);
  if (r.accepted.empty()) {
    r.max_gap = std::numeric_limits<double>::infinity();
  } else {
    double gap = std::max(r.accepted.front() - o.tau_lo, o.tau_hi - r.accepted.back());
    for (std::size_t i = 1; i < r.accepted.size(); ++i)
      gap = std::max(gap, r.accepted[i] - r.accepted[i - 1]);
    r.max_gap = gap;
  }
  r.relatively_dense = !r.accepted.empty() && o.l > 0.0 && r.max_gap <= o.l;
  return r;
}

BochnerProfile bochner_transform(const SignalSpec& v, double t, int nodes) {
  if (nodes < 2) throw ValidationError("bochner_transform: need >= 2 nodes");
  if (!(t >= 0.0)) throw RangeError("bochner_transform: t must be >= 0");
  BochnerProfile p;
  p.t = t;
  p.values.resize(nodes, v.dim());
  Vector buf(v.dim());
  for (int j = 0; j < nodes; ++j) {
    const double s = static_cast<double>(j) / (nodes - 1);
    v.eval_into(t + s, j == nodes - 1, buf);
    p.values.row(j) = buf.transpose();
  }
  return p;
}

double l1_distance(const BochnerProfile& a, const BochnerProfile& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw DimensionError("l1_distance: profiles have different shapes");
  const Eigen::Index n = a.values.rows();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = (a.values.row(j) - b.values.row(j)).norm();
    sum += (j == 0 || j == n - 1) ? 0.5 * d : d;
  }
  return sum / static_cast<double>(n - 1);
}

}  // namespace lurelab
