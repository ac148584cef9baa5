#include "lurelab/apsignals.hpp"

#include "lurelab/errors.hpp"
#include "lurelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lurelab {

namespace {

using cd = std::complex<double>;

CVector average_coefficient(const SignalSpec& v, double lambda, double T, double h) {
  const auto jumps = v.breakpoints(-T, T);
  CVector total = CVector::Zero(v.dim());
  Vector buf(v.dim());
  auto add_piece = [&](double a, double b) {
    const double len = b - a;
    if (!(len > 0.0)) return;
    const long n = std::max(1L, static_cast<long>(std::ceil(len / h - 1e-9)));
    const double step = len / static_cast<double>(n);
    for (long i = 0; i <= n; ++i) {
      const double t = i == n ? b : a + static_cast<double>(i) * step;
      v.eval_into(t, i == n, buf);
      const double w = (i == 0 || i == n) ? 0.5 * step : step;
      total += (w * std::polar(1.0, -lambda * t)) * buf.cast<cd>();
    }
  };
  double lo = -T;
  for (auto it = std::upper_bound(jumps.begin(), jumps.end(), -T); it != jumps.end() && *it < T; ++it) {
    add_piece(lo, *it);
    lo = *it;
  }
  add_piece(lo, T);
  return total / (2.0 * T);
}

double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 60) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FourierCoefficient fourier_coefficient(const SignalSpec& v, double lambda, double T, double h) {
  if (!(T > 0.0)) throw RangeError("fourier_coefficient: T must be positive");
  if (!(h > 0.0)) {
    h = 1e-2;
    if (lambda != 0.0) h = std::min(h, 2.0 * M_PI / std::abs(lambda) / 64.0);
  }
  FourierCoefficient c;
  c.lambda = lambda;
  c.T = T;
  c.value = average_coefficient(v, lambda, T, h);
  c.error_proxy = (c.value - average_coefficient(v, lambda, 0.5 * T, h)).norm();
  return c;
}

nlohmann::json SpectrumEstimate::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < coefficients[k].size(); ++i) {
      re.push_back(coefficients[k](i).real());
      im.push_back(coefficients[k](i).imag());
    }
    rows.push_back({{"lambda", frequencies[k]},
                    {"magnitude", coefficients[k].norm()},
                    {"re", re},
                    {"im", im}});
  }
  nlohmann::json probes = nlohmann::json::array();
  for (std::size_t k = 0; k < probe_frequencies.size(); ++k)
    probes.push_back({{"lambda", probe_frequencies[k]}, {"magnitude", probe_magnitudes[k]}});
  return {{"horizon", horizon}, {"peaks", rows}, {"probes", probes}};
}

SpectrumEstimate spectrum_from_signal(const SignalSpec& v, const std::vector<double>& frequencies,
                                      double T, const std::vector<double>& probes) {
  SpectrumEstimate s;
  s.horizon = T;
  s.frequencies = frequencies;
  s.coefficients.resize(frequencies.size());
  s.probe_frequencies = probes;
  s.probe_magnitudes.resize(probes.size());
  parallel_for(frequencies.size() + probes.size(), [&](std::size_t i) {
    if (i < frequencies.size()) {
      s.coefficients[i] = fourier_coefficient(v, frequencies[i], T).value;
    } else {
      const std::size_t k = i - frequencies.size();
      s.probe_magnitudes[k] = fourier_coefficient(v, probes[k], T).value.norm();
    }
  });
  return s;
}

SpectrumEstimate estimate_spectrum(const std::vector<double>& times, const Matrix& samples,
                                   const SpectrumOptions& o) {
  const auto N0 = times.size();
  if (N0 < 16 || static_cast<std::size_t>(samples.rows()) != N0)
    throw InsufficientDataError("estimate_spectrum: need >= 16 aligned samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(N0 - 1);
  if (!(dt > 0.0)) throw ValidationError("estimate_spectrum: times must increase");
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(M_PI / (4.0 * o.lambda_max) / dt)));

  std::vector<double> t;
  std::vector<Eigen::Index> rows;
  for (std::size_t k = 0; k < N0; k += stride) {
    t.push_back(times[k]);
    rows.push_back(static_cast<Eigen::Index>(k));
  }
  const std::size_t N = t.size();
  const Eigen::Index ch = samples.cols();
  const double L = t.back() - t.front();
  std::vector<double> w(N);
  double wsum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(k) / static_cast<double>(N - 1));
    wsum += w[k];
  }
  Matrix x(static_cast<Eigen::Index>(N), ch);
  for (std::size_t k = 0; k < N; ++k) x.row(static_cast<Eigen::Index>(k)) = samples.row(rows[k]);
  Vector mean = Vector::Zero(ch);
  for (std::size_t k = 0; k < N; ++k) mean += w[k] * x.row(static_cast<Eigen::Index>(k)).transpose();
  mean /= wsum;
  for (std::size_t k = 0; k < N; ++k) x.row(static_cast<Eigen::Index>(k)) -= mean.transpose();

  auto coeff = [&](double lambda) {
    CVector c = CVector::Zero(ch);
    for (std::size_t k = 0; k < N; ++k)
      c += (w[k] * std::polar(1.0, -lambda * (t[k] - t.front()))) *
           x.row(static_cast<Eigen::Index>(k)).transpose().cast<cd>();
    // Phase referenced to absolute time.
    return CVector(c * std::polar(1.0, -lambda * t.front()) / wsum);
  };
  auto mag = [&](double lambda) { return coeff(lambda).norm(); };

  const double dl = 2.0 * M_PI / (L * o.oversampling);
  const double start = 4.0 * M_PI / L;
  std::vector<double> grid;
  for (double l = start; l <= o.lambda_max; l += dl) grid.push_back(l);
  std::vector<double> m(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { m[i] = mag(grid[i]); });

  SpectrumEstimate s;
  s.horizon = L;
  if (grid.size() < 3) return s;
  const double top = *std::max_element(m.begin(), m.end());
  if (!(top > 0.0)) return s;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (m[i] < o.rel_threshold * top || m[i] < m[i - 1] || m[i] < m[i + 1]) continue;
    if (m[i] == m[i - 1]) continue;
    const double peak = golden_max(mag, grid[i] - dl, grid[i] + dl);
    s.frequencies.push_back(peak);
    s.coefficients.push_back(coeff(peak));
  }
  return s;
}

nlohmann::json ModuleCheck::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& mt : matches)
    rows.push_back({{"lambda", mt.lambda},
                    {"found", mt.found},
                    {"coefficients", mt.coefficients},
                    {"residual", mt.residual}});
  return {{"contained", contained}, {"tol", tol}, {"matches", rows}};
}

ModuleCheck module_check(const std::vector<double>& spectrum, const std::vector<double>& generators,
                         double tol, int max_coeff, int max_generators) {
  ModuleCheck out;
  out.tol = tol;
  const int G = static_cast<int>(generators.size());
  for (double lambda : spectrum) {
    ModuleMatch best;
    best.lambda = lambda;
    best.coefficients.assign(static_cast<std::size_t>(G), 0);
    best.residual = std::abs(lambda);
    std::vector<int> k(static_cast<std::size_t>(G), -max_coeff);
    if (G > 0) {
      // Odometer over [-max_coeff, max_coeff]^G, skipping tuples that use
      // more than max_generators generators.
      while (true) {
        int used = 0;
        double sum = 0.0;
        for (int i = 0; i < G; ++i) {
          if (k[static_cast<std::size_t>(i)] != 0) ++used;
          sum += k[static_cast<std::size_t>(i)] * generators[static_cast<std::size_t>(i)];
        }
        if (used <= max_generators) {
          const double r = std::abs(lambda - sum);
          if (r < best.residual) {
            best.residual = r;
            best.coefficients = k;
          }
        }
        int i = 0;
        while (i < G && k[static_cast<std::size_t>(i)] == max_coeff) k[static_cast<std::size_t>(i++)] = -max_coeff;
        if (i == G) break;
        ++k[static_cast<std::size_t>(i)];
      }
    }
    best.found = best.residual <= tol;
    out.contained = out.contained && best.found;
    out.matches.push_back(best);
  }
  return out;
}

ModuleCheck module_check(const SpectrumEstimate& a, const SpectrumEstimate& b, double tol,
                         int max_coeff, int max_generators) {
  return module_check(a.frequencies, b.frequencies, tol, max_coeff, max_generators);
}

AapCheck aap_decompose_check(const Trajectory& x, const Trajectory& zap, double threshold) {
  require_same_grid(x, zap);
  if (x.n() != zap.n()) throw DimensionError("aap_decompose_check: state dimensions differ");
  AapCheck out;
  out.threshold = threshold;
  const std::size_t N = x.size();
  out.times = x.times;
  out.tail_sup.assign(N, 0.0);
  double run = 0.0;
  for (std::size_t k = N; k-- > 0;) {
    const auto r = static_cast<Eigen::Index>(k);
    run = std::max(run, (x.states.row(r) - zap.states.row(r)).norm());
    out.tail_sup[k] = run;
  }
  if (N == 0) return out;
  const double cut = x.times.front() + 0.9 * (x.times.back() - x.times.front());
  const auto it = std::lower_bound(x.times.begin(), x.times.end(), cut - 1e-12);
  out.final_decile_sup = out.tail_sup[static_cast<std::size_t>(it - x.times.begin())];
  out.pass = out.final_decile_sup <= threshold;
  return out;
}

}  // namespace lurelab
