#include "lurelab/io.hpp"

#include "lurelab/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace lurelab::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("rename to " + path.string() + " failed: " + ec.message());
  }
}

std::string trajectory_csv(const Trajectory& tr, const Matrix* P) {
  std::string s = "t";
  for (int i = 1; i <= tr.n(); ++i) s += ",x" + std::to_string(i);
  s += ",norm";
  if (P) s += ",V_P";
  s += '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Vector x = tr.state(k);
    s += format_double(tr.times[k]);
    for (Eigen::Index i = 0; i < x.size(); ++i) s += ',' + format_double(x(i));
    s += ',' + format_double(x.norm());
    if (P) s += ',' + format_double(x.dot(*P * x));
    s += '\n';
  }
  return s;
}

std::string gaps_csv(const GapSeries& g, const std::vector<double>* tail) {
  std::string s = "t,gap,forcing_integral,forcing_sup";
  if (tail) s += ",tail_sup";
  s += '\n';
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    s += format_double(g.times[k]) + ',' + format_double(g.gap[k]) + ',' +
         format_double(g.forcing_integral[k]) + ',' + format_double(g.forcing_sup[k]);
    if (tail) s += ',' + format_double((*tail)[k]);
    s += '\n';
  }
  return s;
}

std::string period_scan_csv(const StepanovReport& r) {
  std::string s = "tau,distance,accepted\n";
  for (std::size_t k = 0; k < r.taus.size(); ++k)
    s += format_double(r.taus[k]) + ',' + format_double(r.distances[k]) + ',' +
         (r.distances[k] <= r.epsilon ? "1" : "0") + '\n';
  return s;
}

std::string fourier_csv(const std::vector<FourierCoefficient>& table) {
  std::string s = "lambda,component,re,im,magnitude,error_proxy\n";
  for (const auto& c : table)
    for (Eigen::Index i = 0; i < c.value.size(); ++i)
      s += format_double(c.lambda) + ',' + std::to_string(i + 1) + ',' + format_double(c.value(i).real()) +
           ',' + format_double(c.value(i).imag()) + ',' + format_double(std::abs(c.value(i))) + ',' +
           format_double(c.error_proxy) + '\n';
  return s;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + '\n'; }

namespace {

bool parse_double(const std::string& text, double& out) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

SampledSeries read_sampled_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  SampledSeries s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    double t = 0.0, v = 0.0;
    const bool ok = comma != std::string::npos && parse_double(line.substr(0, comma), t) &&
                    parse_double(line.substr(comma + 1), v);
    if (!ok) {
      if (lineno == 1) continue;
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected 't,v'");
    }
    s.times.push_back(t);
    s.values.push_back(v);
  }
  return s;
}

}  // namespace lurelab::io
