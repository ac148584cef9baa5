#pragma once

#include "lurelab/apsignals.hpp"
#include "lurelab/simcore.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lurelab::io {

// Shortest round-trip decimal form.
std::string format_double(double x);

// Writes to a sibling temporary file and renames it over `path`, creating
// parent directories as needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Header: t,x1..xn,norm and V_P when P is given.
std::string trajectory_csv(const Trajectory& traj, const Matrix* P = nullptr);
// Header: t,gap,forcing_integral,forcing_sup and tail_sup when given.
std::string gaps_csv(const GapSeries& gap, const std::vector<double>* tail_sup = nullptr);
// Header: tau,distance,accepted.
std::string period_scan_csv(const StepanovReport& report);
// Header: lambda,component,re,im,magnitude,error_proxy.
std::string fourier_csv(const std::vector<FourierCoefficient>& table);

std::string json_text(const nlohmann::json& j);

struct SampledSeries {
  std::vector<double> times;
  std::vector<double> values;
};

// Two numeric columns (t, v); a non-numeric first line is taken as a header.
// Throws ValidationError on malformed rows.
SampledSeries read_sampled_csv(const std::filesystem::path& path);

}  // namespace lurelab::io
