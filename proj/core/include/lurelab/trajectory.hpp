#pragma once

#include "lurelab/linear.hpp"

#include <string>
#include <vector>

namespace lurelab {

struct IntegratorInfo {
  std::string method = "rk4";
  double dt = 0.0;
  long substeps = 0;         // RK4 sub-steps introduced by forcing jumps
  long breakpoints_hit = 0;  // jumps met inside or at the end of a step
};

// Uniformly sampled state path: row k of `states` is x(times[k]).
struct Trajectory {
  std::vector<double> times;
  Matrix states;
  std::string forcing_id;
  IntegratorInfo info;

  std::size_t size() const { return times.size(); }
  int n() const { return static_cast<int>(states.cols()); }
  Vector state(std::size_t k) const { return states.row(static_cast<Eigen::Index>(k)).transpose(); }

  // Throws ValidationError unless times increase strictly, states are finite
  // and the row count matches.
  void validate() const;
};

// Throws AlignmentError unless the time grids agree to 1e-12 (relative).
void require_same_grid(const Trajectory& a, const Trajectory& b);

}  // namespace lurelab
