#pragma once

#include <Eigen/Dense>
#include <vector>

namespace latoc {

// piecewise-constant control phases on a uniform grid: the value of step k
// applies on [k dt, (k+1) dt), dt = t_f / n_steps.  one channel for the 1D
// families, three (phi12, phi23, phi31) for the 2D lattice.
struct ControlGrid {
  double t_f = 0.0;
  int n_steps = 0;
  std::vector<Eigen::VectorXd> values;  // one array of n_steps samples per channel
  std::vector<bool> optimizable;        // empty means every channel is optimizable

  int channels() const { return static_cast<int>(values.size()); }
  double dt() const { return t_f / n_steps; }
  bool channel_optimizable(int c) const;
  void validate() const;  // throws std::invalid_argument on violation
};

ControlGrid make_control(double t_f, int n_steps, int channels, double value = 0.0);

}  // namespace latoc
