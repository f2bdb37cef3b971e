#include "latoc/control.hpp"

#include <stdexcept>
#include <string>

namespace latoc {

bool ControlGrid::channel_optimizable(int c) const {
  if (c < 0 || c >= channels()) throw std::out_of_range("control channel out of range");
  if (optimizable.empty()) return true;
  return optimizable[static_cast<std::size_t>(c)];
}

void ControlGrid::validate() const {
  if (!(t_f > 0.0)) throw std::invalid_argument("control: t_f must be positive");
  if (n_steps <= 0) throw std::invalid_argument("control: n_steps must be positive");
  if (values.empty()) throw std::invalid_argument("control: at least one channel required");
  if (!optimizable.empty() && optimizable.size() != values.size()) {
    throw std::invalid_argument("control: optimizable flags must match channel count");
  }
  for (const auto& channel : values) {
    if (channel.size() != n_steps) {
      throw std::invalid_argument("control: every channel needs exactly n_steps values");
    }
    if (!channel.allFinite()) throw std::invalid_argument("control: non-finite phase value");
  }
}

ControlGrid make_control(double t_f, int n_steps, int channels, double value) {
  if (channels <= 0) throw std::invalid_argument("control: channel count must be positive");
  ControlGrid grid;
  grid.t_f = t_f;
  grid.n_steps = n_steps;
  grid.values.assign(static_cast<std::size_t>(channels),
                     Eigen::VectorXd::Constant(n_steps, value));
  grid.validate();
  return grid;
}

}  // namespace latoc
