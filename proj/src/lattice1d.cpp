#include "latoc/lattice1d.hpp"

#include <cmath>
#include <stdexcept>

#include "latoc/numkernel.hpp"

namespace latoc {

void Lattice1DParams::validate() const {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("lattice1d: depth s must be finite and non-negative");
  }
  if (!(std::abs(q) <= 0.5)) {
    throw std::invalid_argument("lattice1d: quasi-momentum must satisfy |q| <= 1/2");
  }
  if (n_max < 1) throw std::invalid_argument("lattice1d: n_max must be at least 1");
}

ComplexMatrix build_kinetic(const Lattice1DParams& p) {
  p.validate();
  const int d = p.dim();
  ComplexMatrix H = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double n = static_cast<double>(i - p.n_max);
    H(i, i) = (n + p.q) * (n + p.q);
  }
  return H;
}

ComplexMatrix build_cos_coupling(const Lattice1DParams& p) {
  p.validate();
  const int d = p.dim();
  ComplexMatrix H = ComplexMatrix::Zero(d, d);
  for (int i = 1; i < d; ++i) {
    H(i, i - 1) = -p.s / 4.0;
    H(i - 1, i) = -p.s / 4.0;
  }
  return H;
}

ComplexMatrix build_sin_coupling(const Lattice1DParams& p) {
  p.validate();
  const int d = p.dim();
  ComplexMatrix H = ComplexMatrix::Zero(d, d);
  for (int i = 1; i < d; ++i) {
    H(i, i - 1) = -kImag * (p.s / 4.0);
    H(i - 1, i) = kImag * (p.s / 4.0);
  }
  return H;
}

ComplexMatrix hamiltonian_at(const Lattice1DParams& p, double phi) {
  return build_kinetic(p) + std::cos(phi) * build_cos_coupling(p) +
         std::sin(phi) * build_sin_coupling(p);
}

ComplexMatrix control_derivative_at(const Lattice1DParams& p, double phi) {
  return -std::sin(phi) * build_cos_coupling(p) + std::cos(phi) * build_sin_coupling(p);
}

std::vector<ComplexVector> propagate_linear(const Lattice1DParams& p, const ComplexVector& psi0,
                                            const ControlGrid& control) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("propagate_linear: expected a single control channel");
  }
  if (psi0.size() != p.dim()) {
    throw std::invalid_argument("propagate_linear: state dimension mismatch");
  }
  require_unit_norm(psi0, "propagate_linear initial state");

  const double dt = control.dt();
  std::vector<ComplexVector> traj;
  traj.reserve(static_cast<std::size_t>(control.n_steps) + 1);
  traj.push_back(psi0);
  for (int k = 0; k < control.n_steps; ++k) {
    const HermitianEig eig(hamiltonian_at(p, control.values[0][k]));
    traj.push_back(eig.apply_propagator(traj.back(), dt));
  }
  return traj;
}

}  // namespace latoc
