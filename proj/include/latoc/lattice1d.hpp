#pragma once

#include <vector>

#include "latoc/control.hpp"
#include "latoc/types.hpp"

namespace latoc {

// 1D optical lattice in the comoving frame, momentum basis |phi_{q+n}>.
// coefficients are stored in increasing n, so index i maps to n = i - n_max.
struct Lattice1DParams {
  double s = 5.0;  // lattice depth (s = 0 gives free evolution)
  double q = 0.0;  // quasi-momentum, |q| <= 1/2
  int n_max = 10;

  int dim() const { return 2 * n_max + 1; }
  void validate() const;  // throws std::invalid_argument
};

ComplexMatrix build_kinetic(const Lattice1DParams& p);       // diag((n+q)^2)
ComplexMatrix build_cos_coupling(const Lattice1DParams& p);  // -s/4 on both off-diagonals
ComplexMatrix build_sin_coupling(const Lattice1DParams& p);  // -is/4 below, +is/4 above

// H(phi) = kinetic + cos(phi) * cos_coupling + sin(phi) * sin_coupling;
// row n couples -(s/4) e^{i phi} to n-1 and -(s/4) e^{-i phi} to n+1
ComplexMatrix hamiltonian_at(const Lattice1DParams& p, double phi);

// dH/dphi = -sin(phi) * cos_coupling + cos(phi) * sin_coupling
ComplexMatrix control_derivative_at(const Lattice1DParams& p, double phi);

// exact propagation, one exponential per step; returns all n_steps+1 states
std::vector<ComplexVector> propagate_linear(const Lattice1DParams& p, const ComplexVector& psi0,
                                            const ControlGrid& control);

}  // namespace latoc
