#pragma once

#include <utility>
#include <vector>

#include "latoc/lattice1d.hpp"

namespace latoc {

struct GPParams {
  Lattice1DParams lattice;
  double beta = 0.0;  // mean-field coupling; beta = 0 reduces to the linear model

  void validate() const;
};

// unitary change of basis between the momentum basis and the position grid
// x_j = 2 pi j / N, j = 0..N-1.  R_{j,n} = exp(i (2pi/N)(q+n) j) / sqrt(N),
// rows indexed by grid point, columns by n = -n_max..n_max.
struct DVRTransform {
  Eigen::VectorXd grid;
  ComplexMatrix R;

  explicit DVRTransform(const Lattice1DParams& p);
  int points() const { return static_cast<int>(grid.size()); }
};

// grid density G_j = |psi(x_j)|^2 = (N / 2pi) |(R psi)_j|^2, the diagonal of
// the density matrix in the grid basis.  quadrature: (2pi/N) sum_j G_j = ||psi||^2.
RealVector density_dvr(const DVRTransform& t, const ComplexVector& psi);

// I_j = Im[conj(chi(x_j)) psi(x_j)], diagonal of the overlap matrix coupling
// the adjoint to the state in the nonlinear backward dynamics
RealVector overlap_imag_dvr(const DVRTransform& t, const ComplexVector& chi,
                            const ComplexVector& psi);

// H(phi) + beta R^dag diag(G(psi)) R; at beta = 0 exactly hamiltonian_at
ComplexMatrix gp_hamiltonian(const GPParams& p, const ComplexVector& psi, double phi);

// mean-field energy <psi|H(phi)|psi> + (beta/2)(2pi/N) sum_j G_j^2
double gp_energy(const GPParams& p, const ComplexVector& psi, double phi);

// frozen-nonlinearity propagation: G is evaluated at each step's initial
// state and one exact exponential is applied per step
std::vector<ComplexVector> propagate_gp(const GPParams& p, const ComplexVector& psi0,
                                        const ControlGrid& control);

// independent oracle: integrates the momentum-space cubic-convolution form of
// the equation of motion with fixed-step RK4.  n_steps_rk4 must be a positive
// multiple of control.n_steps so control lookup never straddles a boundary.
std::vector<ComplexVector> propagate_gp_rk4(const GPParams& p, const ComplexVector& psi0,
                                            const ControlGrid& control, int n_steps_rk4);

// joint backward propagation of the stacked (psi, chi) system from t_f to 0.
// the 2N generator [[H_GP, 0], [-2 i beta R^dag diag(I) R, H_GP]] is frozen per
// step at the later-time pair and exponentiated with general_expm.  returns
// (psi trajectory, chi trajectory), each indexed 0..n_steps by start time.
std::pair<std::vector<ComplexVector>, std::vector<ComplexVector>> backward_extended(
    const GPParams& p, const ComplexVector& psi_f, const ComplexVector& chi_f,
    const ControlGrid& control);

}  // namespace latoc
