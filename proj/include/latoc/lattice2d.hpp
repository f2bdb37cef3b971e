#pragma once

#include <array>
#include <utility>
#include <vector>

#include "latoc/control.hpp"
#include "latoc/types.hpp"

namespace latoc {

// triangular lattice at zero quasi-momentum; two-index momentum basis
// |phi_{m,n}>, -M <= m <= M, -N <= n <= N, flattened row-major with n fastest
struct Lattice2DParams {
  double s = 5.0;
  int m_max = 5;
  int n_max = 5;

  int dim() const { return (2 * m_max + 1) * (2 * n_max + 1); }
  void validate() const;
};

struct IndexMap2D {
  int m_max = 0;
  int n_max = 0;

  explicit IndexMap2D(const Lattice2DParams& p) : m_max(p.m_max), n_max(p.n_max) {}

  bool contains(int m, int n) const;
  bool on_edge(int m, int n) const;
  int flatten(int m, int n) const;  // throws on out-of-range indices
  std::pair<int, int> unflatten(int i) const;
};

int flatten(int m, int n, const Lattice2DParams& p);
std::pair<int, int> unflatten(int i, const Lattice2DParams& p);

// the three beam-pair phases, in radians
struct PhaseTriple {
  double phi12 = 0.0;
  double phi23 = 0.0;
  double phi31 = 0.0;

  double operator[](int channel) const;  // 0 -> phi12, 1 -> phi23, 2 -> phi31
};

ComplexMatrix build_kinetic2d(const Lattice2DParams& p);  // diag(m^2 + n^2 - mn)

// hop operators along the three bond directions, entries -s/4; plus[l] moves
// amplitude in the positive sense of bond l and minus[l] = plus[l]^dag.
// hops leaving the truncation window are dropped.
struct ShiftOperators {
  std::array<ComplexMatrix, 3> plus;
  std::array<ComplexMatrix, 3> minus;
};
ShiftOperators build_shift_operators(const Lattice2DParams& p);

// H = kinetic + sum_l (e^{i phi_l} plus_l + e^{-i phi_l} minus_l)
ComplexMatrix hamiltonian2d_at(const Lattice2DParams& p, const PhaseTriple& phases);

// dH/dphi_l.  exact: i e^{i phi_l} plus_l - i e^{-i phi_l} minus_l.
// phase_free: i (plus_l - minus_l), the zero-phase simplification, kept for
// comparison runs (it is not the derivative away from phi_l = 0).
enum class Gradient2DRule { exact, phase_free };
ComplexMatrix control_derivative_2d(const Lattice2DParams& p, const PhaseTriple& phases,
                                    int channel, Gradient2DRule rule = Gradient2DRule::exact);

// stepwise exact propagation under a 3-channel control; warns on stderr when
// truncation-edge population exceeds 1e-6 anywhere along the trajectory
std::vector<ComplexVector> propagate_2d(const Lattice2DParams& p, const ComplexVector& psi0,
                                        const ControlGrid& control);

// largest |c_{m,n}|^2 on the truncation boundary over a trajectory
double max_edge_population(const Lattice2DParams& p, const std::vector<ComplexVector>& traj);

}  // namespace latoc
