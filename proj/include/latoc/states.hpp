#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "latoc/gp.hpp"
#include "latoc/lattice1d.hpp"
#include "latoc/lattice2d.hpp"
#include "latoc/types.hpp"

namespace latoc {

// |phi_n>, a single momentum component; n must lie inside the truncation
ComplexVector plane_wave(int n, const Lattice1DParams& p);
ComplexVector plane_wave_2d(int m, int n, const Lattice2DParams& p);

// normalized sum of plane waves with the given complex weights
ComplexVector superposition(const std::vector<std::pair<int, Complex>>& terms,
                            const Lattice1DParams& p);
ComplexVector superposition_2d(const std::vector<std::pair<std::pair<int, int>, Complex>>& terms,
                               const Lattice2DParams& p);

// Gaussian on the position grid, width xi * s^{-1/4}, centered at x_c with a
// momentum boost p_c; displacement wrapped to [-pi, pi) so the envelope is
// periodic on the ring.  returned in the momentum basis, unit norm.
ComplexVector squeezed_state(double x_c, double p_c, double xi, const Lattice1DParams& p);

// |<a|b>|^2
double fidelity(const ComplexVector& a, const ComplexVector& b);

// |c_i|^2 per basis index
RealVector population_distribution(const ComplexVector& psi);

// declarative description of an initial or target state, realized against the
// lattice it will be used with (1D specs reject 2D lattices and vice versa)
struct PlaneWave1DSpec {
  int n = 0;
};
struct Superposition1DSpec {
  std::vector<std::pair<int, Complex>> terms;
};
struct Squeezed1DSpec {
  double x_c = 0.0;
  double p_c = 0.0;
  double xi = 1.0;
};
struct PlaneWave2DSpec {
  int m = 0;
  int n = 0;
};
struct Superposition2DSpec {
  std::vector<std::pair<std::pair<int, int>, Complex>> terms;
};

using TargetSpec = std::variant<PlaneWave1DSpec, Superposition1DSpec, Squeezed1DSpec,
                                PlaneWave2DSpec, Superposition2DSpec>;

ComplexVector realize(const TargetSpec& spec, const Lattice1DParams& p);
ComplexVector realize(const TargetSpec& spec, const Lattice2DParams& p);

}  // namespace latoc
