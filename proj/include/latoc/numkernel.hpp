#pragma once

#include <functional>

#include "latoc/types.hpp"

namespace latoc {

// absolute per-entry tolerance on |H - H^dag|; operator matrices are built
// analytically, so anything larger signals a construction bug
inline constexpr double kHermiticityTol = 1e-12;

double max_hermiticity_defect(const ComplexMatrix& H);

// spectral decomposition of a Hermitian matrix.  kept as a value so the
// eigenbasis can be reused across the propagation and gradient passes.
struct HermitianEig {
  Eigen::VectorXd evals;
  ComplexMatrix evecs;

  explicit HermitianEig(const ComplexMatrix& H);  // throws on Hermiticity defect

  ComplexMatrix propagator(double dt) const;  // exp(-i H dt)
  ComplexVector apply_propagator(const ComplexVector& psi, double dt) const;
};

// exp(-i H dt) for Hermitian H, via eigendecomposition
ComplexMatrix hermitian_propagator(const ComplexMatrix& H, double dt);

// exp(A) for a general square matrix (scaling and squaring)
ComplexMatrix general_expm(const ComplexMatrix& A);

using VectorField = std::function<ComplexVector(double, const ComplexVector&)>;

// classical fourth-order Runge-Kutta update for dy/dt = f(t, y)
ComplexVector rk4_step(const VectorField& f, const ComplexVector& y, double t, double dt);

}  // namespace latoc
