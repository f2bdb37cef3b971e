#include "latoc/numkernel.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#if defined(LATOC_USE_LAPACKE)
#include <lapacke.h>
#endif

namespace latoc {

double max_hermiticity_defect(const ComplexMatrix& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("hermiticity check: non-square matrix");
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEig::HermitianEig(const ComplexMatrix& H) {
  const double defect = max_hermiticity_defect(H);
  if (defect > kHermiticityTol) {
    throw std::invalid_argument("eigendecomposition: matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
#if defined(LATOC_USE_LAPACKE)
  // Divide-and-conquer LAPACK solver; noticeably faster than Eigen's QR
  // iteration once the dimension exceeds a few dozen.
  const lapack_int n = static_cast<lapack_int>(H.rows());
  evecs = H;  // overwritten with the eigenvectors (column-major, matching Eigen)
  evals.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                     reinterpret_cast<lapack_complex_double*>(evecs.data()), n, evals.data());
  if (info != 0) {
    throw std::runtime_error("eigendecomposition failed to converge (zheevd info " +
                             std::to_string(info) + ")");
  }
#else
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed to converge");
  }
  evals = solver.eigenvalues();
  evecs = solver.eigenvectors();
#endif
}

ComplexMatrix HermitianEig::propagator(double dt) const {
  const ComplexVector phases = (-kImag * dt * evals.cast<Complex>().array()).exp();
  return evecs * phases.asDiagonal() * evecs.adjoint();
}

ComplexVector HermitianEig::apply_propagator(const ComplexVector& psi, double dt) const {
  const ComplexVector phases = (-kImag * dt * evals.cast<Complex>().array()).exp();
  return evecs * phases.cwiseProduct(evecs.adjoint() * psi);
}

ComplexMatrix hermitian_propagator(const ComplexMatrix& H, double dt) {
  return HermitianEig(H).propagator(dt);
}

ComplexMatrix general_expm(const ComplexMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("expm: non-square matrix");
  return A.exp();
}

ComplexVector rk4_step(const VectorField& f, const ComplexVector& y, double t, double dt) {
  const ComplexVector k1 = f(t, y);
  const ComplexVector k2 = f(t + 0.5 * dt, y + (0.5 * dt) * k1);
  const ComplexVector k3 = f(t + 0.5 * dt, y + (0.5 * dt) * k2);
  const ComplexVector k4 = f(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace latoc
