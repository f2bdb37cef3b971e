#pragma once

#include <Eigen/Dense>
#include <complex>

namespace latoc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kImag{0.0, 1.0};

bool all_finite(const ComplexMatrix& a);
bool all_finite(const ComplexVector& v);

// throws std::invalid_argument unless ||psi|| = 1 within tol
void require_unit_norm(const ComplexVector& psi, const char* what, double tol = 1e-8);

}  // namespace latoc
