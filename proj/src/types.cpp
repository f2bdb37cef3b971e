#include "latoc/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace latoc {

bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }

bool all_finite(const ComplexVector& v) { return v.allFinite(); }

void require_unit_norm(const ComplexVector& psi, const char* what, double tol) {
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= tol)) {
    throw std::invalid_argument(std::string(what) + ": expected unit norm, got " +
                                std::to_string(norm));
  }
}

}  // namespace latoc
