#include "latoc/units.hpp"

#include <numbers>
#include <stdexcept>

namespace latoc::units {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rate_1d() {
  const double k_l = 4.0 * kPi / kWavelength;
  return kHbar * k_l * k_l / (2.0 * kRb87Mass);
}

double rate_2d() {
  const double k = 2.0 * kPi / kWavelength;
  return 3.0 * kHbar * k * k / (2.0 * kRb87Mass);
}

double dimensionless_time_1d(double seconds) {
  if (!(seconds > 0.0)) throw std::invalid_argument("time conversion: time must be positive");
  return seconds * rate_1d();
}

double dimensionless_time_2d(double seconds) {
  if (!(seconds > 0.0)) throw std::invalid_argument("time conversion: time must be positive");
  return seconds * rate_2d();
}

double seconds_1d(double dimensionless) {
  if (!(dimensionless > 0.0)) throw std::invalid_argument("time conversion: time must be positive");
  return dimensionless / rate_1d();
}

double seconds_2d(double dimensionless) {
  if (!(dimensionless > 0.0)) throw std::invalid_argument("time conversion: time must be positive");
  return dimensionless / rate_2d();
}

}  // namespace latoc::units
