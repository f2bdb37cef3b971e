#pragma once

namespace latoc {

// everything internal is dimensionless (hbar = 1, energies in recoil-derived
// units); these helpers convert laboratory microseconds to dimensionless time
// for Rb-87 in a 1064 nm lattice.
namespace units {

inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kRb87Mass = 86.909180527 * kAtomicMassUnit;
inline constexpr double kWavelength = 1064e-9;  // m

// time scale hbar k_L^2 / (2 m) with k_L = 4 pi / lambda: the 1D lattice
// (period lambda/2) measures time against 4 recoil energies
double rate_1d();
// 3 hbar k^2 / (2 m) with k = 2 pi / lambda: the triangular lattice scale
double rate_2d();

double dimensionless_time_1d(double seconds);
double dimensionless_time_2d(double seconds);
double seconds_1d(double dimensionless);
double seconds_2d(double dimensionless);

}  // namespace units
}  // namespace latoc
