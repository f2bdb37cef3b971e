#include "latoc/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace latoc {

ComplexVector plane_wave(int n, const Lattice1DParams& p) {
  p.validate();
  if (std::abs(n) > p.n_max) {
    throw std::out_of_range("plane_wave: momentum index outside truncation");
  }
  ComplexVector psi = ComplexVector::Zero(p.dim());
  psi[n + p.n_max] = 1.0;
  return psi;
}

ComplexVector plane_wave_2d(int m, int n, const Lattice2DParams& p) {
  p.validate();
  ComplexVector psi = ComplexVector::Zero(p.dim());
  psi[flatten(m, n, p)] = 1.0;
  return psi;
}

namespace {

ComplexVector normalized_or_throw(ComplexVector psi, const char* what) {
  const double norm = psi.norm();
  if (!(norm > 1e-14)) {
    throw std::invalid_argument(std::string(what) + ": state has (near-)zero norm");
  }
  return psi / norm;
}

}  // namespace

ComplexVector superposition(const std::vector<std::pair<int, Complex>>& terms,
                            const Lattice1DParams& p) {
  p.validate();
  if (terms.empty()) throw std::invalid_argument("superposition: no terms");
  ComplexVector psi = ComplexVector::Zero(p.dim());
  for (const auto& [n, amp] : terms) {
    if (std::abs(n) > p.n_max) {
      throw std::out_of_range("superposition: momentum index outside truncation");
    }
    psi[n + p.n_max] += amp;
  }
  return normalized_or_throw(std::move(psi), "superposition");
}

ComplexVector superposition_2d(const std::vector<std::pair<std::pair<int, int>, Complex>>& terms,
                               const Lattice2DParams& p) {
  p.validate();
  if (terms.empty()) throw std::invalid_argument("superposition_2d: no terms");
  ComplexVector psi = ComplexVector::Zero(p.dim());
  for (const auto& [mn, amp] : terms) psi[flatten(mn.first, mn.second, p)] += amp;
  return normalized_or_throw(std::move(psi), "superposition_2d");
}

ComplexVector squeezed_state(double x_c, double p_c, double xi, const Lattice1DParams& p) {
  p.validate();
  if (!(p.s > 0.0)) {
    throw std::invalid_argument("squeezed_state: needs a nonzero lattice depth to set the width");
  }
  if (!(xi > 0.0)) throw std::invalid_argument("squeezed_state: squeezing factor must be positive");

  // ground-state width of the harmonic well bottom is s^{-1/4}; xi rescales it
  const double sigma = xi * std::pow(p.s, -0.25);
  const DVRTransform t(p);
  ComplexVector samples(t.points());
  for (int j = 0; j < t.points(); ++j) {
    // minimal-image displacement keeps the envelope periodic on the ring
    double delta = std::remainder(t.grid[j] - x_c, 2.0 * std::numbers::pi);
    const double envelope = std::exp(-delta * delta / (4.0 * sigma * sigma));
    samples[j] = envelope * std::polar(1.0, p_c * t.grid[j]);
  }
  return normalized_or_throw(t.R.adjoint() * samples, "squeezed_state");
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(a.dot(b));
}

RealVector population_distribution(const ComplexVector& psi) { return psi.cwiseAbs2(); }

ComplexVector realize(const TargetSpec& spec, const Lattice1DParams& p) {
  return std::visit(
      [&](const auto& s) -> ComplexVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWave1DSpec>) {
          return plane_wave(s.n, p);
        } else if constexpr (std::is_same_v<T, Superposition1DSpec>) {
          return superposition(s.terms, p);
        } else if constexpr (std::is_same_v<T, Squeezed1DSpec>) {
          return squeezed_state(s.x_c, s.p_c, s.xi, p);
        } else {
          throw std::invalid_argument("state spec: 2D description used with a 1D lattice");
        }
      },
      spec);
}

ComplexVector realize(const TargetSpec& spec, const Lattice2DParams& p) {
  return std::visit(
      [&](const auto& s) -> ComplexVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWave2DSpec>) {
          return plane_wave_2d(s.m, s.n, p);
        } else if constexpr (std::is_same_v<T, Superposition2DSpec>) {
          return superposition_2d(s.terms, p);
        } else {
          throw std::invalid_argument("state spec: 1D description used with a 2D lattice");
        }
      },
      spec);
}

}  // namespace latoc
