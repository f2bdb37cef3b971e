#include "latoc/lattice2d.hpp"

#include <cmath>
#include <stdexcept>

#include "latoc/numkernel.hpp"

namespace latoc {

void Lattice2DParams::validate() const {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("lattice2d: depth s must be finite and non-negative");
  }
  if (m_max < 1 || n_max < 1) {
    throw std::invalid_argument("lattice2d: truncations must be at least 1");
  }
}

bool IndexMap2D::contains(int m, int n) const {
  return std::abs(m) <= m_max && std::abs(n) <= n_max;
}

bool IndexMap2D::on_edge(int m, int n) const {
  return contains(m, n) && (std::abs(m) == m_max || std::abs(n) == n_max);
}

int IndexMap2D::flatten(int m, int n) const {
  if (!contains(m, n)) throw std::out_of_range("lattice2d: momentum index outside truncation");
  return (m + m_max) * (2 * n_max + 1) + (n + n_max);
}

std::pair<int, int> IndexMap2D::unflatten(int i) const {
  const int width = 2 * n_max + 1;
  if (i < 0 || i >= (2 * m_max + 1) * width) {
    throw std::out_of_range("lattice2d: flat index outside truncation");
  }
  return {i / width - m_max, i % width - n_max};
}

int flatten(int m, int n, const Lattice2DParams& p) { return IndexMap2D(p).flatten(m, n); }

std::pair<int, int> unflatten(int i, const Lattice2DParams& p) {
  return IndexMap2D(p).unflatten(i);
}

double PhaseTriple::operator[](int channel) const {
  switch (channel) {
    case 0: return phi12;
    case 1: return phi23;
    case 2: return phi31;
    default: throw std::out_of_range("phase channel must be 0, 1, or 2");
  }
}

ComplexMatrix build_kinetic2d(const Lattice2DParams& p) {
  p.validate();
  const IndexMap2D map(p);
  const int d = p.dim();
  ComplexMatrix H = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const auto [m, n] = map.unflatten(i);
    H(i, i) = static_cast<double>(m * m + n * n - m * n);
  }
  return H;
}

ShiftOperators build_shift_operators(const Lattice2DParams& p) {
  p.validate();
  const IndexMap2D map(p);
  const int d = p.dim();
  const Complex amp{-p.s / 4.0, 0.0};
  ShiftOperators ops;
  for (auto& mat : ops.plus) mat = ComplexMatrix::Zero(d, d);

  // plus[l] feeds row (m,n) from the neighbor the e^{+i phi_l} term reads:
  // bond 12 from (m, n+1), bond 23 from (m-1, n-1), bond 31 from (m+1, n)
  constexpr int kSourceShift[3][2] = {{0, 1}, {-1, -1}, {1, 0}};
  for (int i = 0; i < d; ++i) {
    const auto [m, n] = map.unflatten(i);
    for (int l = 0; l < 3; ++l) {
      const int sm = m + kSourceShift[l][0];
      const int sn = n + kSourceShift[l][1];
      if (map.contains(sm, sn)) ops.plus[static_cast<std::size_t>(l)](i, map.flatten(sm, sn)) = amp;
    }
  }
  for (int l = 0; l < 3; ++l) {
    ops.minus[static_cast<std::size_t>(l)] = ops.plus[static_cast<std::size_t>(l)].adjoint();
  }
  return ops;
}

ComplexMatrix hamiltonian2d_at(const Lattice2DParams& p, const PhaseTriple& phases) {
  const ShiftOperators ops = build_shift_operators(p);
  ComplexMatrix H = build_kinetic2d(p);
  for (int l = 0; l < 3; ++l) {
    const Complex e = std::polar(1.0, phases[l]);
    H += e * ops.plus[static_cast<std::size_t>(l)] +
         std::conj(e) * ops.minus[static_cast<std::size_t>(l)];
  }
  return H;
}

ComplexMatrix control_derivative_2d(const Lattice2DParams& p, const PhaseTriple& phases,
                                    int channel, Gradient2DRule rule) {
  if (channel < 0 || channel > 2) throw std::out_of_range("control channel must be 0, 1, or 2");
  const ShiftOperators ops = build_shift_operators(p);
  const auto& plus = ops.plus[static_cast<std::size_t>(channel)];
  const auto& minus = ops.minus[static_cast<std::size_t>(channel)];
  if (rule == Gradient2DRule::phase_free) return kImag * (plus - minus);
  const Complex e = std::polar(1.0, phases[channel]);
  return kImag * e * plus - kImag * std::conj(e) * minus;
}

std::vector<ComplexVector> propagate_2d(const Lattice2DParams& p, const ComplexVector& psi0,
                                        const ControlGrid& control) {
  p.validate();
  control.validate();
  if (control.channels() != 3) {
    throw std::invalid_argument("propagate_2d: expected three control channels");
  }
  if (psi0.size() != p.dim()) {
    throw std::invalid_argument("propagate_2d: state dimension mismatch");
  }
  require_unit_norm(psi0, "propagate_2d initial state");

  const ComplexMatrix kinetic = build_kinetic2d(p);
  const ShiftOperators ops = build_shift_operators(p);
  const double dt = control.dt();

  std::vector<ComplexVector> traj;
  traj.reserve(static_cast<std::size_t>(control.n_steps) + 1);
  traj.push_back(psi0);
  for (int k = 0; k < control.n_steps; ++k) {
    ComplexMatrix H = kinetic;
    for (int l = 0; l < 3; ++l) {
      const Complex e = std::polar(1.0, control.values[static_cast<std::size_t>(l)][k]);
      H += e * ops.plus[static_cast<std::size_t>(l)] +
           std::conj(e) * ops.minus[static_cast<std::size_t>(l)];
    }
    const HermitianEig eig(H);
    traj.push_back(eig.apply_propagator(traj.back(), dt));
  }

  return traj;
}

double max_edge_population(const Lattice2DParams& p, const std::vector<ComplexVector>& traj) {
  const IndexMap2D map(p);
  double worst = 0.0;
  for (const auto& psi : traj) {
    for (int i = 0; i < psi.size(); ++i) {
      const auto [m, n] = map.unflatten(static_cast<int>(i));
      if (map.on_edge(m, n)) worst = std::max(worst, std::norm(psi[i]));
    }
  }
  return worst;
}

}  // namespace latoc
