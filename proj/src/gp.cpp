#include "latoc/gp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latoc/numkernel.hpp"

namespace latoc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void GPParams::validate() const {
  lattice.validate();
  if (!std::isfinite(beta)) throw std::invalid_argument("gp: beta must be finite");
}

DVRTransform::DVRTransform(const Lattice1DParams& p) {
  p.validate();
  const int N = p.dim();
  grid.resize(N);
  R.resize(N, N);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N));
  for (int j = 0; j < N; ++j) {
    grid[j] = kTwoPi * j / N;
    for (int i = 0; i < N; ++i) {
      const double n = static_cast<double>(i - p.n_max);
      // reduce the phase argument mod 2 pi before sin/cos so unitarity holds
      // to near machine precision even for large j * n products
      const double turns = std::fmod((p.q + n) * j / N, 1.0);
      R(j, i) = inv_sqrt_n * std::polar(1.0, kTwoPi * turns);
    }
  }
}

RealVector density_dvr(const DVRTransform& t, const ComplexVector& psi) {
  if (psi.size() != t.R.cols()) throw std::invalid_argument("density_dvr: dimension mismatch");
  const ComplexVector samples = t.R * psi;
  return (static_cast<double>(t.points()) / kTwoPi) * samples.cwiseAbs2();
}

RealVector overlap_imag_dvr(const DVRTransform& t, const ComplexVector& chi,
                            const ComplexVector& psi) {
  if (psi.size() != t.R.cols() || chi.size() != t.R.cols()) {
    throw std::invalid_argument("overlap_imag_dvr: dimension mismatch");
  }
  const ComplexVector a = t.R * chi;
  const ComplexVector b = t.R * psi;
  return (static_cast<double>(t.points()) / kTwoPi) *
         a.conjugate().cwiseProduct(b).imag();
}

ComplexMatrix gp_hamiltonian(const GPParams& p, const ComplexVector& psi, double phi) {
  p.validate();
  const DVRTransform t(p.lattice);
  const RealVector G = density_dvr(t, psi);
  return hamiltonian_at(p.lattice, phi) +
         p.beta * (t.R.adjoint() * G.asDiagonal() * t.R);
}

double gp_energy(const GPParams& p, const ComplexVector& psi, double phi) {
  p.validate();
  const DVRTransform t(p.lattice);
  const RealVector G = density_dvr(t, psi);
  const double linear = std::real(Complex(psi.dot(hamiltonian_at(p.lattice, phi) * psi)));
  const double quartic = 0.5 * p.beta * (kTwoPi / t.points()) * G.squaredNorm();
  return linear + quartic;
}

std::vector<ComplexVector> propagate_gp(const GPParams& p, const ComplexVector& psi0,
                                        const ControlGrid& control) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("propagate_gp: expected a single control channel");
  }
  if (psi0.size() != p.lattice.dim()) {
    throw std::invalid_argument("propagate_gp: state dimension mismatch");
  }
  require_unit_norm(psi0, "propagate_gp initial state");

  const DVRTransform t(p.lattice);
  const ComplexMatrix kinetic = build_kinetic(p.lattice);
  const ComplexMatrix cosc = build_cos_coupling(p.lattice);
  const ComplexMatrix sinc = build_sin_coupling(p.lattice);
  const double dt = control.dt();

  std::vector<ComplexVector> traj;
  traj.reserve(static_cast<std::size_t>(control.n_steps) + 1);
  traj.push_back(psi0);
  for (int k = 0; k < control.n_steps; ++k) {
    const double phi = control.values[0][k];
    const RealVector G = density_dvr(t, traj.back());
    const ComplexMatrix H = kinetic + std::cos(phi) * cosc + std::sin(phi) * sinc +
                            p.beta * (t.R.adjoint() * G.asDiagonal() * t.R);
    const HermitianEig eig(H);
    traj.push_back(eig.apply_propagator(traj.back(), dt));
  }
  return traj;
}

std::vector<ComplexVector> propagate_gp_rk4(const GPParams& p, const ComplexVector& psi0,
                                            const ControlGrid& control, int n_steps_rk4) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("propagate_gp_rk4: expected a single control channel");
  }
  if (psi0.size() != p.lattice.dim()) {
    throw std::invalid_argument("propagate_gp_rk4: state dimension mismatch");
  }
  if (n_steps_rk4 <= 0 || n_steps_rk4 % control.n_steps != 0) {
    throw std::invalid_argument(
        "propagate_gp_rk4: n_steps_rk4 must be a positive multiple of control.n_steps");
  }
  require_unit_norm(psi0, "propagate_gp_rk4 initial state");

  const int d = p.lattice.dim();
  const int n_max = p.lattice.n_max;
  const double s4 = p.lattice.s / 4.0;
  const double q = p.lattice.q;
  const double beta_norm = p.beta / kTwoPi;

  // i dc_n/dt = (n+q)^2 c_n - (s/4)(e^{i phi} c_{n-1} + e^{-i phi} c_{n+1})
  //           + (beta/2pi) sum_u A_u c_{n-u},  A_u = sum_m conj(c_m) c_{m+u};
  // the cubic sum is the convolution form of beta |psi(x)|^2 psi(x) with
  // out-of-window components dropped
  const auto rhs_at = [&](double phi) {
    const Complex hop_left = -s4 * std::polar(1.0, phi);    // couples to c_{n-1}
    const Complex hop_right = -s4 * std::polar(1.0, -phi);  // couples to c_{n+1}
    return [=](double /*t*/, const ComplexVector& c) -> ComplexVector {
      ComplexVector acorr = ComplexVector::Zero(2 * d - 1);  // index u + (d-1)
      for (int u = -(d - 1); u <= d - 1; ++u) {
        Complex a{0.0, 0.0};
        const int m_lo = std::max(0, -u);
        const int m_hi = std::min(d - 1, d - 1 - u);
        for (int m = m_lo; m <= m_hi; ++m) a += std::conj(c[m]) * c[m + u];
        acorr[u + d - 1] = a;
      }
      ComplexVector out(d);
      for (int i = 0; i < d; ++i) {
        const double n = static_cast<double>(i - n_max);
        Complex v = (n + q) * (n + q) * c[i];
        if (i > 0) v += hop_left * c[i - 1];
        if (i + 1 < d) v += hop_right * c[i + 1];
        Complex cubic{0.0, 0.0};
        for (int u = -(d - 1); u <= d - 1; ++u) {
          const int src = i - u;
          if (src >= 0 && src < d) cubic += acorr[u + d - 1] * c[src];
        }
        v += beta_norm * cubic;
        out[i] = -kImag * v;
      }
      return out;
    };
  };

  const int substeps = n_steps_rk4 / control.n_steps;
  const double h = control.t_f / n_steps_rk4;

  std::vector<ComplexVector> traj;
  traj.reserve(static_cast<std::size_t>(control.n_steps) + 1);
  traj.push_back(psi0);
  double t = 0.0;
  for (int k = 0; k < control.n_steps; ++k) {
    const auto f = rhs_at(control.values[0][k]);
    ComplexVector y = traj.back();
    for (int j = 0; j < substeps; ++j) {
      y = rk4_step(f, y, t, h);
      t += h;
    }
    traj.push_back(std::move(y));
  }
  return traj;
}

std::pair<std::vector<ComplexVector>, std::vector<ComplexVector>> backward_extended(
    const GPParams& p, const ComplexVector& psi_f, const ComplexVector& chi_f,
    const ControlGrid& control) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("backward_extended: expected a single control channel");
  }
  const int d = p.lattice.dim();
  if (psi_f.size() != d || chi_f.size() != d) {
    throw std::invalid_argument("backward_extended: state dimension mismatch");
  }

  const DVRTransform t(p.lattice);
  const ComplexMatrix kinetic = build_kinetic(p.lattice);
  const ComplexMatrix cosc = build_cos_coupling(p.lattice);
  const ComplexMatrix sinc = build_sin_coupling(p.lattice);
  const double dt = control.dt();
  const std::size_t n = static_cast<std::size_t>(control.n_steps);

  std::vector<ComplexVector> psi_traj(n + 1);
  std::vector<ComplexVector> chi_traj(n + 1);
  psi_traj[n] = psi_f;
  chi_traj[n] = chi_f;

  for (int k = control.n_steps - 1; k >= 0; --k) {
    const ComplexVector& psi_next = psi_traj[static_cast<std::size_t>(k) + 1];
    const ComplexVector& chi_next = chi_traj[static_cast<std::size_t>(k) + 1];
    const double phi = control.values[0][k];

    const RealVector G = density_dvr(t, psi_next);
    const RealVector I = overlap_imag_dvr(t, chi_next, psi_next);
    const ComplexMatrix H = kinetic + std::cos(phi) * cosc + std::sin(phi) * sinc +
                            p.beta * (t.R.adjoint() * G.asDiagonal() * t.R);
    const ComplexMatrix coupling =
        -2.0 * kImag * p.beta * (t.R.adjoint() * I.asDiagonal() * t.R);

    ComplexMatrix M = ComplexMatrix::Zero(2 * d, 2 * d);
    M.topLeftCorner(d, d) = H;
    M.bottomRightCorner(d, d) = H;
    M.bottomLeftCorner(d, d) = coupling;

    ComplexVector stacked(2 * d);
    stacked.head(d) = psi_next;
    stacked.tail(d) = chi_next;
    // the forward step applies exp(-i dt M); inverting it walks back one step
    const ComplexVector earlier = general_expm(kImag * dt * M) * stacked;
    psi_traj[static_cast<std::size_t>(k)] = earlier.head(d);
    chi_traj[static_cast<std::size_t>(k)] = earlier.tail(d);
  }
  return {std::move(psi_traj), std::move(chi_traj)};
}

}  // namespace latoc
