#include <doctest.h>

#include <cmath>

#include "latoc/lattice1d.hpp"
#include "latoc/numkernel.hpp"
#include "test_helpers.hpp"

using namespace latoc;
using testing::random_control;
using testing::random_state;

TEST_SUITE("lattice1d") {

TEST_CASE("dimension and parameter validation") {
  Lattice1DParams p;
  CHECK(p.dim() == 21);
  CHECK_NOTHROW(p.validate());
  CHECK_NOTHROW(Lattice1DParams{0.0, 0.5, 1}.validate());  // s = 0 is free evolution
  CHECK_THROWS_AS((Lattice1DParams{-1.0, 0.0, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Lattice1DParams{5.0, 0.6, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Lattice1DParams{5.0, 0.0, 0}.validate()), std::invalid_argument);
}

TEST_CASE("hamiltonian entries follow the momentum-basis coupling rule") {
  const Lattice1DParams p{5.0, 0.25, 4};
  const double phi = 0.8;
  const ComplexMatrix H = hamiltonian_at(p, phi);
  CHECK(max_hermiticity_defect(H) < 1e-15);
  for (int i = 0; i < p.dim(); ++i) {
    const double n = i - p.n_max;
    CHECK(std::abs(H(i, i) - (n + p.q) * (n + p.q)) < 1e-15);
    if (i > 0) {
      CHECK(std::abs(H(i, i - 1) - (-p.s / 4.0) * std::polar(1.0, phi)) < 1e-15);
      CHECK(std::abs(H(i - 1, i) - (-p.s / 4.0) * std::polar(1.0, -phi)) < 1e-15);
    }
    if (i > 1) CHECK(std::abs(H(i, i - 2)) == 0.0);
  }
}

TEST_CASE("control derivative matches finite differences of the hamiltonian") {
  const Lattice1DParams p{5.0, -0.3, 3};
  const double phi = -1.2;
  const double h = 1e-6;
  const ComplexMatrix fd = (hamiltonian_at(p, phi + h) - hamiltonian_at(p, phi - h)) / (2.0 * h);
  const ComplexMatrix D = control_derivative_at(p, phi);
  CHECK((D - fd).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(max_hermiticity_defect(D) < 1e-15);
}

TEST_CASE("band-edge energies match an independent spectral computation") {
  // reference values from a separate dense solver; the s = 5, q = 0 ground
  // energy also agrees with the Mathieu characteristic value a_0(-5)/4
  const HermitianEig e0(hamiltonian_at(Lattice1DParams{5.0, 0.0, 10}, 0.0));
  CHECK(std::abs(e0.evals[0] - (-1.450011505212884)) < 1e-10);
  CHECK(std::abs(e0.evals[1] - 0.524865111371652) < 1e-10);
  CHECK(std::abs(e0.evals[2] - 1.862277434882301) < 1e-10);
  const HermitianEig e1(hamiltonian_at(Lattice1DParams{5.0, 0.25, 10}, 0.0));
  CHECK(std::abs(e1.evals[0] - (-1.448768776950165)) < 1e-10);
}

TEST_CASE("zero depth evolves each momentum component by its kinetic phase") {
  const Lattice1DParams p{0.0, 0.3, 5};
  const ControlGrid control = random_control(2.5, 8, 1, 1.0, 7);
  const ComplexVector psi0 = random_state(p.dim(), 19);
  const auto traj = propagate_linear(p, psi0, control);
  for (int i = 0; i < p.dim(); ++i) {
    const double n = i - p.n_max;
    const Complex expect = psi0[i] * std::polar(1.0, -(n + p.q) * (n + p.q) * control.t_f);
    CHECK(std::abs(traj.back()[i] - expect) < 1e-12);
  }
}

TEST_CASE("propagation conserves norm and matches dense rk4 integration") {
  const Lattice1DParams p{5.0, 0.25, 6};
  const ControlGrid control = random_control(1.0, 10, 1, 0.7, 99);
  const ComplexVector psi0 = random_state(p.dim(), 5);
  const auto traj = propagate_linear(p, psi0, control);
  for (const auto& psi : traj) CHECK(std::abs(psi.norm() - 1.0) < 1e-13);

  ComplexVector y = psi0;
  const int substeps = 400;
  const double h = control.dt() / substeps;
  for (int k = 0; k < control.n_steps; ++k) {
    const ComplexMatrix H = hamiltonian_at(p, control.values[0][k]);
    const auto f = [&](double, const ComplexVector& v) -> ComplexVector {
      return -kImag * (H * v);
    };
    for (int j = 0; j < substeps; ++j) y = rk4_step(f, y, 0.0, h);
  }
  CHECK((y - traj.back()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("zero-phase dynamics at q = 0 preserves parity symmetry") {
  const Lattice1DParams p{5.0, 0.0, 6};
  const ControlGrid control = make_control(3.0, 30, 1, 0.0);
  ComplexVector psi0 = ComplexVector::Zero(p.dim());
  psi0[p.n_max] = std::sqrt(0.5);
  psi0[p.n_max + 1] = 0.5;
  psi0[p.n_max - 1] = 0.5;  // symmetric under n -> -n
  const auto traj = propagate_linear(p, psi0, control);
  for (int i = 0; i < p.dim(); ++i) {
    CHECK(std::abs(traj.back()[i] - traj.back()[p.dim() - 1 - i]) < 1e-12);
  }
}

TEST_CASE("propagation validates its inputs") {
  const Lattice1DParams p{5.0, 0.0, 3};
  const ControlGrid control = make_control(1.0, 4, 1, 0.0);
  CHECK_THROWS_AS(propagate_linear(p, ComplexVector::Zero(p.dim()), control),
                  std::invalid_argument);
  CHECK_THROWS_AS(propagate_linear(p, random_state(5, 1), control), std::invalid_argument);
  const ControlGrid two_channel = make_control(1.0, 4, 2, 0.0);
  CHECK_THROWS_AS(propagate_linear(p, random_state(p.dim(), 1), two_channel),
                  std::invalid_argument);
}

}  // TEST_SUITE
