#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "latoc/gp.hpp"
#include "latoc/states.hpp"
#include "test_helpers.hpp"

using namespace latoc;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// continuum Fourier projection of the periodized Gaussian envelope onto the
// window harmonics, by trapezoid quadrature on a grid far finer than the DVR
// one.  the grid construction agrees with this up to aliasing; the envelope's
// derivative kink at the antipode limits that to ~5e-5 at N = 21 and ~3e-6 at
// N = 81, so the tolerances below shrink with the window as a real projection
// must.
ComplexVector squeezed_quadrature(double x_c, double p_c, double xi, const Lattice1DParams& p) {
  const double sigma = xi * std::pow(p.s, -0.25);
  const int fine = 1 << 14;
  ComplexVector c = ComplexVector::Zero(p.dim());
  for (int j = 0; j < fine; ++j) {
    const double x = kTwoPi * j / fine;
    const double delta = std::remainder(x - x_c, kTwoPi);
    const Complex f =
        std::exp(-delta * delta / (4.0 * sigma * sigma)) * std::polar(1.0, p_c * x);
    for (int n = -p.n_max; n <= p.n_max; ++n) {
      c[n + p.n_max] += f * std::polar(1.0, -(p.q + n) * x);
    }
  }
  return c / c.norm();
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("plane waves occupy a single momentum slot") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const ComplexVector ground = plane_wave(0, p);
  CHECK(ground[10] == Complex{1.0, 0.0});
  CHECK(ground.norm() == 1.0);
  CHECK(plane_wave(2, p)[12] == Complex{1.0, 0.0});
  CHECK(plane_wave(-10, p)[0] == Complex{1.0, 0.0});
  CHECK_THROWS_AS(plane_wave(11, p), std::out_of_range);

  const Lattice2DParams p2{5.0, 5, 5};
  CHECK(plane_wave_2d(3, 3, p2)[96] == Complex{1.0, 0.0});
  CHECK(plane_wave_2d(0, 0, p2)[flatten(0, 0, p2)] == Complex{1.0, 0.0});
  CHECK_THROWS_AS(plane_wave_2d(6, 0, p2), std::out_of_range);
}

TEST_CASE("superpositions normalize their weights") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const ComplexVector psi = superposition({{-2, 1.0}, {0, 1.0}, {2, 1.0}}, p);
  const double w = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(psi[8] - w) < 1e-15);
  CHECK(std::abs(psi[10] - w) < 1e-15);
  CHECK(std::abs(psi[12] - w) < 1e-15);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-15);

  // repeated indices accumulate before normalizing
  const ComplexVector tall = superposition({{0, 1.0}, {0, 1.0}, {1, 1.0}}, p);
  CHECK(std::abs(std::abs(tall[10]) - 2.0 / std::sqrt(5.0)) < 1e-15);

  CHECK_THROWS_AS(superposition({}, p), std::invalid_argument);
  CHECK_THROWS_AS((superposition({{11, 1.0}}, p)), std::out_of_range);
  CHECK_THROWS_AS((superposition({{2, 1.0}, {2, -1.0}}, p)), std::invalid_argument);

  const Lattice2DParams p2{5.0, 3, 3};
  const ComplexVector psi2 = superposition_2d({{{3, 3}, 1.0}, {{-3, -3}, 1.0}}, p2);
  CHECK(std::abs(psi2[flatten(3, 3, p2)] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi2.norm() - 1.0) < 1e-15);
  CHECK_THROWS_AS((superposition_2d({{{4, 0}, 1.0}}, p2)), std::out_of_range);
}

TEST_CASE("squeezed state matches the continuum projection of its envelope") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const ComplexVector got = squeezed_state(0.7, 0.0, 1.0, p);
  const ComplexVector want = squeezed_quadrature(0.7, 0.0, 1.0, p);
  CHECK(std::abs(got.norm() - 1.0) < 1e-14);
  CHECK((got - want).cwiseAbs().maxCoeff() < 2e-4);

  const Lattice1DParams wide{5.0, 0.0, 40};
  const ComplexVector got_wide = squeezed_state(0.7, 0.0, 1.0, wide);
  const ComplexVector want_wide = squeezed_quadrature(0.7, 0.0, 1.0, wide);
  CHECK((got_wide - want_wide).cwiseAbs().maxCoeff() < 1e-5);

  // boosted and displaced variants track the same projection
  const ComplexVector moving = squeezed_state(2.0, 1.0, 0.8, wide);
  CHECK((moving - squeezed_quadrature(2.0, 1.0, 0.8, wide)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("squeezed state at the origin is real and even in momentum") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const ComplexVector psi = squeezed_state(0.0, 0.0, 1.0, p);
  CHECK(psi.imag().cwiseAbs().maxCoeff() < 1e-14);
  for (int n = 1; n <= p.n_max; ++n) {
    CHECK(std::abs(psi[p.n_max + n] - psi[p.n_max - n]) < 1e-14);
  }
  CHECK(psi[p.n_max].real() > 0.5);  // dominated by the n = 0 component
}

TEST_CASE("displacing by a grid spacing only rephases the coefficients") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const double x_c = 3.0 * kTwoPi / p.dim();
  const ComplexVector base = squeezed_state(0.0, 0.0, 1.0, p);
  const ComplexVector moved = squeezed_state(x_c, 0.0, 1.0, p);
  for (int i = 0; i < p.dim(); ++i) {
    CHECK(std::abs(std::abs(moved[i]) - std::abs(base[i])) < 1e-14);
  }
}

TEST_CASE("an integer momentum boost translates the coefficients") {
  const Lattice1DParams p{5.0, 0.0, 10};
  const ComplexVector base = squeezed_state(0.0, 0.0, 1.0, p);
  const ComplexVector boosted = squeezed_state(0.0, 2.0, 1.0, p);
  for (int n = -p.n_max + 2; n <= p.n_max; ++n) {
    CHECK(std::abs(boosted[n + p.n_max] - base[n - 2 + p.n_max]) < 1e-14);
  }
  int peak = 0;
  boosted.cwiseAbs().maxCoeff(&peak);
  CHECK(peak == 2 + p.n_max);
}

TEST_CASE("squeezed state validates its parameters") {
  CHECK_THROWS_AS((squeezed_state(0.0, 0.0, 0.0, Lattice1DParams{5.0, 0.0, 10})),
                  std::invalid_argument);
  CHECK_THROWS_AS((squeezed_state(0.0, 0.0, 1.0, Lattice1DParams{0.0, 0.0, 10})),
                  std::invalid_argument);
}

TEST_CASE("fidelity is a phase-insensitive squared overlap") {
  const Lattice1DParams p{5.0, 0.0, 5};
  const ComplexVector a = testing::random_state(p.dim(), 7);
  const ComplexVector b = testing::random_state(p.dim(), 8);
  CHECK(std::abs(fidelity(a, a) - 1.0) < 1e-14);
  CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-14);
  CHECK(std::abs(fidelity(a, std::polar(1.0, 1.234) * b) - fidelity(a, b)) < 1e-14);
  CHECK(fidelity(plane_wave(0, p), plane_wave(1, p)) == 0.0);
  CHECK_THROWS_AS(fidelity(a, testing::random_state(3, 9)), std::invalid_argument);
}

TEST_CASE("population distribution is the per-slot probability") {
  const ComplexVector psi = testing::random_state(17, 21);
  const RealVector pops = population_distribution(psi);
  CHECK(pops.minCoeff() >= 0.0);
  CHECK(std::abs(pops.sum() - 1.0) < 1e-14);
}

TEST_CASE("state specs realize against the matching lattice only") {
  const Lattice1DParams p1{5.0, 0.0, 10};
  const Lattice2DParams p2{5.0, 5, 5};

  CHECK((realize(TargetSpec{PlaneWave1DSpec{2}}, p1) - plane_wave(2, p1)).norm() == 0.0);
  CHECK((realize(TargetSpec{Superposition1DSpec{{{0, 1.0}, {2, 1.0}}}}, p1) -
         superposition({{0, 1.0}, {2, 1.0}}, p1))
            .norm() == 0.0);
  CHECK((realize(TargetSpec{Squeezed1DSpec{0.0, 0.0, 0.5}}, p1) -
         squeezed_state(0.0, 0.0, 0.5, p1))
            .norm() == 0.0);
  CHECK((realize(TargetSpec{PlaneWave2DSpec{3, 3}}, p2) - plane_wave_2d(3, 3, p2)).norm() == 0.0);
  CHECK((realize(TargetSpec{Superposition2DSpec{{{{1, 2}, 1.0}, {{-3, -1}, 1.0}}}}, p2) -
         superposition_2d({{{1, 2}, 1.0}, {{-3, -1}, 1.0}}, p2))
            .norm() == 0.0);

  CHECK_THROWS_AS((realize(TargetSpec{PlaneWave2DSpec{0, 0}}, p1)), std::invalid_argument);
  CHECK_THROWS_AS(realize(TargetSpec{Squeezed1DSpec{}}, p2), std::invalid_argument);
}

}  // TEST_SUITE
