#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "latoc/control.hpp"
#include "latoc/gp.hpp"
#include "latoc/lattice1d.hpp"
#include "latoc/lattice2d.hpp"
#include "latoc/types.hpp"

namespace latoc {

// adjoint weight chi0; with 1/2 the analytic gradient is exactly dF/dphi_k
inline constexpr double kChiWeight = 0.5;

// chi(t_f) = 2 chi0 <target|psi_f> target
ComplexVector adjoint_final(const ComplexVector& target, const ComplexVector& psi_f,
                            double chi0 = kChiWeight);

struct GradientResult {
  double fidelity = 0.0;
  std::vector<Eigen::VectorXd> gradient;  // same layout as ControlGrid::values
};

// gradient of F = |<target|psi(t_f)>|^2 with respect to every step value of
// the piecewise-constant control.  these differentiate the discrete
// propagation itself (eigenbasis Frechet derivative of each step propagator),
// so they match finite differences of propagate() to roundoff rather than to
// O(dt).  the GP variant linearizes through the frozen-density step map,
// storing the forward trajectory instead of re-integrating backwards.
GradientResult gradient_linear(const Lattice1DParams& p, const ControlGrid& control,
                               const ComplexVector& psi0, const ComplexVector& target,
                               double chi0 = kChiWeight);
GradientResult gradient_gp(const GPParams& p, const ControlGrid& control,
                           const ComplexVector& psi0, const ComplexVector& target,
                           double chi0 = kChiWeight);
GradientResult gradient_2d(const Lattice2DParams& p, const ControlGrid& control,
                           const ComplexVector& psi0, const ComplexVector& target,
                           Gradient2DRule rule = Gradient2DRule::exact,
                           double chi0 = kChiWeight);

struct TwoDProblem {
  Lattice2DParams lattice;
  Gradient2DRule rule = Gradient2DRule::exact;
};

using Problem = std::variant<Lattice1DParams, GPParams, TwoDProblem>;

int problem_dim(const Problem& problem);
int problem_channels(const Problem& problem);
void validate_problem(const Problem& problem);

std::vector<ComplexVector> propagate(const Problem& problem, const ComplexVector& psi0,
                                     const ControlGrid& control);
GradientResult fidelity_and_gradient(const Problem& problem, const ControlGrid& control,
                                     const ComplexVector& psi0, const ComplexVector& target);

// central differences of the exactly-propagated fidelity; the oracle the
// analytic gradients are tested against
std::vector<Eigen::VectorXd> finite_difference_gradient(const Problem& problem,
                                                        const ControlGrid& control,
                                                        const ComplexVector& psi0,
                                                        const ComplexVector& target,
                                                        double h = 1e-6);

enum class InitKind { constant, uniform_random };

struct InitStrategy {
  InitKind kind = InitKind::uniform_random;
  double amplitude = 0.1;  // constant value, or half-width of the uniform draw
};

ControlGrid make_initial_control(double t_f, int n_steps, int channels,
                                 const InitStrategy& init, std::uint64_t seed);

struct OptimizerSettings {
  double fidelity_goal = 0.999;
  int max_iterations = 2000;
  double initial_step = 1.0;       // gradient-ascent step, adapted as it runs
  int max_halvings = 40;           // line-search backtracks before giving up
  double stall_grad_norm = 1e-10;  // below this the landscape is flat: stop
  std::uint64_t seed = 12345;      // drives the stuck-at-zero escape kicks
};

enum class Termination { goal_reached, max_iterations, stalled };
const char* to_string(Termination t);

struct OptimizationResult {
  ControlGrid control;
  double fidelity = 0.0;
  Termination termination = Termination::max_iterations;
  int iterations = 0;                    // accepted ascent steps
  std::vector<double> fidelity_trace;    // [0] is the unoptimized fidelity
  std::vector<double> grad_norm_trace;   // same length as fidelity_trace
};

// monotone conjugate ascent with a backtracking step: directions carry a
// Polak-Ribiere memory term (clamped at zero, so the scheme restarts itself),
// a candidate step is halved until the fidelity does not decrease, and a
// failed conjugate direction falls back to the raw gradient before stalling.
// the step doubles after a first-try acceptance.  channels flagged
// non-optimizable are held fixed.
OptimizationResult optimize(const Problem& problem, const ComplexVector& psi0,
                            const ComplexVector& target, const ControlGrid& control0,
                            const OptimizerSettings& settings = {});

}  // namespace latoc
