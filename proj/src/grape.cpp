#include "latoc/grape.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "latoc/numkernel.hpp"

namespace latoc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// entrywise divided differences of z -> e^{-i z dt} over the spectrum:
// gamma_ab = (e^{-i w_a dt} - e^{-i w_b dt}) / (-i (w_a - w_b) dt), with the
// a = b limit e^{-i w_a dt}.  writing x = (w_a - w_b) dt this is
// e^{-i w_b dt} (e^{-i x} - 1)/(-i x); near-degenerate pairs take the series
// of (e^z - 1)/z at z = -i x so the difference never cancels catastrophically.
ComplexMatrix gamma_matrix(const Eigen::VectorXd& w, double dt) {
  const int d = static_cast<int>(w.size());
  ComplexVector phases(d);
  for (int a = 0; a < d; ++a) phases[a] = std::polar(1.0, -w[a] * dt);
  ComplexMatrix gamma(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double x = (w[a] - w[b]) * dt;
      if (std::abs(x) < 1e-3) {
        const Complex series = 1.0 + (-kImag * x) * (0.5 + (-kImag * x) * (1.0 / 6.0 +
                               (-kImag * x) * (1.0 / 24.0 + (-kImag * x) * (1.0 / 120.0))));
        gamma(a, b) = phases[b] * series;
      } else {
        gamma(a, b) = (phases[a] - phases[b]) / (-kImag * x);
      }
    }
  }
  return gamma;
}

// sensitivity matrix of one exact step: for any Hermitian direction E,
// 2 Re tr(E W) is the derivative of 2 Re <lambda_next | e^{-i (H + eps E) dt}
// psi> at eps = 0.  derived from the eigenbasis divided-difference form of
// the exponential's directional derivative.
ComplexMatrix step_sensitivity(const HermitianEig& eig, const ComplexVector& psi_k,
                               const ComplexVector& lambda_next, double dt) {
  const ComplexVector ptil = eig.evecs.adjoint() * psi_k;
  const ComplexVector ltil = eig.evecs.adjoint() * lambda_next;
  const ComplexMatrix gamma = gamma_matrix(eig.evals, dt);
  const ComplexMatrix T =
      (-kImag * dt) * gamma.transpose().cwiseProduct(ptil * ltil.adjoint());
  return eig.evecs * T * eig.evecs.adjoint();
}

// lambda_k = U_k^dag lambda_{k+1} = V e^{+i w dt} V^dag lambda_{k+1}
ComplexVector backstep(const HermitianEig& eig, const ComplexVector& lambda_next, double dt) {
  return eig.apply_propagator(lambda_next, -dt);
}

double trace_pairing(const ComplexMatrix& D, const ComplexMatrix& W) {
  // 2 Re tr(D W)
  return 2.0 * (D.transpose().cwiseProduct(W)).sum().real();
}

void check_state_pair(int dim, const ComplexVector& psi0, const ComplexVector& target,
                      const char* who) {
  if (psi0.size() != dim || target.size() != dim) {
    throw std::invalid_argument(std::string(who) + ": state dimension mismatch");
  }
  require_unit_norm(psi0, "initial state");
  require_unit_norm(target, "target state");
}

}  // namespace

ComplexVector adjoint_final(const ComplexVector& target, const ComplexVector& psi_f,
                            double chi0) {
  if (target.size() != psi_f.size()) {
    throw std::invalid_argument("adjoint_final: dimension mismatch");
  }
  return (2.0 * chi0 * target.dot(psi_f)) * target;
}

GradientResult gradient_linear(const Lattice1DParams& p, const ControlGrid& control,
                               const ComplexVector& psi0, const ComplexVector& target,
                               double chi0) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("gradient_linear: expected a single control channel");
  }
  check_state_pair(p.dim(), psi0, target, "gradient_linear");

  const ComplexMatrix kinetic = build_kinetic(p);
  const ComplexMatrix cosc = build_cos_coupling(p);
  const ComplexMatrix sinc = build_sin_coupling(p);
  const double dt = control.dt();
  const int n = control.n_steps;

  std::vector<ComplexVector> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(psi0);
  std::vector<HermitianEig> eigs;
  eigs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double phi = control.values[0][k];
    eigs.emplace_back(kinetic + std::cos(phi) * cosc + std::sin(phi) * sinc);
    states.push_back(eigs.back().apply_propagator(states.back(), dt));
  }

  GradientResult out;
  out.fidelity = std::norm(target.dot(states.back()));
  out.gradient = {Eigen::VectorXd::Zero(n)};

  ComplexVector lambda = adjoint_final(target, states.back(), chi0);
  for (int k = n - 1; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const ComplexMatrix W = step_sensitivity(eigs[ku], states[ku], lambda, dt);
    const double phi = control.values[0][k];
    const ComplexMatrix D = -std::sin(phi) * cosc + std::cos(phi) * sinc;
    out.gradient[0][k] = trace_pairing(D, W);
    lambda = backstep(eigs[ku], lambda, dt);
  }
  return out;
}

GradientResult gradient_gp(const GPParams& p, const ControlGrid& control,
                           const ComplexVector& psi0, const ComplexVector& target,
                           double chi0) {
  p.validate();
  control.validate();
  if (control.channels() != 1) {
    throw std::invalid_argument("gradient_gp: expected a single control channel");
  }
  check_state_pair(p.lattice.dim(), psi0, target, "gradient_gp");

  const DVRTransform t(p.lattice);
  const ComplexMatrix kinetic = build_kinetic(p.lattice);
  const ComplexMatrix cosc = build_cos_coupling(p.lattice);
  const ComplexMatrix sinc = build_sin_coupling(p.lattice);
  const double dt = control.dt();
  const int n = control.n_steps;
  const double grid_norm = static_cast<double>(t.points()) / kTwoPi;

  std::vector<ComplexVector> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(psi0);
  std::vector<HermitianEig> eigs;
  eigs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double phi = control.values[0][k];
    const RealVector G = density_dvr(t, states.back());
    eigs.emplace_back(kinetic + std::cos(phi) * cosc + std::sin(phi) * sinc +
                      p.beta * (t.R.adjoint() * G.asDiagonal() * t.R));
    states.push_back(eigs.back().apply_propagator(states.back(), dt));
  }

  GradientResult out;
  out.fidelity = std::norm(target.dot(states.back()));
  out.gradient = {Eigen::VectorXd::Zero(n)};

  ComplexVector lambda = adjoint_final(target, states.back(), chi0);
  for (int k = n - 1; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const ComplexMatrix W = step_sensitivity(eigs[ku], states[ku], lambda, dt);
    const double phi = control.values[0][k];
    const ComplexMatrix D = -std::sin(phi) * cosc + std::cos(phi) * sinc;
    out.gradient[0][k] = trace_pairing(D, W);
    lambda = backstep(eigs[ku], lambda, dt);

    // the step Hamiltonian also depends on psi_k through the frozen density;
    // d(beta R^dag diag(G) R) routed through W adds, with u = R psi_k and
    // m = diag(R W R^dag), the term R^dag [(N/2pi) 2 beta Re(m) . u] to the
    // running adjoint
    const ComplexVector u = t.R * states[ku];
    const ComplexMatrix RW = t.R * W;
    const ComplexVector m = RW.cwiseProduct(t.R.conjugate()).rowwise().sum();
    const RealVector r = 2.0 * p.beta * m.real();
    const ComplexVector v = grid_norm * r.cast<Complex>().cwiseProduct(u);
    lambda += t.R.adjoint() * v;
  }
  return out;
}

GradientResult gradient_2d(const Lattice2DParams& p, const ControlGrid& control,
                           const ComplexVector& psi0, const ComplexVector& target,
                           Gradient2DRule rule, double chi0) {
  p.validate();
  control.validate();
  if (control.channels() != 3) {
    throw std::invalid_argument("gradient_2d: expected three control channels");
  }
  check_state_pair(p.dim(), psi0, target, "gradient_2d");

  const ComplexMatrix kinetic = build_kinetic2d(p);
  const ShiftOperators ops = build_shift_operators(p);
  const double dt = control.dt();
  const int n = control.n_steps;

  std::vector<ComplexVector> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(psi0);
  std::vector<HermitianEig> eigs;
  eigs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    ComplexMatrix H = kinetic;
    for (int l = 0; l < 3; ++l) {
      const Complex e = std::polar(1.0, control.values[static_cast<std::size_t>(l)][k]);
      H += e * ops.plus[static_cast<std::size_t>(l)] +
           std::conj(e) * ops.minus[static_cast<std::size_t>(l)];
    }
    eigs.emplace_back(H);
    states.push_back(eigs.back().apply_propagator(states.back(), dt));
  }

  GradientResult out;
  out.fidelity = std::norm(target.dot(states.back()));
  out.gradient.assign(3, Eigen::VectorXd::Zero(n));

  ComplexVector lambda = adjoint_final(target, states.back(), chi0);
  for (int k = n - 1; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const ComplexMatrix W = step_sensitivity(eigs[ku], states[ku], lambda, dt);
    for (int l = 0; l < 3; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      ComplexMatrix D;
      if (rule == Gradient2DRule::phase_free) {
        D = kImag * (ops.plus[lu] - ops.minus[lu]);
      } else {
        const Complex e = std::polar(1.0, control.values[lu][k]);
        D = kImag * e * ops.plus[lu] - kImag * std::conj(e) * ops.minus[lu];
      }
      out.gradient[lu][k] = trace_pairing(D, W);
    }
    lambda = backstep(eigs[ku], lambda, dt);
  }
  return out;
}

int problem_dim(const Problem& problem) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Lattice1DParams>) return p.dim();
        else if constexpr (std::is_same_v<T, GPParams>) return p.lattice.dim();
        else return p.lattice.dim();
      },
      problem);
}

int problem_channels(const Problem& problem) {
  return std::holds_alternative<TwoDProblem>(problem) ? 3 : 1;
}

void validate_problem(const Problem& problem) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TwoDProblem>) p.lattice.validate();
        else p.validate();
      },
      problem);
}

std::vector<ComplexVector> propagate(const Problem& problem, const ComplexVector& psi0,
                                     const ControlGrid& control) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Lattice1DParams>) {
          return propagate_linear(p, psi0, control);
        } else if constexpr (std::is_same_v<T, GPParams>) {
          return propagate_gp(p, psi0, control);
        } else {
          return propagate_2d(p.lattice, psi0, control);
        }
      },
      problem);
}

GradientResult fidelity_and_gradient(const Problem& problem, const ControlGrid& control,
                                     const ComplexVector& psi0, const ComplexVector& target) {
  return std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Lattice1DParams>) {
          return gradient_linear(p, control, psi0, target);
        } else if constexpr (std::is_same_v<T, GPParams>) {
          return gradient_gp(p, control, psi0, target);
        } else {
          return gradient_2d(p.lattice, control, psi0, target, p.rule);
        }
      },
      problem);
}

std::vector<Eigen::VectorXd> finite_difference_gradient(const Problem& problem,
                                                        const ControlGrid& control,
                                                        const ComplexVector& psi0,
                                                        const ComplexVector& target,
                                                        double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite differences: step must be positive");
  control.validate();
  std::vector<Eigen::VectorXd> grad(static_cast<std::size_t>(control.channels()),
                                    Eigen::VectorXd::Zero(control.n_steps));
  ControlGrid probe = control;
  for (int c = 0; c < control.channels(); ++c) {
    for (int k = 0; k < control.n_steps; ++k) {
      const auto cu = static_cast<std::size_t>(c);
      const double saved = probe.values[cu][k];
      probe.values[cu][k] = saved + h;
      const double f_plus = std::norm(target.dot(propagate(problem, psi0, probe).back()));
      probe.values[cu][k] = saved - h;
      const double f_minus = std::norm(target.dot(propagate(problem, psi0, probe).back()));
      probe.values[cu][k] = saved;
      grad[cu][k] = (f_plus - f_minus) / (2.0 * h);
    }
  }
  return grad;
}

ControlGrid make_initial_control(double t_f, int n_steps, int channels,
                                 const InitStrategy& init, std::uint64_t seed) {
  if (init.kind == InitKind::constant) {
    return make_control(t_f, n_steps, channels, init.amplitude);
  }
  ControlGrid grid = make_control(t_f, n_steps, channels, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-init.amplitude, init.amplitude);
  for (auto& channel : grid.values) {
    for (int k = 0; k < n_steps; ++k) channel[k] = dist(rng);
  }
  return grid;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::goal_reached: return "goal_reached";
    case Termination::max_iterations: return "max_iterations";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

// forward pass only, final overlap squared; used by the line search
double fidelity_only(const Problem& problem, const ControlGrid& control,
                     const ComplexVector& psi0, const ComplexVector& target) {
  return std::norm(target.dot(propagate(problem, psi0, control).back()));
}

double masked_norm(const std::vector<Eigen::VectorXd>& g, const ControlGrid& control) {
  double sq = 0.0;
  for (int c = 0; c < control.channels(); ++c) {
    if (control.channel_optimizable(c)) sq += g[static_cast<std::size_t>(c)].squaredNorm();
  }
  return std::sqrt(sq);
}

double masked_dot(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b,
                  const ControlGrid& control) {
  double sum = 0.0;
  for (int c = 0; c < control.channels(); ++c) {
    if (control.channel_optimizable(c)) {
      sum += a[static_cast<std::size_t>(c)].dot(b[static_cast<std::size_t>(c)]);
    }
  }
  return sum;
}

ControlGrid stepped(const ControlGrid& control, const std::vector<Eigen::VectorXd>& g,
                    double step) {
  ControlGrid next = control;
  for (int c = 0; c < control.channels(); ++c) {
    if (!control.channel_optimizable(c)) continue;
    next.values[static_cast<std::size_t>(c)] += step * g[static_cast<std::size_t>(c)];
  }
  return next;
}

}  // namespace

OptimizationResult optimize(const Problem& problem, const ComplexVector& psi0,
                            const ComplexVector& target, const ControlGrid& control0,
                            const OptimizerSettings& settings) {
  validate_problem(problem);
  control0.validate();
  if (control0.channels() != problem_channels(problem)) {
    throw std::invalid_argument("optimize: control channel count does not match the problem");
  }
  check_state_pair(problem_dim(problem), psi0, target, "optimize");
  if (settings.max_iterations < 0) throw std::invalid_argument("optimize: negative iteration cap");

  OptimizationResult res;
  res.control = control0;

  GradientResult cur = fidelity_and_gradient(problem, res.control, psi0, target);
  res.fidelity = cur.fidelity;
  res.fidelity_trace.push_back(cur.fidelity);
  res.grad_norm_trace.push_back(masked_norm(cur.gradient, res.control));

  std::mt19937_64 rng(settings.seed);
  std::uniform_real_distribution<double> kick(-0.05, 0.05);
  int kicks_used = 0;
  double step = settings.initial_step;
  // limited-memory curvature history: s is the accepted control change, y the
  // gradient change in descent convention, rho = 1/<y,s>
  struct CurvaturePair {
    std::vector<Eigen::VectorXd> s, y;
    double rho = 0.0;
  };
  std::deque<CurvaturePair> memory;
  constexpr std::size_t kMemoryDepth = 8;

  while (true) {
    if (res.fidelity >= settings.fidelity_goal) {
      res.termination = Termination::goal_reached;
      return res;
    }
    if (res.iterations >= settings.max_iterations) {
      res.termination = Termination::max_iterations;
      return res;
    }

    const double gnorm = masked_norm(cur.gradient, res.control);
    if (gnorm < settings.stall_grad_norm) {
      // a flat point far from the goal is usually a symmetry-protected zero;
      // a small random kick breaks it
      if (res.fidelity < 0.1 && kicks_used < 5) {
        ++kicks_used;
        for (int c = 0; c < res.control.channels(); ++c) {
          if (!res.control.channel_optimizable(c)) continue;
          auto& channel = res.control.values[static_cast<std::size_t>(c)];
          for (int k = 0; k < res.control.n_steps; ++k) channel[k] += kick(rng);
        }
        cur = fidelity_and_gradient(problem, res.control, psi0, target);
        res.fidelity = cur.fidelity;
        res.fidelity_trace.push_back(cur.fidelity);
        res.grad_norm_trace.push_back(masked_norm(cur.gradient, res.control));
        have_direction = false;  // the kick moved the point: old direction is stale
        continue;
      }
      res.termination = Termination::stalled;
      return res;
    }

    // conjugate ascent direction with a Polak-Ribiere memory term; the max(0, .)
    // clamp restarts automatically when successive gradients decorrelate, and a
    // direction that stops pointing uphill is replaced by the raw gradient
    if (have_direction) {
      const double prev_sq = masked_dot(prev_gradient, prev_gradient, res.control);
      double beta = 0.0;
      if (prev_sq > 0.0) {
        beta = std::max(0.0, (masked_dot(cur.gradient, cur.gradient, res.control) -
                              masked_dot(cur.gradient, prev_gradient, res.control)) /
                                 prev_sq);
      }
      for (std::size_t c = 0; c < direction.size(); ++c) {
        direction[c] = cur.gradient[c] + beta * direction[c];
      }
      if (masked_dot(direction, cur.gradient, res.control) <= 0.0) direction = cur.gradient;
    } else {
      direction = cur.gradient;
      have_direction = true;
    }

    // line search: halve the step until the fidelity does not decrease; if the
    // conjugate direction exhausts its budget, retry once along the gradient.
    // each attempt restarts from the step the iteration began with, the
    // accepted step carries to the next iteration, and halving stops once the
    // displacement is below roundoff (a smaller step cannot change anything)
    bool accepted = false;
    ControlGrid trial;
    GradientResult at_trial;
    int halvings = 0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const std::vector<Eigen::VectorXd>& d = attempt == 0 ? direction : cur.gradient;
      const double dnorm = masked_norm(d, res.control);
      double local = step;
      trial = stepped(res.control, d, local);
      // gradient computed immediately since first-try acceptance is common
      at_trial = fidelity_and_gradient(problem, trial, psi0, target);
      double f_trial = at_trial.fidelity;
      halvings = 0;
      while (f_trial < res.fidelity && halvings < settings.max_halvings &&
             local * dnorm > 1e-13) {
        ++halvings;
        local *= 0.5;
        trial = stepped(res.control, d, local);
        f_trial = fidelity_only(problem, trial, psi0, target);
      }
      if (f_trial >= res.fidelity) {
        if (halvings > 0) at_trial = fidelity_and_gradient(problem, trial, psi0, target);
        accepted = true;
        step = local;
        if (attempt == 1) direction = d;  // conjugate memory failed: restart from here
      }
    }
    if (!accepted) {
      res.termination = Termination::stalled;
      return res;
    }

    prev_gradient = cur.gradient;
    res.control = std::move(trial);
    cur = std::move(at_trial);
    res.fidelity = cur.fidelity;
    res.iterations += 1;
    res.fidelity_trace.push_back(cur.fidelity);
    res.grad_norm_trace.push_back(masked_norm(cur.gradient, res.control));
    if (halvings == 0) step *= 1.5;
  }
}

}  // namespace latoc
