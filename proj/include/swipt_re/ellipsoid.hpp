#pragma once

#include <functional>

#include "swipt_re/solvers.hpp"

namespace swipt {

/// Primal quantities of the Lagrangian maximizer at one dual point.
struct InnerEval {
  double harvested = 0.0;
  double trace = 0.0;
};

/// Two-dimensional dual problem min g(lambda, mu) over the cone
/// lambda >= 0, mu > lambda * g1. The box [0, lambda_ub] x [0, mu_ub] must
/// contain the dual optimum.
struct DualProblem {
  double g1 = 0.0;
  double q_bar = 0.0;
  double power = 0.0;
  double lambda_ub = 0.0;
  double mu_ub = 0.0;
};

struct EllipsoidOutcome {
  DualPoint dual;
  int iterations = 0;
  bool converged = false;
  InnerEval at_dual;
};

/// Central-cut ellipsoid method. The subgradient of g at (lambda, mu) is
/// (Q(S) - q_bar, P - tr S) for the inner maximizer S. Iterates outside the
/// cone get a feasibility cut. Stops when both coordinate extents of the
/// ellipsoid are <= tol and the primal residuals and complementary-slackness
/// products at the centre are <= tol.
EllipsoidOutcome minimize_dual(const DualProblem& problem,
                               const std::function<InnerEval(const DualPoint&)>& inner,
                               const SolverOptions& opts);

/// Initial bounding box from Slater-point dual bounds:
/// lambda_ub = R_max / (Q_max - q_bar), mu_ub = M h1 + lambda_ub g1.
DualProblem make_dual_problem(double r_max_nats, double q_max, double q_bar, double power,
                              int tx_antennas, double h1, double g1);

}  // namespace swipt
