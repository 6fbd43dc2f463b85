#include "swipt_re/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swipt {
namespace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Central cut keeping {z : a^T (z - c) <= 0}. Returns false when the
// ellipsoid has numerically collapsed along `a`.
bool cut(const Vec2& a, Vec2& centre, Mat2& shape) {
  constexpr double n = 2.0;
  const Vec2 ea = shape * a;
  const double denom = a.dot(ea);
  if (!(denom > 0.0) || !std::isfinite(denom)) return false;
  const Vec2 b = ea / std::sqrt(denom);
  centre -= b / (n + 1.0);
  shape = (n * n / (n * n - 1.0)) * (shape - (2.0 / (n + 1.0)) * b * b.transpose());
  shape = 0.5 * (shape + shape.transpose()).eval();
  return true;
}

}  // namespace

bool dual_feasible(const DualPoint& d, double g1) {
  if (!(d.lambda >= 0.0) || !std::isfinite(d.lambda) || !std::isfinite(d.mu)) return false;
  const double floor = d.lambda * g1;
  return d.mu - floor > kDualFeasMargin * std::max(1.0, floor);
}

DualProblem make_dual_problem(double r_max_nats, double q_max, double q_bar, double power,
                              int tx_antennas, double h1, double g1) {
  DualProblem p;
  p.g1 = g1;
  p.q_bar = q_bar;
  p.power = power;
  const double gap = std::max(q_max - q_bar, 1e-12 * std::max(q_max, 1e-300));
  p.lambda_ub = std::max(r_max_nats, 1e-12) / gap;
  p.mu_ub = tx_antennas * h1 + p.lambda_ub * g1;
  return p;
}

EllipsoidOutcome minimize_dual(const DualProblem& problem,
                               const std::function<InnerEval(const DualPoint&)>& inner,
                               const SolverOptions& opts) {
  const double g1 = problem.g1;
  Vec2 centre(g1 > 0.0 ? 0.5 / g1 : 0.0, 1.0);

  // Axis-aligned ellipse around the centre that contains the bounding box.
  const double reach_l = std::max(centre(0), problem.lambda_ub - centre(0));
  const double reach_m = std::max(centre(1), problem.mu_ub - centre(1));
  Mat2 shape = Mat2::Zero();
  shape(0, 0) = 2.0 * 1.0201 * reach_l * reach_l;
  shape(1, 1) = 2.0 * 1.0201 * reach_m * reach_m;

  EllipsoidOutcome best;
  double best_merit = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const DualPoint d{centre(0), centre(1)};
    if (d.lambda < 0.0) {
      if (!cut(Vec2(-1.0, 0.0), centre, shape)) break;
      continue;
    }
    if (!dual_feasible(d, g1)) {
      if (!cut(Vec2(g1, -1.0), centre, shape)) break;
      continue;
    }

    const InnerEval ev = inner(d);
    const double energy_gap = ev.harvested - problem.q_bar;
    const double power_gap = problem.power - ev.trace;
    const double violation = std::max({0.0, -energy_gap, -power_gap});
    const double merit = std::max({violation, std::abs(d.lambda * energy_gap),
                                   std::abs(d.mu * power_gap)});
    if (merit < best_merit) {
      best_merit = merit;
      best.dual = d;
      best.iterations = it;
      best.at_dual = ev;
    }

    const bool small = std::sqrt(shape(0, 0)) <= opts.tol && std::sqrt(shape(1, 1)) <= opts.tol;
    if (merit <= opts.tol && (small || merit == 0.0)) {
      best.dual = d;
      best.at_dual = ev;
      best.iterations = it;
      best.converged = true;
      return best;
    }

    const Vec2 subgrad(energy_gap, power_gap);
    if (subgrad.squaredNorm() == 0.0) break;
    if (!cut(subgrad, centre, shape)) break;
    best.iterations = it;
  }
  best.converged = best_merit <= opts.tol;
  return best;
}

}  // namespace swipt
