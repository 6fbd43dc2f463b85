#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "swipt_re/solvers.hpp"

namespace swipt {

WaterfillResult waterfill(const RVector& gains, double power) {
  if (!(power >= 0.0) || !std::isfinite(power))
    throw Error(ErrorCode::kInvalidArgument, "waterfill: power must be finite and >= 0");
  const Eigen::Index n = gains.size();
  WaterfillResult out{RVector::Zero(n), 0.0, 0.0};

  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (gains(i) < 0.0 || !std::isfinite(gains(i)))
      throw Error(ErrorCode::kInvalidArgument, "waterfill: gains must be finite and >= 0");
    if (gains(i) > 0.0) order.push_back(i);
  }
  if (order.empty() || power == 0.0) return out;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return gains(a) > gains(b); });

  // Largest k such that the level with the k strongest channels active
  // clears 1/h_k.
  double inv_sum = 0.0;
  double level = 0.0;
  std::size_t active = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double inv = 1.0 / gains(order[k]);
    const double candidate = (power + inv_sum + inv) / static_cast<double>(k + 1);
    if (candidate <= inv) break;
    inv_sum += inv;
    level = candidate;
    active = k + 1;
  }

  double nats = 0.0;
  for (std::size_t k = 0; k < active; ++k) {
    const Eigen::Index i = order[k];
    const double p = std::max(0.0, level - 1.0 / gains(i));
    out.powers(i) = p;
    nats += std::log1p(gains(i) * p);
  }
  out.water_level = level;
  out.rate = nats_to_bits(nats);
  return out;
}

RVector modified_waterfill(const RVector& gains, const DualPoint& dual) {
  RVector p = RVector::Zero(gains.size());
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    const double h = gains(i);
    if (h <= 0.0) continue;
    const double denom = dual.mu - dual.lambda * h;
    if (denom <= 0.0)
      throw Error(ErrorCode::kDualInfeasible, "modified_waterfill: mu <= lambda * h_i");
    p(i) = std::max(0.0, 1.0 / denom - 1.0 / h);
  }
  return p;
}

}  // namespace swipt
