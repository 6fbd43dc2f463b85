#include "swipt_re/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swipt_re/random.hpp"

namespace swipt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_common(double power, double q_bar, double resolution) {
  if (!(power > 0.0)) throw Error(ErrorCode::kInvalidArgument, "oracle: power must be > 0");
  if (!(q_bar >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "oracle: q_bar must be >= 0");
  if (!(resolution > 0.0 && resolution <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "oracle: resolution must lie in (0, 1]");
}

// Euclidean projection of x onto {y >= 0, sum y = total}.
RVector project_simplex(const RVector& x, double total) {
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - total) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (x.array() - theta).max(0.0);
}

CMatrix project_spectraplex(const CMatrix& s, double total) {
  const HermitianEig eig = hermitian_eig(s);
  const RVector vals = project_simplex(eig.values, total);
  CMatrix out = eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

struct AscentProblem {
  CMatrix h;
  CMatrix ggram;
  double power;
};

double objective(const AscentProblem& pb, const CMatrix& s, double price) {
  return log_det_nats(pb.h, s) + price * harvest_raw(pb.ggram, s);
}

// Projected gradient ascent with backtracking for R(S) + price * Q(S).
CMatrix ascend(const AscentProblem& pb, CMatrix s, double price, int iterations) {
  const Eigen::Index n = pb.h.rows();
  double step = 1.0;
  double f = objective(pb, s, price);
  for (int it = 0; it < iterations; ++it) {
    const CMatrix k = CMatrix::Identity(n, n) + pb.h * s * pb.h.adjoint();
    const CMatrix grad = pb.h.adjoint() * k.llt().solve(pb.h) + price * pb.ggram;
    CMatrix next;
    double f_next = kNegInf;
    for (int bt = 0; bt < 60; ++bt) {
      next = project_spectraplex(s + step * grad, pb.power);
      f_next = objective(pb, next, price);
      const double lin = (grad.cwiseProduct((next - s).conjugate())).sum().real();
      const double dist = (next - s).squaredNorm();
      if (f_next >= f + lin - dist / (2.0 * step)) break;
      step *= 0.5;
    }
    const double moved = (next - s).norm();
    s = std::move(next);
    const double gain = f_next - f;
    f = f_next;
    step *= 2.0;
    if (moved < 1e-13 * std::max(1.0, pb.power) || std::abs(gain) < 1e-15) break;
  }
  return s;
}

}  // namespace

OracleResult grid_search_p3_diag(const RVector& h_diag, const RVector& g_diag, double power,
                                 double q_bar, double resolution) {
  check_common(power, q_bar, resolution);
  if (h_diag.size() != g_diag.size() || h_diag.size() == 0)
    throw Error(ErrorCode::kDimensionMismatch, "grid_search_p3_diag: diagonals must match");
  const int t = static_cast<int>(h_diag.size());
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  const double unit = power / steps;
  const RVector hg = h_diag.array().square();
  const RVector gg = g_diag.array().square();
  const double q_slack = 1e-12 * std::max(1.0, q_bar);

  std::vector<int> counts(t, 0);
  double best = kNegInf;
  std::vector<int> best_counts;
  std::int64_t evaluated = 0;

  // Odometer over the first t-1 coordinates with sum <= steps.
  auto evaluate = [&] {
    int used = 0;
    for (int i = 0; i + 1 < t; ++i) used += counts[i];
    counts[t - 1] = steps - used;
    double rate = 0.0;
    double harvest = 0.0;
    for (int i = 0; i < t; ++i) {
      const double p = counts[i] * unit;
      rate += std::log2(1.0 + hg(i) * p);
      harvest += gg(i) * p;
    }
    ++evaluated;
    if (harvest + q_slack >= q_bar && rate > best) {
      best = rate;
      best_counts = counts;
    }
  };

  if (t == 1) {
    evaluate();
  } else {
    while (true) {
      evaluate();
      int pos = t - 2;
      while (pos >= 0) {
        int used = 0;
        for (int i = 0; i + 1 < t; ++i) used += counts[i];
        if (used < steps) {
          ++counts[pos];
          break;
        }
        counts[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }

  if (best_counts.empty())
    throw Error(ErrorCode::kInfeasible, "grid_search_p3_diag: no grid point meets q_bar");
  RVector p(t);
  for (int i = 0; i < t; ++i) p(i) = best_counts[i] * unit;
  CMatrix s = CMatrix::Zero(t, t);
  s.diagonal() = p.cast<Complex>();
  return OracleResult{best, TransmitCovariance::make(s, power), evaluated, resolution};
}

OracleResult grid_search_p3_real2x2(const Eigen::Matrix2d& h, const Eigen::Matrix2d& g,
                                    double power, double q_bar, double resolution) {
  check_common(power, q_bar, resolution);
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  const Eigen::Matrix2d ggram = g.transpose() * g;
  const double q_slack = 1e-12 * std::max(1.0, q_bar);
  double best = kNegInf;
  Eigen::Matrix2d best_s = Eigen::Matrix2d::Zero();
  std::int64_t evaluated = 0;

  for (int i = 0; i <= steps; ++i) {
    const double a = power * i / steps;
    const double b = power - a;
    const double c_max = std::sqrt(std::max(0.0, a * b));
    const int c_steps = c_max > 0.0 ? 2 * steps : 0;
    for (int j = 0; j <= c_steps; ++j) {
      const double c = c_steps == 0 ? 0.0 : c_max * (2.0 * j / c_steps - 1.0);
      Eigen::Matrix2d s;
      s << a, c, c, b;
      ++evaluated;
      const double harvest = (ggram.cwiseProduct(s)).sum();
      if (harvest + q_slack < q_bar) continue;
      const Eigen::Matrix2d k = Eigen::Matrix2d::Identity() + h * s * h.transpose();
      const double rate = std::log2(k.determinant());
      if (rate > best) {
        best = rate;
        best_s = s;
      }
    }
  }
  if (best == kNegInf)
    throw Error(ErrorCode::kInfeasible, "grid_search_p3_real2x2: no grid point meets q_bar");
  return OracleResult{best, TransmitCovariance::make(best_s.cast<Complex>(), power), evaluated,
                      resolution};
}

OracleResult random_rank_search_p1(const CMatrix& g, double power, std::int64_t n_samples,
                                   std::uint64_t seed, const std::optional<CVector>& injected) {
  if (n_samples < 1) throw Error(ErrorCode::kInvalidArgument, "random_rank_search_p1: n_samples >= 1");
  if (!(power > 0.0)) throw Error(ErrorCode::kInvalidArgument, "random_rank_search_p1: power > 0");
  const Eigen::Index m = g.cols();
  GaussianSource rng(seed);
  double best = kNegInf;
  CVector best_v = CVector::Zero(m);
  std::int64_t evaluated = 0;

  auto consider = [&](const CVector& v) {
    const double val = power * (g * v).squaredNorm();
    ++evaluated;
    if (val > best) {
      best = val;
      best_v = v;
    }
  };

  if (injected) {
    if (injected->size() != m)
      throw Error(ErrorCode::kDimensionMismatch, "random_rank_search_p1: injected vector size");
    consider(injected->normalized());
  }
  CVector v(m);
  for (std::int64_t k = evaluated; k < n_samples; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.next_complex(1.0);
    const double nv = v.norm();
    if (nv == 0.0) continue;
    consider(v / nv);
  }
  return OracleResult{best, TransmitCovariance::make(power * best_v * best_v.adjoint(), power),
                      evaluated, 0.0};
}

OracleResult projected_ascent_p3(const ChannelPair& channels, double power, double q_bar,
                                 int n_starts, std::uint64_t seed) {
  if (!(power > 0.0)) throw Error(ErrorCode::kInvalidArgument, "projected_ascent_p3: power > 0");
  if (n_starts < 1) throw Error(ErrorCode::kInvalidArgument, "projected_ascent_p3: n_starts >= 1");
  const AscentProblem pb{channels.h(), channels.g().adjoint() * channels.g(), power};
  const Eigen::Index m = channels.tx_antennas();
  const double q_max = channels.g1() * power;
  if (q_bar > q_max * (1.0 + 1e-12))
    throw Error(ErrorCode::kInfeasible, "projected_ascent_p3: q_bar exceeds Q_max");

  const CVector v1 = channels.g_svd().v.col(0);
  const CMatrix s_eh = power * v1 * v1.adjoint();
  GaussianSource rng(seed);
  constexpr int kIters = 400;

  double best = kNegInf;
  CMatrix best_s = s_eh;
  for (int start = 0; start < n_starts; ++start) {
    CMatrix x(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < m; ++i) x(i, j) = rng.next_complex(1.0);
    CMatrix s0 = x * x.adjoint();
    s0 *= power / s0.trace().real();

    // Smallest harvest price whose ascent meets q_bar, by bisection.
    auto solve_at = [&](double price) { return ascend(pb, s0, price, kIters); };
    CMatrix s = solve_at(0.0);
    if (harvest_raw(pb.ggram, s) < q_bar) {
      double lo = 0.0;
      double hi = 1.0 / std::max(channels.g1(), 1e-300);
      CMatrix s_hi = solve_at(hi);
      for (int grow = 0; grow < 60 && harvest_raw(pb.ggram, s_hi) < q_bar; ++grow) {
        lo = hi;
        hi *= 2.0;
        s_hi = solve_at(hi);
      }
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        CMatrix s_mid = solve_at(mid);
        if (harvest_raw(pb.ggram, s_mid) >= q_bar) {
          hi = mid;
          s_hi = std::move(s_mid);
        } else {
          lo = mid;
        }
      }
      s = s_hi;
    }
    // Exact feasibility: mix toward energy beamforming if still short.
    const double q = harvest_raw(pb.ggram, s);
    if (q < q_bar) {
      const double t = std::clamp((q_bar - q) / (q_max - q), 0.0, 1.0);
      s = (1.0 - t) * s + t * s_eh;
    }
    s = 0.5 * (s + s.adjoint()).eval();
    const double rate = nats_to_bits(log_det_nats(pb.h, s));
    if (rate > best) {
      best = rate;
      best_s = s;
    }
  }
  return OracleResult{best, TransmitCovariance::make(best_s, power), n_starts, 0.0};
}

// ---------------------------------------------------------------------------

double interpolate_rate(const REBoundary& b, double energy) {
  const auto& pts = b.points;
  if (pts.empty()) throw Error(ErrorCode::kInvalidArgument, "interpolate_rate: empty boundary");
  if (energy <= pts.front().energy) return pts.front().rate;
  if (energy >= pts.back().energy) return pts.back().rate;
  const auto it = std::lower_bound(pts.begin(), pts.end(), energy,
                                   [](const REPoint& p, double e) { return p.energy < e; });
  const REPoint& r = *it;
  const REPoint& l = *(it - 1);
  const double t = (energy - l.energy) / (r.energy - l.energy);
  return l.rate + t * (r.rate - l.rate);
}

ContainmentReport region_contains(const REBoundary& outer, const REBoundary& inner, double tol) {
  if (outer.points.empty() || inner.points.empty())
    throw Error(ErrorCode::kInvalidArgument, "region_contains: empty boundary");
  const double outer_top = outer.points.back().energy;
  const double energy_tol = tol * std::max(1.0, outer_top);
  if (inner.points.front().energy > outer_top + energy_tol)
    throw Error(ErrorCode::kInvalidArgument, "region_contains: energy ranges are disjoint");

  ContainmentReport rep;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (const REPoint& p : inner.points) {
    double outer_rate = 0.0;
    if (p.energy > outer_top + energy_tol) {
      outer_rate = 0.0;  // beyond the outer region's energy reach
    } else {
      outer_rate = interpolate_rate(outer, std::min(p.energy, outer_top));
    }
    ++rep.checked;
    const double excess = p.rate - outer_rate;
    rep.max_excess = std::max(rep.max_excess, excess);
    if (!(excess <= tol)) {
      rep.contained = false;
      rep.violations.push_back(ContainmentViolation{p.energy, p.rate, outer_rate});
    }
  }
  return rep;
}

}  // namespace swipt
