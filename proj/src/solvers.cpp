#include "swipt_re/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "swipt_re/ellipsoid.hpp"

namespace swipt {
namespace {

constexpr double kCornerRelTol = 1e-9;    // q_bar this close to Q_max takes the P1 corner
constexpr double kFeasibleRelTol = 1e-12;  // q_bar above Q_max by more is infeasible
constexpr double kTieRelTol = 1e-12;       // eigenvalues this close to g1 are tied

CMatrix hermitian_part(const CMatrix& s) { return 0.5 * (s + s.adjoint()); }

void require_power(double power, const char* who) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    std::ostringstream msg;
    msg << who << ": power must be finite and > 0";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

void require_qbar(double q_bar, double q_max, const char* who) {
  if (!(q_bar >= 0.0) || !std::isfinite(q_bar)) {
    std::ostringstream msg;
    msg << who << ": q_bar must be finite and >= 0";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  if (q_bar > q_max * (1.0 + kFeasibleRelTol)) {
    std::ostringstream msg;
    msg << who << ": q_bar " << q_bar << " exceeds Q_max " << q_max;
    throw Error(ErrorCode::kInfeasible, msg.str());
  }
}

// Covariance on the top eigenspace of G^H G maximizing the rate of H:
// water-filling over H W_top. Rank one (P v1 v1^H) when g1 is simple.
CMatrix energy_corner_covariance(const ChannelPair& ch, double power) {
  const Svd& gs = ch.g_svd();
  const double g1 = ch.g1();
  Eigen::Index k = 1;
  while (k < gs.singular_values.size() &&
         gs.singular_values(k) * gs.singular_values(k) >= g1 * (1.0 - kTieRelTol) && g1 > 0.0)
    ++k;
  const CMatrix top = gs.v.leftCols(k);
  if (k == 1) return power * top * top.adjoint();

  const CMatrix hw = ch.h() * top;
  const HermitianEig eig = hermitian_eig(hw.adjoint() * hw);
  const WaterfillResult wf = waterfill(eig.values.cwiseMax(0.0), power);
  const CMatrix inner = eig.vectors * wf.powers.asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(top * inner * top.adjoint());
}

TransmitCovariance finalize_cov(const CMatrix& s, double power) {
  return TransmitCovariance::make(hermitian_part(s), power);
}

// Make the dual iterate's covariance exactly primal feasible: scale into the
// budget, then mix toward the energy-beamforming covariance until the harvest
// floor holds with equality. The result is a certified achievable point.
CMatrix repair_primal(CMatrix s, double power, double q_bar, const CMatrix& ggram,
                      const CMatrix& s_eh) {
  const double tr = s.trace().real();
  if (tr > power) s *= power / tr;
  const double q = harvest_raw(ggram, s);
  if (q < q_bar) {
    const double q_eh = harvest_raw(ggram, s_eh);
    if (q_eh > q) {
      const double t = std::clamp((q_bar - q) / (q_eh - q), 0.0, 1.0);
      s = (1.0 - t) * s + t * s_eh;
    }
  }
  return hermitian_part(s);
}

// Rank-one variant: principal beam at full power, rotated toward the energy
// beam v1 until the floor holds.
CMatrix repair_beam(const CMatrix& s, double power, double q_bar, const CMatrix& ggram,
                    const CVector& v1) {
  const HermitianEig eig = hermitian_eig(s);
  CVector v = eig.vectors.col(0);
  const Complex overlap = v1.dot(v);
  const CVector u = std::abs(overlap) > 0.0 ? CVector(v1 * (overlap / std::abs(overlap))) : v1;
  auto beam = [&](double t) {
    const CVector w = (1.0 - t) * v + t * u;
    return CVector(w / w.norm());
  };
  auto harvest = [&](const CVector& w) { return power * (ggram * w).dot(w).real(); };
  if (harvest(v) < q_bar) {
    double lo = 0.0, hi = 1.0;
    // Q(t) need not be monotone; find a feasible t first, then bisect toward 0.
    for (int k = 1; k <= 64; ++k) {
      const double t = static_cast<double>(k) / 64.0;
      if (harvest(beam(t)) >= q_bar) {
        hi = t;
        break;
      }
      lo = t;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (harvest(beam(mid)) >= q_bar ? hi : lo) = mid;
    }
    v = beam(hi);
  }
  return power * v * v.adjoint();
}

P3Solution make_solution(const CMatrix& h, const CMatrix& ggram, const CMatrix& s, double power,
                         P3Regime regime) {
  P3Solution out{finalize_cov(s, power), 0.0, 0.0, {}};
  out.rate = mutual_information(h, out.covariance);
  out.harvested = std::max(0.0, harvest_raw(ggram, out.covariance.matrix()));
  out.regime = regime;
  out.converged = true;
  return out;
}

struct Problem {
  const ChannelPair& ch;
  double power;
  double q_bar;
  CMatrix ggram;
};

// Handles every q_bar outside the open interval (Q_ID, Q_max(1 - 1e-9)).
std::optional<P3Solution> corner_cases(const Problem& pb, const SolverOptions&) {
  const ChannelPair& ch = pb.ch;
  const double q_max = ch.g1() * pb.power;
  require_qbar(pb.q_bar, q_max, "solve_p3");

  if (ch.h1() == 0.0) {
    P3Solution s = make_solution(ch.h(), pb.ggram, energy_corner_covariance(ch, pb.power),
                                 pb.power, P3Regime::kDegenerate);
    return s;
  }

  const P2Solution p2 = solve_p2(ch, pb.power);
  const double q_id = harvest_raw(pb.ggram, p2.covariance.matrix());
  if (pb.q_bar <= q_id) {
    P3Solution s = make_solution(ch.h(), pb.ggram, p2.covariance.matrix(), pb.power,
                                 P3Regime::kUnconstrained);
    s.dual = DualPoint{0.0, p2.waterfill.water_level > 0.0 ? 1.0 / p2.waterfill.water_level : 0.0};
    return s;
  }
  if (pb.q_bar >= q_max * (1.0 - kCornerRelTol)) {
    return make_solution(ch.h(), pb.ggram, energy_corner_covariance(ch, pb.power), pb.power,
                         P3Regime::kEnergyCorner);
  }
  return std::nullopt;
}

P3Solution run_dual(const Problem& pb, const SolverOptions& opts,
                    const std::function<CMatrix(const DualPoint&)>& covariance_at,
                    const std::function<InnerEval(const DualPoint&)>& eval_at,
                    bool rank_one = false) {
  const ChannelPair& ch = pb.ch;
  const double q_max = ch.g1() * pb.power;
  const WaterfillResult wf = waterfill(ch.h_gains(), pb.power);
  const double r_max_nats = wf.rate * kLn2;
  const DualProblem dp = make_dual_problem(r_max_nats, q_max, pb.q_bar, pb.power,
                                           ch.tx_antennas(), ch.h1(), ch.g1());

  const EllipsoidOutcome eo = minimize_dual(dp, eval_at, opts);

  const CMatrix s_eh = energy_corner_covariance(ch, pb.power);
  CMatrix s = covariance_at(eo.dual);
  if (rank_one) {
    s = repair_beam(s, pb.power, pb.q_bar, pb.ggram, ch.g_svd().v.col(0));
  } else {
    s = repair_primal(std::move(s), pb.power, pb.q_bar, pb.ggram, s_eh);
  }

  P3Solution out = make_solution(ch.h(), pb.ggram, s, pb.power, P3Regime::kInterior);
  out.dual = eo.dual;
  out.iterations = eo.iterations;
  out.converged = eo.converged;
  out.energy_slackness = eo.dual.lambda * (eo.at_dual.harvested - pb.q_bar);
  out.power_slackness = eo.dual.mu * (pb.power - eo.at_dual.trace);
  return out;
}

// A^{-1/2} = W diag((mu - lambda g_i)^{-1/2}) W^H with W the eigenvectors of G^H G.
struct AFactor {
  CMatrix w;
  RVector g;

  explicit AFactor(const CMatrix& ggram) {
    const HermitianEig eig = hermitian_eig(ggram);
    w = eig.vectors;
    g = eig.values.cwiseMax(0.0);
  }

  CMatrix power_of(const DualPoint& d, double exponent) const {
    RVector diag(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) diag(i) = std::pow(d.mu - d.lambda * g(i), exponent);
    return w * diag.asDiagonal() * w.adjoint();
  }
};

CMatrix general_inner(const CMatrix& h, const AFactor& af, const DualPoint& d) {
  const CMatrix a_inv_half = af.power_of(d, -0.5);
  const Svd dec = svd(h * a_inv_half);
  RVector p(dec.singular_values.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double ht = dec.singular_values(i) * dec.singular_values(i);
    p(i) = ht > 1.0 ? 1.0 - 1.0 / ht : 0.0;
  }
  const CMatrix y = a_inv_half * dec.v;
  return hermitian_part(y * p.asDiagonal() * y.adjoint());
}

CMatrix miso_inner(const CVector& h, const AFactor& af, const DualPoint& d) {
  const CMatrix a_inv = af.power_of(d, -1.0);
  const CVector y = a_inv * h;
  const double x = h.dot(y).real();  // h^H A^{-1} h = ||A^{-1/2} h||^2
  const double c = x > 1.0 ? 1.0 / x - 1.0 / (x * x) : 0.0;
  return hermitian_part(c * y * y.adjoint());
}

}  // namespace

std::string_view to_string(P3Regime regime) {
  switch (regime) {
    case P3Regime::kUnconstrained: return "unconstrained";
    case P3Regime::kInterior: return "interior";
    case P3Regime::kEnergyCorner: return "energy_corner";
    case P3Regime::kClosedForm: return "closed_form";
    case P3Regime::kDegenerate: return "degenerate";
  }
  return "unknown";
}

P1Solution solve_p1(const ChannelPair& channels, double power) {
  require_power(power, "solve_p1");
  const double g1 = channels.g1();
  CVector v1 = channels.g_svd().v.col(0);
  const bool degenerate = g1 == 0.0;
  if (degenerate) {
    v1 = CVector::Zero(channels.tx_antennas());
    v1(0) = 1.0;
  }
  P1Solution out{finalize_cov(power * v1 * v1.adjoint(), power), g1 * power, v1, degenerate};
  return out;
}

P2Solution solve_p2(const ChannelPair& channels, double power) {
  require_power(power, "solve_p2");
  const Svd& hs = channels.h_svd();
  const RVector gains = channels.h_gains();
  WaterfillResult wf = waterfill(gains, power);
  const bool degenerate = channels.h1() == 0.0;
  const CMatrix s = hs.v * wf.powers.asDiagonal() * hs.v.adjoint();
  return P2Solution{finalize_cov(s, power), std::move(wf), degenerate};
}

Corners compute_corners(const ChannelPair& channels, double power) {
  require_power(power, "compute_corners");
  const CMatrix ggram = channels.g().adjoint() * channels.g();
  const P2Solution p2 = solve_p2(channels, power);
  Corners c;
  c.r_max = p2.waterfill.rate;
  c.q_id = std::max(0.0, harvest_raw(ggram, p2.covariance.matrix()));
  c.q_max = channels.g1() * power;
  const TransmitCovariance s_eh = finalize_cov(energy_corner_covariance(channels, power), power);
  c.r_eh = mutual_information(channels.h(), s_eh);
  // Under ties the water-filling covariance may already reach Q_max.
  if (c.q_id >= c.q_max * (1.0 - kCornerRelTol)) c.r_eh = c.r_max;
  return c;
}

TransmitCovariance solve_p3_dual_inner(const ChannelPair& channels, const DualPoint& dual) {
  const CMatrix ggram = channels.g().adjoint() * channels.g();
  if (!dual_feasible(dual, channels.g1()))
    throw Error(ErrorCode::kDualInfeasible,
                "solve_p3_dual_inner: dual point violates mu > lambda * g1");
  const AFactor af(ggram);
  const CMatrix s = general_inner(channels.h(), af, dual);
  return TransmitCovariance::make(s, s.trace().real());
}

P3Solution solve_p3(const ChannelPair& channels, double power, double q_bar,
                    const SolverOptions& opts) {
  require_power(power, "solve_p3");
  const Problem pb{channels, power, q_bar, channels.g().adjoint() * channels.g()};
  if (auto corner = corner_cases(pb, opts)) return *corner;

  const AFactor af(pb.ggram);
  const CMatrix& h = channels.h();
  auto cov = [&](const DualPoint& d) { return general_inner(h, af, d); };
  auto eval = [&](const DualPoint& d) {
    const CMatrix s = general_inner(h, af, d);
    return InnerEval{harvest_raw(pb.ggram, s), s.trace().real()};
  };
  return run_dual(pb, opts, cov, eval);
}

P3Solution solve_p3_miso(const ChannelPair& channels, double power, double q_bar,
                         const SolverOptions& opts) {
  require_power(power, "solve_p3_miso");
  if (channels.h().rows() != 1)
    throw Error(ErrorCode::kInvalidArgument, "solve_p3_miso: H must be a single row h^H");
  const Problem pb{channels, power, q_bar, channels.g().adjoint() * channels.g()};
  if (auto corner = corner_cases(pb, opts)) return *corner;

  const AFactor af(pb.ggram);
  const CVector h = channels.h().row(0).adjoint();
  auto cov = [&](const DualPoint& d) { return miso_inner(h, af, d); };
  auto eval = [&](const DualPoint& d) {
    const CMatrix s = miso_inner(h, af, d);
    return InnerEval{harvest_raw(pb.ggram, s), s.trace().real()};
  };
  return run_dual(pb, opts, cov, eval, true);
}

P3Solution solve_p3_colocated(const CMatrix& h, double power, double q_bar,
                              const SolverOptions& opts) {
  require_power(power, "solve_p3_colocated");
  const ChannelPair channels = ChannelPair::colocated(h);
  const Problem pb{channels, power, q_bar, h.adjoint() * h};
  if (auto corner = corner_cases(pb, opts)) return *corner;

  const RVector gains = channels.h_gains();
  const CMatrix& v = channels.h_svd().v;
  auto cov = [&](const DualPoint& d) {
    const RVector p = modified_waterfill(gains, d);
    return CMatrix(v * p.asDiagonal() * v.adjoint());
  };
  auto eval = [&](const DualPoint& d) {
    const RVector p = modified_waterfill(gains, d);
    return InnerEval{gains.dot(p), p.sum()};
  };
  return run_dual(pb, opts, cov, eval);
}

P3Solution solve_p3_miso_miso_closed(const CVector& h, const CVector& g, double power,
                                     double q_bar) {
  require_power(power, "solve_p3_miso_miso_closed");
  if (h.size() != g.size() || h.size() == 0)
    throw Error(ErrorCode::kDimensionMismatch,
                "solve_p3_miso_miso_closed: h and g must have the same positive length");
  const double g_norm = g.norm();
  const double h_norm = h.norm();
  const double q_max = g_norm * g_norm * power;
  require_qbar(q_bar, q_max, "solve_p3_miso_miso_closed");

  const CMatrix ggram = g * g.adjoint();
  const Eigen::Index m = h.size();

  CVector v;
  double rate_bits = 0.0;
  if (h_norm == 0.0 || g_norm == 0.0) {
    // No information link, or no energy link (then q_bar == 0 and MRC is optimal).
    if (g_norm == 0.0 && h_norm > 0.0) {
      v = h / h_norm;
      rate_bits = std::log2(1.0 + h_norm * h_norm * power);
    } else {
      v = g_norm > 0.0 ? CVector(g / g_norm) : CVector(CVector::Unit(m, 0));
      rate_bits = 0.0;
    }
  } else {
    const CVector h_hat = h / h_norm;
    const CVector g_hat = g / g_norm;
    const double mrc_harvest = std::norm(g.dot(h_hat)) * power;  // |g^H h_hat|^2 P
    if (q_bar <= mrc_harvest) {
      v = h_hat;
      rate_bits = std::log2(1.0 + h_norm * h_norm * power);
    } else {
      const Complex alpha = g_hat.dot(h);  // g_hat^H h
      const double alpha_abs = std::abs(alpha);
      const Complex phase = alpha_abs > 0.0 ? alpha / alpha_abs : Complex(1.0, 0.0);
      const CVector h_perp = h - alpha * g_hat;
      const double perp_norm = h_perp.norm();
      const double frac = std::clamp(q_bar / (power * g_norm * g_norm), 0.0, 1.0);
      if (perp_norm < 1e-10 * std::max(1.0, h_norm)) {
        v = std::sqrt(frac) * phase * g_hat;
      } else {
        v = std::sqrt(frac) * phase * g_hat + std::sqrt(1.0 - frac) * (h_perp / perp_norm);
      }
      const double cross = std::sqrt(std::max(0.0, h_norm * h_norm - alpha_abs * alpha_abs));
      const double amp = std::sqrt(q_bar / (g_norm * g_norm)) * alpha_abs +
                         std::sqrt(std::max(0.0, power - q_bar / (g_norm * g_norm))) * cross;
      rate_bits = std::log2(1.0 + amp * amp);
    }
  }

  P3Solution out{finalize_cov(power * v * v.adjoint(), power), 0.0, 0.0, {}};
  out.rate = rate_bits;
  out.harvested = std::max(0.0, harvest_raw(ggram, out.covariance.matrix()));
  out.regime = P3Regime::kClosedForm;
  out.converged = true;
  return out;
}

}  // namespace swipt
