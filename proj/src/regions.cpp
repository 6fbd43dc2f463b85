#include "swipt_re/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "envelope.hpp"
#include "swipt_re/parallel.hpp"

namespace swipt {
namespace {

void require_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "zeta must lie in (0, 1]");
}

void require_power(double power) {
  if (!(power > 0.0) || !std::isfinite(power))
    throw Error(ErrorCode::kInvalidArgument, "power must be finite and > 0");
}

double grid(double top, int k, int n) { return n <= 1 ? 0.0 : top * static_cast<double>(k) / (n - 1); }

// Appends unless the energy duplicates the previous point (keeps the higher rate).
void push_point(REBoundary& b, double energy, double rate, bool converged = true) {
  if (!b.points.empty() && !(energy > b.points.back().energy)) {
    REPoint& last = b.points.back();
    if (rate > last.rate) {
      last.rate = rate;
      last.converged = converged;
    }
    return;
  }
  b.points.push_back(REPoint{energy, rate, converged});
}

using P3Fn = std::function<P3Solution(double q_bar)>;

// Shared by the separated region and the co-located outer bound: flat segment
// at R_max up to Q_ID, P3 sweep over the open interval, the R_EH corner.
REBoundary trace_p3_boundary(Scheme scheme, const Corners& c, double zeta,
                             const SweepSpec& sweep, const TraceOptions& opts, const P3Fn& solve) {
  sweep.validate();
  REBoundary b;
  b.scheme = scheme;
  b.meta.sweep_points = sweep.n_points;
  b.meta.solver_tol = opts.solver.tol;

  const bool corners = sweep.corners == CornerHandling::kIncludeCorners;
  const bool has_interior = c.q_max - c.q_id > 1e-12 * std::max(1.0, c.q_max);

  if (corners) {
    push_point(b, 0.0, c.r_max);
    push_point(b, zeta * c.q_id, c.r_max);
  }
  if (has_interior) {
    const int n = sweep.n_points;
    std::vector<REPoint> pts(n);
    std::vector<std::string> errors(n);
    parallel_for(n, opts.threads, [&](int k) {
      const double q_bar = c.q_id + (c.q_max - c.q_id) * (k + 1.0) / (n + 1.0);
      REPoint p{zeta * q_bar, 0.0, true};
      try {
        const P3Solution sol = solve(q_bar);
        p.rate = sol.rate;
        p.converged = sol.converged;
        if (!sol.converged) errors[k] = "dual iteration did not converge";
      } catch (const Error& e) {
        p.rate = std::numeric_limits<double>::quiet_NaN();
        p.converged = false;
        errors[k] = e.what();
      }
      pts[k] = p;
    });
    for (int k = 0; k < n; ++k) {
      if (!errors[k].empty())
        b.meta.failures.push_back(PointFailure{static_cast<int>(b.points.size()), pts[k].energy,
                                               errors[k]});
      b.points.push_back(pts[k]);
    }
  }
  if (corners) push_point(b, zeta * c.q_max, has_interior ? c.r_eh : c.r_max);
  return b;
}

REBoundary from_envelope(Scheme scheme, const std::vector<detail::EnvelopeSample>& samples,
                         double zeta, int n_points, double tol) {
  REBoundary b;
  b.scheme = scheme;
  b.meta.sweep_points = n_points;
  b.meta.solver_tol = tol;
  for (const auto& s : samples) {
    if (!s.error.empty() || !s.converged)
      b.meta.failures.push_back(PointFailure{static_cast<int>(b.points.size()), zeta * s.q,
                                             s.error.empty() ? "not converged" : s.error});
    b.points.push_back(REPoint{zeta * s.q, s.rate, s.converged});
  }
  return b;
}

}  // namespace

void SweepSpec::validate() const {
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "SweepSpec: n_points must be >= 2");
}

// ---------------------------------------------------------------------------

SplitVector SplitVector::make(RVector rho) {
  if (rho.size() == 0) throw Error(ErrorCode::kInvalidArgument, "SplitVector: empty");
  for (Eigen::Index i = 0; i < rho.size(); ++i)
    if (!(rho(i) >= 0.0 && rho(i) <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "SplitVector: every rho_i must lie in [0, 1]");
  return SplitVector(std::move(rho));
}

SplitVector SplitVector::uniform(int n_rx, double rho) {
  if (n_rx <= 0) throw Error(ErrorCode::kInvalidArgument, "SplitVector: n_rx must be positive");
  return make(RVector::Constant(n_rx, rho));
}

bool SplitVector::is_uniform() const {
  return (rho_.array() == rho_(0)).all();
}

AntennaPartition AntennaPartition::make(int n_rx, std::vector<int> omega) {
  if (n_rx <= 0) throw Error(ErrorCode::kInvalidArgument, "AntennaPartition: n_rx must be positive");
  std::sort(omega.begin(), omega.end());
  if (std::adjacent_find(omega.begin(), omega.end()) != omega.end())
    throw Error(ErrorCode::kInvalidArgument, "AntennaPartition: duplicate antenna index");
  for (int i : omega)
    if (i < 0 || i >= n_rx)
      throw Error(ErrorCode::kInvalidArgument, "AntennaPartition: antenna index out of range");
  return AntennaPartition(n_rx, std::move(omega));
}

SplitVector AntennaPartition::as_split() const {
  RVector rho = RVector::Zero(n_rx_);
  for (int i : omega_) rho(i) = 1.0;
  return SplitVector::make(std::move(rho));
}

// ---------------------------------------------------------------------------

REBoundary trace_separated(const ChannelPair& channels, double power, double zeta,
                           const SweepSpec& sweep, const TraceOptions& opts) {
  require_power(power);
  require_zeta(zeta);
  const Corners c = compute_corners(channels, power);
  return trace_p3_boundary(Scheme::kSeparated, c, zeta, sweep, opts, [&](double q_bar) {
    return solve_p3(channels, power, q_bar, opts.solver);
  });
}

REBoundary trace_colocated_outer(const CMatrix& h, double power, double zeta,
                                 const SweepSpec& sweep, const TraceOptions& opts) {
  require_power(power);
  require_zeta(zeta);
  const ChannelPair channels = ChannelPair::colocated(h);
  const Corners c = compute_corners(channels, power);
  return trace_p3_boundary(Scheme::kOuterBound, c, zeta, sweep, opts, [&](double q_bar) {
    return solve_p3_colocated(h, power, q_bar, opts.solver);
  });
}

// ---------------------------------------------------------------------------

REBoundary trace_ts1(const CMatrix& h, double power, double zeta, int n_points) {
  require_power(power);
  require_zeta(zeta);
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "trace_ts1: n_points must be >= 2");
  const ChannelPair ch = ChannelPair::colocated(h);
  const double r_max = solve_p2(ch, power).waterfill.rate;
  const double q_max = solve_p1(ch, power).q_max;

  REBoundary b;
  b.scheme = Scheme::kTS1;
  b.meta.sweep_points = n_points;
  for (int k = 0; k < n_points; ++k) {
    const double alpha = static_cast<double>(k) / (n_points - 1);
    push_point(b, zeta * alpha * q_max, (1.0 - alpha) * r_max);
  }
  return b;
}

double ts2_rate(const RVector& gains, double power, double q, std::optional<double> peak_power) {
  const double h1 = gains.size() > 0 ? gains.maxCoeff() : 0.0;
  if (h1 <= 0.0) return 0.0;
  const double q_max = h1 * power;
  if (q < 0.0 || q > q_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "ts2_rate: q = " << q << " outside [0, h1 P = " << q_max << "]";
    throw Error(ErrorCode::kInfeasible, msg.str());
  }
  const double id_energy = std::max(0.0, power - q / h1);
  if (!peak_power) return waterfill(gains, id_energy).rate;

  const double alpha = q / (h1 * *peak_power);
  if (alpha >= 1.0) return 0.0;
  const double slot_budget = std::min(id_energy / (1.0 - alpha), *peak_power);
  return (1.0 - alpha) * waterfill(gains, slot_budget).rate;
}

REBoundary trace_ts2(const CMatrix& h, double power, double zeta, const SweepSpec& sweep,
                     std::optional<double> peak_power) {
  require_power(power);
  require_zeta(zeta);
  sweep.validate();
  if (peak_power && !(*peak_power >= power))
    throw Error(ErrorCode::kInvalidArgument, "trace_ts2: peak_power must be >= power");

  const ChannelPair ch = ChannelPair::colocated(h);
  const RVector gains = ch.h_gains();
  const double q_max = ch.h1() * power;

  REBoundary b;
  b.scheme = peak_power ? Scheme::kTS2Peak : Scheme::kTS2;
  b.meta.sweep_points = sweep.n_points;
  const int n = q_max > 0.0 ? sweep.n_points : 1;
  for (int k = 0; k < n; ++k) {
    const double q = grid(q_max, k, n);
    try {
      push_point(b, zeta * q, ts2_rate(gains, power, q, peak_power));
    } catch (const Error& e) {
      b.meta.failures.push_back(PointFailure{k, zeta * q, e.what()});
    }
  }
  return b;
}

// ---------------------------------------------------------------------------

std::vector<double> default_rho_sweep(int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "default_rho_sweep: n must be >= 2");
  std::vector<double> rho(n);
  for (int k = 0; k < n; ++k) rho[k] = static_cast<double>(k) / (n - 1);
  return rho;
}

REBoundary trace_ups(const CMatrix& h, double power, double zeta,
                     const std::vector<double>& rho_sweep, const SweepSpec& qbar_sweep,
                     const TraceOptions& opts, const UpsOptions& ups) {
  require_power(power);
  require_zeta(zeta);
  qbar_sweep.validate();
  if (rho_sweep.empty()) throw Error(ErrorCode::kInvalidArgument, "trace_ups: empty rho sweep");
  std::vector<SplitVector> cands;
  cands.reserve(rho_sweep.size());
  for (double rho : rho_sweep) cands.push_back(SplitVector::uniform(static_cast<int>(h.rows()), rho));
  const auto samples =
      detail::split_envelope(h, power, cands, qbar_sweep.n_points, ups.refine, opts);
  REBoundary b = from_envelope(Scheme::kUPS, samples, zeta, qbar_sweep.n_points, opts.solver.tol);
  if (ups.refine) b.meta.notes.push_back("per-energy rho refinement enabled");
  return b;
}

std::vector<SplitVector> default_split_candidates(int n_rx, int per_antenna, int uniform_points) {
  if (n_rx <= 0) throw Error(ErrorCode::kInvalidArgument, "n_rx must be positive");
  std::vector<SplitVector> out;
  if (n_rx <= 2 && per_antenna >= 2) {
    const int combos = n_rx == 1 ? per_antenna : per_antenna * per_antenna;
    for (int c = 0; c < combos; ++c) {
      RVector rho(n_rx);
      rho(0) = static_cast<double>(c % per_antenna) / (per_antenna - 1);
      if (n_rx == 2) rho(1) = static_cast<double>(c / per_antenna) / (per_antenna - 1);
      out.push_back(SplitVector::make(std::move(rho)));
    }
  }
  for (double rho : default_rho_sweep(uniform_points)) out.push_back(SplitVector::uniform(n_rx, rho));
  if (n_rx <= 8)
    for (const AntennaPartition& p : enumerate_partitions(n_rx)) out.push_back(p.as_split());
  return out;
}

REBoundary trace_ps_general(const CMatrix& h, double power, double zeta,
                            const std::vector<SplitVector>& candidates,
                            const SweepSpec& qbar_sweep, const TraceOptions& opts) {
  require_power(power);
  require_zeta(zeta);
  qbar_sweep.validate();
  if (candidates.empty())
    throw Error(ErrorCode::kInvalidArgument, "trace_ps_general: candidate list is empty");
  const auto samples =
      detail::split_envelope(h, power, candidates, qbar_sweep.n_points, false, opts);
  return from_envelope(Scheme::kPS, samples, zeta, qbar_sweep.n_points, opts.solver.tol);
}

std::vector<AntennaPartition> enumerate_partitions(int n_rx) {
  if (n_rx <= 0 || n_rx > 8)
    throw Error(ErrorCode::kInvalidArgument, "enumerate_partitions: requires 1 <= N <= 8");
  std::vector<AntennaPartition> out;
  for (unsigned mask = 0; mask < (1u << n_rx); ++mask) {
    std::vector<int> omega;
    for (int i = 0; i < n_rx; ++i)
      if (mask & (1u << i)) omega.push_back(i);
    out.push_back(AntennaPartition::make(n_rx, std::move(omega)));
  }
  return out;
}

REBoundary trace_antenna_switching(const CMatrix& h, double power, double zeta,
                                   const AntennaPartition& partition,
                                   const SweepSpec& qbar_sweep, const TraceOptions& opts) {
  require_power(power);
  require_zeta(zeta);
  qbar_sweep.validate();
  if (partition.n_rx() != h.rows())
    throw Error(ErrorCode::kDimensionMismatch,
                "trace_antenna_switching: partition size must equal receive antennas");
  const auto samples = detail::split_envelope(h, power, {partition.as_split()},
                                              qbar_sweep.n_points, false, opts);
  REBoundary b = from_envelope(Scheme::kAS, samples, zeta, qbar_sweep.n_points, opts.solver.tol);
  if (static_cast<int>(partition.omega().size()) == partition.n_rx())
    b.meta.notes.push_back("all antennas harvest: information path empty, rate is zero");
  if (partition.omega().empty())
    b.meta.notes.push_back("no antenna harvests: region is the water-filling point");
  return b;
}

// ---------------------------------------------------------------------------

REBoundary trace_simo_closed(const CMatrix& h, double power, double zeta, const SweepSpec& sweep) {
  require_power(power);
  require_zeta(zeta);
  sweep.validate();
  if (h.cols() != 1)
    throw Error(ErrorCode::kInvalidArgument, "trace_simo_closed: channel must have M = 1");
  const double gain = h.squaredNorm();
  const double q_max = gain * power;
  REBoundary b;
  b.scheme = Scheme::kSIMOClosed;
  b.meta.sweep_points = sweep.n_points;
  const int n = q_max > 0.0 ? sweep.n_points : 1;
  for (int k = 0; k < n; ++k) {
    const double q = grid(q_max, k, n);
    push_point(b, zeta * q, std::log2(1.0 + std::max(0.0, q_max - q)));
  }
  return b;
}

double siso_ps_snr(double gain, double power, double rho, const NoiseSplit& noise) {
  if (noise.sigma_a_sq >= 1.0) return power * gain;  // no processing noise
  return (1.0 - rho) * power * gain / (1.0 - rho * noise.sigma_a_sq);
}

REBoundary trace_siso_ps_case(double gain, double power, const NoiseSplit& noise,
                              const SweepSpec& sweep, double zeta) {
  require_power(power);
  require_zeta(zeta);
  sweep.validate();
  if (!(gain > 0.0) || !std::isfinite(gain))
    throw Error(ErrorCode::kInvalidArgument, "trace_siso_ps_case: gain must be > 0");
  if (!(noise.sigma_a_sq >= 0.0 && noise.sigma_a_sq <= 1.0) ||
      std::abs(noise.sigma_a_sq + noise.sigma_p_sq - 1.0) > 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "trace_siso_ps_case: noise split must sum to 1");

  REBoundary b;
  b.scheme = Scheme::kSISOCase;
  b.meta.sweep_points = sweep.n_points;
  if (noise.sigma_a_sq == 0.0)
    b.meta.notes.push_back("case I: no antenna noise");
  else if (noise.sigma_a_sq < 1.0)
    b.meta.notes.push_back("case II: antenna and processing noise");
  else
    b.meta.notes.push_back("case III: no processing noise");
  for (int k = 0; k < sweep.n_points; ++k) {
    const double rho = static_cast<double>(k) / (sweep.n_points - 1);
    const double tau = siso_ps_snr(gain, power, rho, noise);
    push_point(b, zeta * rho * power * gain, std::log2(1.0 + tau));
  }
  return b;
}

}  // namespace swipt
