#include "envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "swipt_re/parallel.hpp"

namespace swipt::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  ChannelPair channels;
  double q_max;  // g1' P
  bool uniform;
  double rho;    // meaningful when uniform
};

struct Eval {
  double rate = kNegInf;
  bool converged = true;
  std::string error;
};

Eval evaluate(const ChannelPair& ch, double q_max, double power, double q,
              const SolverOptions& opts) {
  Eval e;
  if (q > q_max * (1.0 + 1e-12)) return e;  // outside this sub-region
  try {
    const P3Solution sol = solve_p3(ch, power, std::min(q, q_max), opts);
    e.rate = sol.rate;
    e.converged = sol.converged;
  } catch (const Error& err) {
    e.converged = false;
    e.error = err.what();
  }
  return e;
}

}  // namespace

ChannelPair split_channels(const CMatrix& h, const RVector& rho) {
  if (rho.size() != h.rows())
    throw Error(ErrorCode::kDimensionMismatch, "split vector length must equal receive antennas");
  const RVector id_scale = (1.0 - rho.array()).max(0.0).sqrt();
  const RVector eh_scale = rho.array().max(0.0).sqrt();
  CMatrix h_id = id_scale.asDiagonal() * h;
  CMatrix g_eh = eh_scale.asDiagonal() * h;
  return ChannelPair::separated(std::move(h_id), std::move(g_eh));
}

std::vector<EnvelopeSample> split_envelope(const CMatrix& h, double power,
                                           const std::vector<SplitVector>& candidates,
                                           int n_points, bool refine_uniform,
                                           const TraceOptions& opts) {
  if (candidates.empty())
    throw Error(ErrorCode::kInvalidArgument, "split envelope needs at least one candidate");
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "n_points must be >= 2");

  std::vector<Candidate> cands;
  cands.reserve(candidates.size());
  double q_top = 0.0;
  for (const SplitVector& sv : candidates) {
    ChannelPair ch = split_channels(h, sv.rho());
    const double q_max = ch.g1() * power;
    q_top = std::max(q_top, q_max);
    const bool uniform = sv.is_uniform();
    cands.push_back(Candidate{std::move(ch), q_max, uniform, uniform ? sv.rho()(0) : 0.0});
  }

  const ChannelPair full = ChannelPair::colocated(h);
  const double h1 = full.h1();
  if (refine_uniform) q_top = h1 * power;

  const int n = q_top > 0.0 ? n_points : 1;
  std::vector<EnvelopeSample> out(n);

  auto uniform_rate = [&](double rho, double q) {
    const ChannelPair ch = split_channels(h, RVector::Constant(h.rows(), rho));
    return evaluate(ch, ch.g1() * power, power, q, opts.solver);
  };

  parallel_for(n, opts.threads, [&](int k) {
    const double q = n == 1 ? 0.0 : q_top * static_cast<double>(k) / (n - 1);
    EnvelopeSample s;
    s.q = q;
    Eval best;
    std::vector<std::pair<double, double>> uniform_evals;  // (rho, rate)

    auto consider = [&](const Eval& e) {
      if (!e.error.empty() && s.error.empty()) s.error = e.error;
      if (e.rate > best.rate) best = e;
    };

    for (const Candidate& c : cands) {
      const Eval e = evaluate(c.channels, c.q_max, power, q, opts.solver);
      consider(e);
      if (c.uniform && e.rate > kNegInf) uniform_evals.emplace_back(c.rho, e.rate);
    }

    if (refine_uniform && h1 > 0.0) {
      const double rho_min = std::clamp(q / (h1 * power), 0.0, 1.0);
      const Eval e = uniform_rate(rho_min, q);
      consider(e);
      if (e.rate > kNegInf) uniform_evals.emplace_back(rho_min, e.rate);

      std::sort(uniform_evals.begin(), uniform_evals.end());
      if (!uniform_evals.empty()) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < uniform_evals.size(); ++i)
          if (uniform_evals[i].second > uniform_evals[arg].second) arg = i;
        // Nearest distinct neighbours; rho_min can coincide with a grid value.
        const double peak = uniform_evals[arg].first;
        double lo = peak, hi = peak;
        for (const auto& [rho, rate] : uniform_evals) {
          if (rho < peak - 1e-9) lo = rho;
          if (rho > peak + 1e-9 && hi == peak) hi = rho;
        }
        lo = std::max(lo, rho_min);
        // Golden-section search for the best rho inside the bracket.
        constexpr double kInvPhi = 0.6180339887498949;
        double a = lo, b = hi;
        if (b - a > 1e-9) {
          double x1 = b - kInvPhi * (b - a);
          double x2 = a + kInvPhi * (b - a);
          Eval f1 = uniform_rate(x1, q);
          Eval f2 = uniform_rate(x2, q);
          consider(f1);
          consider(f2);
          for (int it = 0; it < 40 && b - a > 1e-7; ++it) {
            if (f1.rate >= f2.rate) {
              b = x2;
              x2 = x1;
              f2 = f1;
              x1 = b - kInvPhi * (b - a);
              f1 = uniform_rate(x1, q);
              consider(f1);
            } else {
              a = x1;
              x1 = x2;
              f1 = f2;
              x2 = a + kInvPhi * (b - a);
              f2 = uniform_rate(x2, q);
              consider(f2);
            }
          }
        }
      }
    }

    if (best.rate == kNegInf) {
      s.rate = std::numeric_limits<double>::quiet_NaN();
      s.converged = false;
      if (s.error.empty()) s.error = "no feasible split candidate";
    } else {
      s.rate = std::max(0.0, best.rate);
      s.converged = best.converged;
    }
    out[k] = std::move(s);
  });
  return out;
}

}  // namespace swipt::detail
