#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "swipt_re/core.hpp"

namespace swipt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNotPsd: return "not_psd";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kDualInfeasible: return "dual_infeasible";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 10> kSchemeNames{{
    {Scheme::kOuterBound, "outer_bound"},
    {Scheme::kSeparated, "separated"},
    {Scheme::kTS1, "ts1"},
    {Scheme::kTS2, "ts2"},
    {Scheme::kTS2Peak, "ts2_peak"},
    {Scheme::kUPS, "ups"},
    {Scheme::kPS, "ps"},
    {Scheme::kAS, "as"},
    {Scheme::kSIMOClosed, "simo_closed"},
    {Scheme::kSISOCase, "siso_case"},
}};

}  // namespace

std::string_view to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames)
    if (s == scheme) return name;
  return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames)
    if (n == name) return s;
  return std::nullopt;
}

bool is_convex_scheme(Scheme scheme) {
  switch (scheme) {
    case Scheme::kOuterBound:
    case Scheme::kSeparated:
    case Scheme::kTS2:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------

ChannelPair::ChannelPair(CMatrix h, CMatrix g, bool colocated)
    : h_(std::move(h)), g_(std::move(g)), colocated_(colocated) {
  if (h_.rows() == 0 || h_.cols() == 0 || g_.rows() == 0 || g_.cols() == 0)
    throw Error(ErrorCode::kInvalidArgument, "ChannelPair: dimensions must be positive");
  if (h_.cols() != g_.cols())
    throw Error(ErrorCode::kDimensionMismatch,
                "ChannelPair: H and G must share the transmit dimension M");
  h_svd_ = svd(h_);
  g_svd_ = colocated_ ? h_svd_ : svd(g_);
}

ChannelPair ChannelPair::separated(CMatrix h, CMatrix g) {
  return ChannelPair(std::move(h), std::move(g), false);
}

ChannelPair ChannelPair::colocated(CMatrix h) {
  CMatrix g = h;
  return ChannelPair(std::move(h), std::move(g), true);
}

RVector ChannelPair::h_gains() const { return h_svd_.singular_values.array().square(); }
RVector ChannelPair::g_gains() const { return g_svd_.singular_values.array().square(); }

double ChannelPair::h1() const {
  const double s = h_svd_.singular_values(0);
  return s * s;
}

double ChannelPair::g1() const {
  const double s = g_svd_.singular_values(0);
  return s * s;
}

// ---------------------------------------------------------------------------

TransmitCovariance TransmitCovariance::make(const CMatrix& s, double power_budget) {
  if (!(power_budget >= 0.0) || !std::isfinite(power_budget))
    throw Error(ErrorCode::kInvalidArgument, "TransmitCovariance: budget must be finite and >= 0");
  if (s.rows() != s.cols() || s.rows() == 0)
    throw Error(ErrorCode::kDimensionMismatch, "TransmitCovariance: matrix must be square");
  if (!all_finite(s)) throw Error(ErrorCode::kNonFinite, "TransmitCovariance: non-finite entries");

  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if (hermitian_defect(s) > kHermitianTol * scale)
    throw Error(ErrorCode::kNotPsd, "TransmitCovariance: matrix is not Hermitian");

  CMatrix sym = 0.5 * (s + s.adjoint());
  const HermitianEig eig = hermitian_eig(sym);
  const double min_eig = eig.values(eig.values.size() - 1);
  if (min_eig < -kPsdClampTol * scale) {
    std::ostringstream msg;
    msg << "TransmitCovariance: eigenvalue " << min_eig << " below PSD tolerance";
    throw Error(ErrorCode::kNotPsd, msg.str());
  }
  if (min_eig < 0.0) {
    const RVector clamped = eig.values.cwiseMax(0.0);
    sym = eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint();
    sym = 0.5 * (sym + sym.adjoint()).eval();
  }
  if (sym.trace().real() > power_budget + kTraceTol) {
    std::ostringstream msg;
    msg << "TransmitCovariance: trace " << sym.trace().real() << " exceeds budget " << power_budget;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  return TransmitCovariance(std::move(sym), power_budget);
}

TransmitCovariance TransmitCovariance::zero(int m, double power_budget) {
  return make(CMatrix::Zero(m, m), power_budget);
}

// ---------------------------------------------------------------------------

bool REBoundary::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const REPoint& p) { return p.converged; });
}

double REBoundary::max_energy() const { return points.empty() ? 0.0 : points.back().energy; }

NoiseSplit NoiseSplit::from_antenna_noise(double sigma_a_sq) {
  if (!(sigma_a_sq >= 0.0 && sigma_a_sq <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "NoiseSplit: sigma_a^2 must lie in [0, 1]");
  return NoiseSplit{sigma_a_sq, 1.0 - sigma_a_sq};
}

// ---------------------------------------------------------------------------

double log_det_nats(const CMatrix& channel, const CMatrix& s) {
  const Eigen::Index n = channel.rows();
  CMatrix k = CMatrix::Identity(n, n) + channel * s * channel.adjoint();
  k = 0.5 * (k + k.adjoint()).eval();
  Eigen::LLT<CMatrix> llt(k);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * acc;
  }
  const HermitianEig eig = hermitian_eig(k);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += std::log(std::max(eig.values(i), 1e-300));
  return acc;
}

double harvest_raw(const CMatrix& gram, const CMatrix& s) {
  // tr(G^H G S) with both factors Hermitian.
  return (gram.cwiseProduct(s.transpose())).sum().real();
}

double mutual_information(const CMatrix& channel, const TransmitCovariance& cov) {
  if (channel.cols() != cov.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "mutual_information: channel columns must equal covariance size");
  return std::max(0.0, nats_to_bits(log_det_nats(channel, cov.matrix())));
}

double harvested_power(const CMatrix& channel, const TransmitCovariance& cov, double zeta) {
  if (channel.cols() != cov.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "harvested_power: channel columns must equal covariance size");
  if (!(zeta > 0.0 && zeta <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "harvested_power: zeta must lie in (0, 1]");
  const CMatrix gs = channel * cov.matrix() * channel.adjoint();
  return std::max(0.0, zeta * gs.trace().real());
}

// ---------------------------------------------------------------------------

std::optional<std::string> check_monotone(const REBoundary& b, double tol) {
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const REPoint& p = b.points[i];
    if (!std::isfinite(p.energy) || !std::isfinite(p.rate) || p.energy < 0.0 || p.rate < 0.0) {
      std::ostringstream msg;
      msg << "point " << i << " is not finite and non-negative";
      return msg.str();
    }
    if (i == 0) continue;
    const REPoint& q = b.points[i - 1];
    if (!(p.energy > q.energy)) {
      std::ostringstream msg;
      msg << "energy not strictly increasing at index " << i;
      return msg.str();
    }
    if (p.rate > q.rate + tol) {
      std::ostringstream msg;
      msg << "rate increases at index " << i << " (" << q.rate << " -> " << p.rate << ")";
      return msg.str();
    }
  }
  return std::nullopt;
}

double max_chord_deficit(const REBoundary& b) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < b.points.size(); ++i) {
    const REPoint& l = b.points[i - 1];
    const REPoint& m = b.points[i];
    const REPoint& r = b.points[i + 1];
    const double t = (m.energy - l.energy) / (r.energy - l.energy);
    const double chord = l.rate + t * (r.rate - l.rate);
    worst = std::max(worst, chord - m.rate);
  }
  return worst;
}

}  // namespace swipt
