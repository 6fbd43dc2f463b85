#pragma once

#include "swipt_re/core.hpp"

namespace swipt {

/// Dual variables of the rate-maximization problem under a harvested-power
/// floor: lambda prices the harvest constraint, mu the transmit budget.
/// The Lagrangian is bounded only on the open cone mu > lambda * g1.
struct DualPoint {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Relative margin used to keep iterates strictly inside mu > lambda * g1.
inline constexpr double kDualFeasMargin = 1e-9;

bool dual_feasible(const DualPoint& d, double g1);

struct WaterfillResult {
  RVector powers;            // aligned with the input gains
  double water_level = 0.0;  // nu, in the natural-log convention p = (nu - 1/h)^+
  double rate = 0.0;         // bits
};

/// Capacity-achieving power allocation over parallel channels with power
/// gains `gains`. Exact: active set found by sorting, no bisection.
WaterfillResult waterfill(const RVector& gains, double power);

struct SolverOptions {
  double tol = 1e-6;
  int max_iterations = 5000;
};

// ---------------------------------------------------------------------------
// Corner problems
// ---------------------------------------------------------------------------

struct P1Solution {
  TransmitCovariance covariance;
  double q_max = 0.0;
  CVector v1;
  bool degenerate = false;  // G == 0, v1 is an arbitrary unit vector
};

/// Energy beamforming: S = P v1 v1^H along the top right-singular vector of G.
P1Solution solve_p1(const ChannelPair& channels, double power);

struct P2Solution {
  TransmitCovariance covariance;
  WaterfillResult waterfill;
  bool degenerate = false;  // H == 0
};

/// Spatial multiplexing with water-filling over the eigenmodes of H.
P2Solution solve_p2(const ChannelPair& channels, double power);

/// The two end points of the separated-receiver boundary (zeta = 1).
struct Corners {
  double r_max = 0.0;  // bits, from solve_p2
  double q_id = 0.0;   // harvest of the water-filling covariance
  double r_eh = 0.0;   // bits, best rate at the energy-maximizing corner
  double q_max = 0.0;  // g1 * P
};

Corners compute_corners(const ChannelPair& channels, double power);

// ---------------------------------------------------------------------------
// Rate maximization under a harvest floor
// ---------------------------------------------------------------------------

enum class P3Regime {
  kUnconstrained,  // q_bar <= Q_ID, water-filling is optimal
  kInterior,       // dual iteration
  kEnergyCorner,   // q_bar within 1e-9 (relative) of Q_max
  kClosedForm,     // MISO/MISO closed form
  kDegenerate,     // H == 0: every feasible covariance has rate 0
};

std::string_view to_string(P3Regime regime);

struct P3Solution {
  TransmitCovariance covariance;
  double rate = 0.0;       // bits, equals mutual_information(H, covariance)
  double harvested = 0.0;  // tr(G S G^H), zeta = 1
  DualPoint dual;
  int iterations = 0;
  bool converged = false;
  P3Regime regime = P3Regime::kInterior;
  /// Complementary-slackness products at the returned dual point, in nats.
  double energy_slackness = 0.0;
  double power_slackness = 0.0;
};

/// Lagrangian maximizer for fixed duals (natural-log rate):
/// S = A^{-1/2} V diag((1 - 1/h~)^+) V^H A^{-1/2}, A = mu I - lambda G^H G,
/// with V, h~ from the SVD of H A^{-1/2}. Throws kDualInfeasible when the
/// dual point is outside mu > lambda g1. The returned budget is tr(S).
TransmitCovariance solve_p3_dual_inner(const ChannelPair& channels, const DualPoint& dual);

/// General MIMO solver: ellipsoid method on (lambda, mu).
P3Solution solve_p3(const ChannelPair& channels, double power, double q_bar,
                    const SolverOptions& opts = {});

/// Single-antenna information receiver (H is 1 x M): same dual iteration with
/// the rank-one inner maximizer S = A^{-1} h c h^H A^{-1}.
P3Solution solve_p3_miso(const ChannelPair& channels, double power, double q_bar,
                         const SolverOptions& opts = {});

/// MISO links to both receivers, H = h^H and G = g^H. Closed form, no iteration.
P3Solution solve_p3_miso_miso_closed(const CVector& h, const CVector& g, double power,
                                     double q_bar);

/// Co-located receivers (G = H): modified water-filling
/// p_i = (1/(mu - lambda h_i) - 1/h_i)^+ on the eigenmodes of H.
P3Solution solve_p3_colocated(const CMatrix& h, double power, double q_bar,
                              const SolverOptions& opts = {});

/// Per-mode powers of the co-located inner maximizer (natural-log convention).
RVector modified_waterfill(const RVector& gains, const DualPoint& dual);

}  // namespace swipt
