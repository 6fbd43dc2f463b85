#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swipt_re/core.hpp"

namespace swipt {

/// Brute-force reference values for testing the solvers. Nothing here shares
/// code with the dual iteration.
struct OracleResult {
  double best_rate = 0.0;  // bits (or harvested power, for the P1 search)
  TransmitCovariance best_covariance;
  std::int64_t grid_size = 0;
  double resolution = 0.0;
};

/// Exhaustive simplex grid over diagonal power vectors for diagonal H and G
/// (diagonal entries `h_diag`, `g_diag`). Step = resolution * P per axis.
/// Since rate and harvest both increase in every p_i, only grid points that
/// spend the whole budget can be maximal, so the last coordinate takes the
/// remainder. Throws kInfeasible when no grid point meets q_bar.
OracleResult grid_search_p3_diag(const RVector& h_diag, const RVector& g_diag, double power,
                                 double q_bar, double resolution = 1e-3);

/// Grid over real symmetric 2x2 covariances [[a, c], [c, P - a]] for real
/// 2x2 channels; c sweeps its PSD range at the same relative resolution.
OracleResult grid_search_p3_real2x2(const Eigen::Matrix2d& h, const Eigen::Matrix2d& g,
                                    double power, double q_bar, double resolution = 1e-3);

/// Largest P ||G v||^2 over random unit vectors v (complex Gaussian, seeded).
/// `injected` is evaluated first when given.
OracleResult random_rank_search_p1(const CMatrix& g, double power, std::int64_t n_samples,
                                   std::uint64_t seed,
                                   const std::optional<CVector>& injected = std::nullopt);

/// Primal projected-gradient ascent on the spectraplex {S >= 0, tr S = P}
/// with a bisected harvest price, from `n_starts` random starts; the best
/// covariance is made exactly feasible before reporting. A lower bound on
/// the optimal rate for non-diagonal instances.
OracleResult projected_ascent_p3(const ChannelPair& channels, double power, double q_bar,
                                 int n_starts, std::uint64_t seed);

struct ContainmentViolation {
  double energy = 0.0;
  double inner_rate = 0.0;
  double outer_rate = 0.0;
};

struct ContainmentReport {
  bool contained = true;
  double max_excess = 0.0;  // max(inner - outer) over checked samples
  int checked = 0;
  std::vector<ContainmentViolation> violations;
};

/// Linear interpolation of the outer boundary at every inner energy. Energies
/// below the outer's first sample take its first rate (regions are closed
/// downward in energy); inner energies beyond the outer's last sample by more
/// than tol are violations unless the inner rate there is <= tol.
/// Throws kInvalidArgument when the energy ranges are disjoint.
ContainmentReport region_contains(const REBoundary& outer, const REBoundary& inner, double tol);

/// Outer boundary rate at `energy` under the same conventions.
double interpolate_rate(const REBoundary& b, double energy);

}  // namespace swipt
