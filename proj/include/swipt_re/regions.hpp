#pragma once

#include <optional>
#include <vector>

#include "swipt_re/core.hpp"
#include "swipt_re/solvers.hpp"

namespace swipt {

enum class CornerHandling { kIncludeCorners, kInteriorOnly };

struct SweepSpec {
  int n_points = 101;
  CornerHandling corners = CornerHandling::kIncludeCorners;

  void validate() const;
};

/// Per-antenna power-splitting ratios, each in [0, 1].
class SplitVector {
 public:
  static SplitVector make(RVector rho);
  static SplitVector uniform(int n_rx, double rho);

  const RVector& rho() const { return rho_; }
  int size() const { return static_cast<int>(rho_.size()); }
  bool is_uniform() const;

 private:
  explicit SplitVector(RVector rho) : rho_(std::move(rho)) {}
  RVector rho_;
};

/// Receive antennas (0-based) switched to the energy harvester.
class AntennaPartition {
 public:
  static AntennaPartition make(int n_rx, std::vector<int> omega);

  int n_rx() const { return n_rx_; }
  const std::vector<int>& omega() const { return omega_; }
  SplitVector as_split() const;

 private:
  AntennaPartition(int n, std::vector<int> omega) : n_rx_(n), omega_(std::move(omega)) {}
  int n_rx_ = 0;
  std::vector<int> omega_;
};

struct TraceOptions {
  SolverOptions solver;
  /// Worker threads for independent sweep points; 0 reads SWIPT_RE_THREADS
  /// (0 or unset there means hardware concurrency).
  int threads = 0;
};

struct UpsOptions {
  /// Per-energy refinement over rho: adds the smallest feasible rho
  /// Q / (h1 P) and a golden-section search around the best sampled rho.
  bool refine = true;
};

// ---------------------------------------------------------------------------
// Separated receivers and the co-located outer bound
// ---------------------------------------------------------------------------

REBoundary trace_separated(const ChannelPair& channels, double power, double zeta,
                           const SweepSpec& sweep, const TraceOptions& opts = {});

REBoundary trace_colocated_outer(const CMatrix& h, double power, double zeta,
                                 const SweepSpec& sweep, const TraceOptions& opts = {});

// ---------------------------------------------------------------------------
// Time switching
// ---------------------------------------------------------------------------

/// Fixed per-slot budget: straight line from (0, R_max) to (Q_max, 0).
REBoundary trace_ts1(const CMatrix& h, double power, double zeta, int n_points = 101);

/// Flexible average budget, optionally with a per-slot peak budget.
REBoundary trace_ts2(const CMatrix& h, double power, double zeta, const SweepSpec& sweep,
                     std::optional<double> peak_power = std::nullopt);

/// TS2 boundary rate (bits) at harvested power q with eigen gains `gains`
/// (non-increasing). q must lie in [0, h1 P].
double ts2_rate(const RVector& gains, double power, double q,
                std::optional<double> peak_power = std::nullopt);

// ---------------------------------------------------------------------------
// Power splitting
// ---------------------------------------------------------------------------

std::vector<double> default_rho_sweep(int n = 51);

REBoundary trace_ups(const CMatrix& h, double power, double zeta,
                     const std::vector<double>& rho_sweep, const SweepSpec& qbar_sweep,
                     const TraceOptions& opts = {}, const UpsOptions& ups = {});

/// Default candidates: a per-antenna grid of `per_antenna` values when
/// n_rx <= 2, the uniform sweep, and every antenna partition (n_rx <= 8).
std::vector<SplitVector> default_split_candidates(int n_rx, int per_antenna = 11,
                                                  int uniform_points = 51);

REBoundary trace_ps_general(const CMatrix& h, double power, double zeta,
                            const std::vector<SplitVector>& candidates,
                            const SweepSpec& qbar_sweep, const TraceOptions& opts = {});

/// All 2^N partitions for N <= 8.
std::vector<AntennaPartition> enumerate_partitions(int n_rx);

REBoundary trace_antenna_switching(const CMatrix& h, double power, double zeta,
                                   const AntennaPartition& partition,
                                   const SweepSpec& qbar_sweep, const TraceOptions& opts = {});

/// SIMO (M = 1): R(Q) = log2(1 + ||h||^2 P - Q) on [0, ||h||^2 P].
REBoundary trace_simo_closed(const CMatrix& h, double power, double zeta,
                             const SweepSpec& sweep);

/// SISO power splitting for the three antenna/processing noise regimes;
/// `gain` is the channel power gain h.
REBoundary trace_siso_ps_case(double gain, double power, const NoiseSplit& noise,
                              const SweepSpec& sweep, double zeta = 1.0);

/// SNR at the decoder after splitting a fraction rho to the harvester.
double siso_ps_snr(double gain, double power, double rho, const NoiseSplit& noise);

}  // namespace swipt
