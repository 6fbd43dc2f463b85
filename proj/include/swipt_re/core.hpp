#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace swipt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  kDimensionMismatch,
  kNotPsd,
  kNonFinite,
  kInvalidArgument,
  kInfeasible,
  kDualInfeasible,
  kConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Tolerances shared by the contracts below.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kTraceTol = 1e-8;

// ---------------------------------------------------------------------------
// Linear algebra contracts
// ---------------------------------------------------------------------------

/// Reduced SVD A = U diag(s) V^H with min(rows, cols) columns.
///
/// Singular values are non-increasing. Each right-singular vector is rotated
/// so its first non-negligible entry is real and positive, and the matching
/// left vector gets the same rotation, which keeps U diag(s) V^H unchanged and
/// makes repeated runs on identical input agree bit-wise.
struct Svd {
  CMatrix u;
  RVector singular_values;
  CMatrix v;
};

Svd svd(const CMatrix& a);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues non-increasing,
/// eigenvectors under the same phase convention as svd().
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};

HermitianEig hermitian_eig(const CMatrix& a);

bool all_finite(const CMatrix& a);
double hermitian_defect(const CMatrix& a);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Information channel H (N_ID x M) and energy channel G (N_EH x M).
class ChannelPair {
 public:
  static ChannelPair separated(CMatrix h, CMatrix g);
  static ChannelPair colocated(CMatrix h);

  const CMatrix& h() const { return h_; }
  const CMatrix& g() const { return g_; }
  bool colocated() const { return colocated_; }
  int tx_antennas() const { return static_cast<int>(h_.cols()); }

  const Svd& h_svd() const { return h_svd_; }
  const Svd& g_svd() const { return g_svd_; }

  /// Eigenvalues of H^H H (h_1 >= h_2 >= ...), i.e. squared singular values.
  RVector h_gains() const;
  /// Eigenvalues of G^H G.
  RVector g_gains() const;
  double h1() const;
  double g1() const;

 private:
  ChannelPair(CMatrix h, CMatrix g, bool colocated);

  CMatrix h_;
  CMatrix g_;
  bool colocated_ = false;
  Svd h_svd_;
  Svd g_svd_;
};

/// Hermitian PSD transmit covariance with its trace budget.
class TransmitCovariance {
 public:
  /// Validates, symmetrizes and clamps eigenvalues in [-1e-10, 0) to zero.
  /// Throws kNotPsd / kInvalidArgument on violations.
  static TransmitCovariance make(const CMatrix& s, double power_budget);
  static TransmitCovariance zero(int m, double power_budget);

  const CMatrix& matrix() const { return s_; }
  double power_budget() const { return budget_; }
  double trace() const { return s_.trace().real(); }
  int dim() const { return static_cast<int>(s_.rows()); }

 private:
  TransmitCovariance(CMatrix s, double budget) : s_(std::move(s)), budget_(budget) {}

  CMatrix s_;
  double budget_ = 0.0;
};

struct REPoint {
  double energy = 0.0;
  double rate = 0.0;
  bool converged = true;
};

enum class Scheme {
  kOuterBound,
  kSeparated,
  kTS1,
  kTS2,
  kTS2Peak,
  kUPS,
  kPS,
  kAS,
  kSIMOClosed,
  kSISOCase,
};

std::string_view to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view name);
/// Schemes whose region is convex, so the boundary must pass the chord test.
bool is_convex_scheme(Scheme scheme);

struct PointFailure {
  int index = 0;
  double energy = 0.0;
  std::string message;
};

struct BoundaryMetadata {
  int sweep_points = 0;
  double solver_tol = 0.0;
  std::vector<PointFailure> failures;
  std::vector<std::string> notes;
};

/// A swept (energy, rate) boundary, energy strictly increasing.
struct REBoundary {
  Scheme scheme = Scheme::kSeparated;
  std::vector<REPoint> points;
  BoundaryMetadata meta;

  bool all_converged() const;
  double max_energy() const;
};

struct NoiseSplit {
  double sigma_a_sq = 0.0;
  double sigma_p_sq = 1.0;

  /// sigma_p^2 = 1 - sigma_a^2.
  static NoiseSplit from_antenna_noise(double sigma_a_sq);
};

// ---------------------------------------------------------------------------
// Rate and energy evaluation
// ---------------------------------------------------------------------------

/// log2 det(I + H S H^H) in bits per channel use.
double mutual_information(const CMatrix& channel, const TransmitCovariance& cov);

/// zeta * tr(G S G^H).
double harvested_power(const CMatrix& channel, const TransmitCovariance& cov,
                       double zeta = 1.0);

// Natural-log variants on raw matrices, used inside the solvers.
double log_det_nats(const CMatrix& channel, const CMatrix& s);
double harvest_raw(const CMatrix& gram, const CMatrix& s);

inline constexpr double kLn2 = 0.69314718055994530942;
inline double nats_to_bits(double nats) { return nats / kLn2; }

// ---------------------------------------------------------------------------
// Boundary invariants
// ---------------------------------------------------------------------------

/// Empty when energy is strictly increasing and rate non-increasing
/// (rate slack `tol`), otherwise a description of the first violation.
std::optional<std::string> check_monotone(const REBoundary& b, double tol = 1e-9);

/// Largest amount by which an interior point falls below the chord of its
/// neighbours. Zero (or negative) for a concave point set.
double max_chord_deficit(const REBoundary& b);

}  // namespace swipt
