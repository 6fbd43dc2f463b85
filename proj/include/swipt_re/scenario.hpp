#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swipt_re/core.hpp"
#include "swipt_re/regions.hpp"

namespace swipt {

/// Entries are CSCG: real and imaginary parts independent N(0, variance / 2),
/// drawn row-major from GaussianSource(seed) (mt19937_64 + Box-Muller).
CMatrix generate_rayleigh_channel(int m, int n, double variance, std::uint64_t seed);

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNonConvergence = 3,
  kExitInfeasible = 4,
};

struct RayleighSource {
  int m = 0;
  int n_id = 0;
  int n_eh = 0;
  double variance_id = 1.0;
  double variance_eh = 1.0;
  std::uint64_t seed = 0;
};

struct PhysicalUnits {
  double bandwidth_hz = 0.0;
  double tx_power_dbm = 0.0;
  double eh_pathloss_db = 0.0;
};

struct ScenarioConfig {
  std::string name;
  // Exactly one of explicit_h / rayleigh is set.
  std::optional<CMatrix> explicit_h;
  std::optional<CMatrix> explicit_g;
  std::optional<RayleighSource> rayleigh;
  bool colocated = false;

  double power = 0.0;
  double zeta = 1.0;
  std::optional<double> peak_power;
  std::optional<NoiseSplit> noise_split;
  double siso_gain = 0.0;  // kSISOCase only
  std::vector<Scheme> schemes;
  SweepSpec sweep;
  std::vector<int> as_partition;  // 0-based harvesting antennas for kAS
  std::optional<PhysicalUnits> physical_units;
  double solver_tol = 1e-6;
  std::string echo;  // canonical JSON of the parsed input
};

/// Parses the flat JSON config. Throws Error(kConfig) with the offending
/// field, or the line/column for malformed JSON.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Channels resolved from the config's source.
ChannelPair scenario_channels(const ScenarioConfig& cfg);

struct SchemeResult {
  REBoundary boundary;
  std::string label;  // file stem
};

struct ScenarioResult {
  Corners corners;
  std::vector<SchemeResult> curves;
  bool all_converged = true;
};

ScenarioResult compute_scenario(const ScenarioConfig& cfg, const TraceOptions& opts = {});

/// CSV text for one curve; physical columns appear only with physical_units.
std::string format_csv(const REBoundary& b, const ScenarioConfig& cfg);

/// Traces every scheme and writes <label>.csv files plus manifest.json.
/// Returns kExitOk iff every sweep point converged.
int run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                 const TraceOptions& opts = {});

/// Physical conversions used for the optional CSV columns.
double energy_to_mw(double energy, const ScenarioConfig& cfg);
double rate_to_mbps(double rate, const ScenarioConfig& cfg);

}  // namespace swipt
