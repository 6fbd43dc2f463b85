#include "swipt_re/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace swipt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kConfig, "config field '" + field + "': " + what);
}

const std::set<std::string> kKnownKeys = {
    "name",        "channel_source", "h",           "g",          "colocated",
    "m",           "n_id",           "n_eh",        "variance_id", "variance_eh",
    "seed",        "power",          "zeta",        "peak_power",  "noise",
    "siso_gain",   "schemes",        "n_points",    "corner_handling",
    "as_partition", "physical_units", "solver_tol"};

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) config_error(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(key, "must be finite");
  return x;
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

int get_int(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) config_error(key, "expected an integer");
  return v.get<int>();
}

CMatrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) config_error(field, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().is_array() ? j.front().size() : 0);
  if (cols == 0) config_error(field, "rows must be non-empty arrays of [re, im] pairs");
  CMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      config_error(field, "row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[c];
      const std::string where = field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        config_error(where, "expected [re, im]");
      out(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!all_finite(out)) config_error(field, "entries must be finite");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ordered_json finite_or_null(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

bool needs_colocated(Scheme s) {
  return s != Scheme::kSeparated && s != Scheme::kSISOCase;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kConfig, "config parse error at line " + std::to_string(line) +
                                        ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  for (const auto& item : j.items())
    if (!kKnownKeys.count(item.key())) config_error(item.key(), "unknown key");

  ScenarioConfig cfg;
  try {
    cfg.name = j.value("name", std::string("scenario"));
    if (!j.contains("channel_source")) config_error("channel_source", "missing");
    const std::string source = j.at("channel_source").get<std::string>();
    if (source == "explicit") {
      if (!j.contains("h")) config_error("h", "required for an explicit channel source");
      for (const char* k : {"m", "n_id", "n_eh", "variance_id", "variance_eh", "seed"})
        if (j.contains(k)) config_error(k, "only valid with channel_source \"rayleigh\"");
      cfg.explicit_h = parse_matrix(j.at("h"), "h");
      if (j.contains("g")) cfg.explicit_g = parse_matrix(j.at("g"), "g");
    } else if (source == "rayleigh") {
      for (const char* k : {"h", "g"})
        if (j.contains(k)) config_error(k, "only valid with channel_source \"explicit\"");
      RayleighSource r;
      for (const char* k : {"m", "n_id", "seed"})
        if (!j.contains(k)) config_error(k, "required for a rayleigh channel source");
      r.m = get_int(j, "m");
      r.n_id = get_int(j, "n_id");
      r.n_eh = j.contains("n_eh") ? get_int(j, "n_eh") : r.n_id;
      r.variance_id = number_or(j, "variance_id", 1.0);
      r.variance_eh = number_or(j, "variance_eh", 1.0);
      if (!j.at("seed").is_number_unsigned()) config_error("seed", "expected a non-negative integer");
      r.seed = j.at("seed").get<std::uint64_t>();
      if (r.m < 1) config_error("m", "must be >= 1");
      if (r.n_id < 1) config_error("n_id", "must be >= 1");
      if (r.n_eh < 1) config_error("n_eh", "must be >= 1");
      if (!(r.variance_id > 0.0)) config_error("variance_id", "must be > 0");
      if (!(r.variance_eh > 0.0)) config_error("variance_eh", "must be > 0");
      cfg.rayleigh = r;
    } else {
      config_error("channel_source", "expected \"explicit\" or \"rayleigh\"");
    }
    if (j.contains("colocated")) {
      if (!j.at("colocated").is_boolean()) config_error("colocated", "expected a boolean");
      cfg.colocated = j.at("colocated").get<bool>();
    }
    if (cfg.colocated && cfg.explicit_g) config_error("g", "not allowed when colocated is true");

    if (!j.contains("power")) config_error("power", "missing");
    cfg.power = get_number(j, "power");
    if (!(cfg.power > 0.0)) config_error("power", "must be > 0");
    cfg.zeta = number_or(j, "zeta", 1.0);
    if (!(cfg.zeta > 0.0 && cfg.zeta <= 1.0)) config_error("zeta", "must lie in (0, 1]");
    if (j.contains("peak_power")) {
      cfg.peak_power = get_number(j, "peak_power");
      if (!(*cfg.peak_power >= cfg.power)) config_error("peak_power", "must be >= power");
    }
    if (j.contains("noise")) {
      const json& n = j.at("noise");
      if (!n.is_object() || !n.contains("sigma_a_sq"))
        config_error("noise", "expected {\"sigma_a_sq\": x}");
      const double a = get_number(n, "sigma_a_sq");
      if (!(a >= 0.0 && a <= 1.0)) config_error("noise.sigma_a_sq", "must lie in [0, 1]");
      cfg.noise_split = NoiseSplit::from_antenna_noise(a);
    }
    cfg.siso_gain = number_or(j, "siso_gain", 0.0);

    if (!j.contains("schemes") || !j.at("schemes").is_array() || j.at("schemes").empty())
      config_error("schemes", "expected a non-empty array");
    std::set<Scheme> seen;
    for (const json& s : j.at("schemes")) {
      if (!s.is_string()) config_error("schemes", "entries must be strings");
      const auto scheme = scheme_from_string(s.get<std::string>());
      if (!scheme) config_error("schemes", "unknown scheme \"" + s.get<std::string>() + "\"");
      if (!seen.insert(*scheme).second)
        config_error("schemes", "duplicate scheme \"" + s.get<std::string>() + "\"");
      cfg.schemes.push_back(*scheme);
    }

    if (j.contains("n_points")) cfg.sweep.n_points = get_int(j, "n_points");
    if (j.contains("corner_handling")) {
      const std::string c = j.at("corner_handling").get<std::string>();
      if (c == "include") {
        cfg.sweep.corners = CornerHandling::kIncludeCorners;
      } else if (c == "interior") {
        cfg.sweep.corners = CornerHandling::kInteriorOnly;
      } else {
        config_error("corner_handling", "expected \"include\" or \"interior\"");
      }
    }
    try {
      cfg.sweep.validate();
    } catch (const Error& e) {
      config_error("n_points", e.what());
    }
    if (j.contains("as_partition")) {
      const json& a = j.at("as_partition");
      if (!a.is_array()) config_error("as_partition", "expected an array of 1-based antenna indices");
      for (const json& x : a) {
        if (!x.is_number_integer() || x.get<int>() < 1)
          config_error("as_partition", "indices are 1-based positive integers");
        cfg.as_partition.push_back(x.get<int>() - 1);
      }
    }
    if (j.contains("physical_units")) {
      const json& p = j.at("physical_units");
      if (!p.is_object()) config_error("physical_units", "expected an object");
      for (const auto& item : p.items())
        if (item.key() != "bandwidth_hz" && item.key() != "tx_power_dbm" &&
            item.key() != "eh_pathloss_db")
          config_error("physical_units." + item.key(), "unknown key");
      PhysicalUnits u;
      for (const char* k : {"bandwidth_hz", "tx_power_dbm", "eh_pathloss_db"})
        if (!p.contains(k)) config_error(std::string("physical_units.") + k, "missing");
      u.bandwidth_hz = get_number(p, "bandwidth_hz");
      u.tx_power_dbm = get_number(p, "tx_power_dbm");
      u.eh_pathloss_db = get_number(p, "eh_pathloss_db");
      if (!(u.bandwidth_hz > 0.0)) config_error("physical_units.bandwidth_hz", "must be > 0");
      cfg.physical_units = u;
    }
    cfg.solver_tol = number_or(j, "solver_tol", 1e-6);
    if (!(cfg.solver_tol > 0.0)) config_error("solver_tol", "must be > 0");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config type error: ") + e.what());
  }

  // Cross-field checks that need the channel dimensions.
  const int m = cfg.explicit_h ? static_cast<int>(cfg.explicit_h->cols()) : cfg.rayleigh->m;
  const int n_rx = cfg.explicit_h ? static_cast<int>(cfg.explicit_h->rows()) : cfg.rayleigh->n_id;
  if (cfg.explicit_g && cfg.explicit_g->cols() != m)
    config_error("g", "must have the same number of columns (transmit antennas) as h");
  for (Scheme s : cfg.schemes) {
    if (s == Scheme::kSeparated && cfg.colocated)
      config_error("schemes", "separated requires colocated = false");
    if (needs_colocated(s) && !cfg.colocated)
      config_error("schemes", std::string(to_string(s)) + " requires colocated = true");
    if (s == Scheme::kTS2Peak && !cfg.peak_power)
      config_error("peak_power", "required by scheme ts2_peak");
    if (s == Scheme::kSIMOClosed && m != 1)
      config_error("schemes", "simo_closed requires a single transmit antenna");
    if (s == Scheme::kSISOCase) {
      if (!cfg.noise_split) config_error("noise", "required by scheme siso_case");
      if (!(cfg.siso_gain > 0.0) && (m != 1 || n_rx != 1))
        config_error("siso_gain", "required unless h is 1x1");
    }
    if (s == Scheme::kAS && !cfg.as_partition.empty()) {
      for (int idx : cfg.as_partition)
        if (idx >= n_rx) config_error("as_partition", "index exceeds receive antennas");
    }
  }
  if (!cfg.colocated && !cfg.explicit_g && !cfg.rayleigh)
    config_error("g", "required for separated receivers");

  cfg.echo = j.dump();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

ChannelPair scenario_channels(const ScenarioConfig& cfg) {
  if (cfg.explicit_h) {
    if (cfg.colocated) return ChannelPair::colocated(*cfg.explicit_h);
    return ChannelPair::separated(*cfg.explicit_h, *cfg.explicit_g);
  }
  const RayleighSource& r = *cfg.rayleigh;
  CMatrix h = generate_rayleigh_channel(r.m, r.n_id, r.variance_id, r.seed);
  if (cfg.colocated) return ChannelPair::colocated(std::move(h));
  // The energy channel is drawn under a derived seed.
  CMatrix g = generate_rayleigh_channel(r.m, r.n_eh, r.variance_eh, r.seed ^ 0x9E3779B97F4A7C15ULL);
  return ChannelPair::separated(std::move(h), std::move(g));
}

ScenarioResult compute_scenario(const ScenarioConfig& cfg, const TraceOptions& opts_in) {
  TraceOptions opts = opts_in;
  opts.solver.tol = cfg.solver_tol;
  const ChannelPair channels = scenario_channels(cfg);
  const CMatrix& h = channels.h();

  ScenarioResult out;
  out.corners = compute_corners(channels, cfg.power);
  for (Scheme s : cfg.schemes) {
    SchemeResult r;
    r.label = std::string(to_string(s));
    switch (s) {
      case Scheme::kOuterBound:
        r.boundary = trace_colocated_outer(h, cfg.power, cfg.zeta, cfg.sweep, opts);
        break;
      case Scheme::kSeparated:
        r.boundary = trace_separated(channels, cfg.power, cfg.zeta, cfg.sweep, opts);
        break;
      case Scheme::kTS1:
        r.boundary = trace_ts1(h, cfg.power, cfg.zeta, cfg.sweep.n_points);
        break;
      case Scheme::kTS2:
        r.boundary = trace_ts2(h, cfg.power, cfg.zeta, cfg.sweep);
        break;
      case Scheme::kTS2Peak:
        r.boundary = trace_ts2(h, cfg.power, cfg.zeta, cfg.sweep, cfg.peak_power);
        break;
      case Scheme::kUPS:
        r.boundary = trace_ups(h, cfg.power, cfg.zeta, default_rho_sweep(), cfg.sweep, opts);
        break;
      case Scheme::kPS:
        r.boundary = trace_ps_general(h, cfg.power, cfg.zeta,
                                      default_split_candidates(static_cast<int>(h.rows())),
                                      cfg.sweep, opts);
        break;
      case Scheme::kAS:
        if (!cfg.as_partition.empty()) {
          r.boundary = trace_antenna_switching(
              h, cfg.power, cfg.zeta,
              AntennaPartition::make(static_cast<int>(h.rows()), cfg.as_partition), cfg.sweep,
              opts);
        } else {
          std::vector<SplitVector> cands;
          for (const AntennaPartition& p : enumerate_partitions(static_cast<int>(h.rows())))
            cands.push_back(p.as_split());
          r.boundary = trace_ps_general(h, cfg.power, cfg.zeta, cands, cfg.sweep, opts);
          r.boundary.scheme = Scheme::kAS;
        }
        break;
      case Scheme::kSIMOClosed:
        r.boundary = trace_simo_closed(h, cfg.power, cfg.zeta, cfg.sweep);
        break;
      case Scheme::kSISOCase: {
        const double gain = cfg.siso_gain > 0.0 ? cfg.siso_gain : std::norm(h(0, 0));
        r.boundary = trace_siso_ps_case(gain, cfg.power, *cfg.noise_split, cfg.sweep, cfg.zeta);
        break;
      }
    }
    out.all_converged = out.all_converged && r.boundary.all_converged();
    out.curves.push_back(std::move(r));
  }
  return out;
}

double energy_to_mw(double energy, const ScenarioConfig& cfg) {
  const PhysicalUnits& u = cfg.physical_units.value();
  const double tx_mw = std::pow(10.0, u.tx_power_dbm / 10.0);
  return energy / cfg.power * tx_mw * std::pow(10.0, -u.eh_pathloss_db / 10.0);
}

double rate_to_mbps(double rate, const ScenarioConfig& cfg) {
  return rate * cfg.physical_units.value().bandwidth_hz / 1e6;
}

std::string format_csv(const REBoundary& b, const ScenarioConfig& cfg) {
  std::string out = cfg.physical_units ? "energy,rate,converged,energy_mw,rate_mbps\n"
                                       : "energy,rate,converged\n";
  for (const REPoint& p : b.points) {
    out += fmt(p.energy) + "," + fmt(p.rate) + "," + (p.converged ? "1" : "0");
    if (cfg.physical_units)
      out += "," + fmt(energy_to_mw(p.energy, cfg)) + "," + fmt(rate_to_mbps(p.rate, cfg));
    out += "\n";
  }
  return out;
}

int run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                 const TraceOptions& opts) {
  const ScenarioResult res = compute_scenario(cfg, opts);

  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream f(out_dir / file, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + (out_dir / file).string());
    f << text;
  };

  ordered_json manifest;
  manifest["name"] = cfg.name;
  manifest["config"] = ordered_json::parse(cfg.echo);
  manifest["solver"] = {{"tol", cfg.solver_tol}, {"max_iterations", SolverOptions{}.max_iterations}};
  const Corners& c = res.corners;
  ordered_json corners = {{"q_max", c.q_max * cfg.zeta},
                          {"r_max", c.r_max},
                          {"q_id", c.q_id * cfg.zeta},
                          {"r_eh", c.r_eh}};
  if (cfg.physical_units) {
    corners["q_max_mw"] = energy_to_mw(c.q_max * cfg.zeta, cfg);
    corners["r_max_mbps"] = rate_to_mbps(c.r_max, cfg);
  }
  manifest["corners"] = corners;
  ordered_json curves = ordered_json::array();
  for (const SchemeResult& r : res.curves) {
    write(r.label + ".csv", format_csv(r.boundary, cfg));
    ordered_json failures = ordered_json::array();
    for (const PointFailure& f : r.boundary.meta.failures)
      failures.push_back({{"index", f.index}, {"energy", finite_or_null(f.energy)},
                          {"message", f.message}});
    curves.push_back({{"scheme", r.label},
                      {"file", r.label + ".csv"},
                      {"points", r.boundary.points.size()},
                      {"converged", r.boundary.all_converged()},
                      {"failures", failures},
                      {"notes", r.boundary.meta.notes}});
  }
  manifest["curves"] = curves;
  manifest["all_converged"] = res.all_converged;
  write("manifest.json", manifest.dump(2) + "\n");
  return res.all_converged ? kExitOk : kExitNonConvergence;
}

}  // namespace swipt
