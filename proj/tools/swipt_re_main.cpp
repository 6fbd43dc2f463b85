#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "swipt_re/scenario.hpp"
#include "swipt_re/solvers.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace swipt;

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInfeasible:
      return kExitInfeasible;
    default:
      return kExitConfig;
  }
}

ordered_json matrix_json(const CMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix read_matrix(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw Error(ErrorCode::kConfig, std::string("channel field '") + field + "': expected rows");
  CMatrix out(j.size(), j.front().size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j.front().size())
      throw Error(ErrorCode::kConfig, std::string("channel field '") + field + "': ragged rows");
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorCode::kConfig, std::string("channel field '") + field + "': expected [re, im]");
      out(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return out;
}

int cmd_run(const std::string& config, const std::string& out_dir) {
  try {
    const ScenarioConfig cfg = load_scenario(config);
    const int code = run_scenario(cfg, out_dir);
    if (code == kExitNonConvergence)
      std::cerr << "swipt-re: some sweep points did not converge; see manifest.json\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "swipt-re: " << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_solve_p3(const std::string& channel_file, double power, double q_bar, double tol,
                 int max_iterations) {
  try {
    std::ifstream in(channel_file);
    if (!in) throw Error(ErrorCode::kConfig, "cannot open channel file " + channel_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfig, std::string("channel file: ") + e.what());
    }
    if (!j.contains("h")) throw Error(ErrorCode::kConfig, "channel field 'h': missing");
    const CMatrix h = read_matrix(j.at("h"), "h");
    const ChannelPair channels = j.contains("g")
                                     ? ChannelPair::separated(h, read_matrix(j.at("g"), "g"))
                                     : ChannelPair::colocated(h);
    SolverOptions opts;
    opts.tol = tol;
    opts.max_iterations = max_iterations;
    const P3Solution sol = solve_p3(channels, power, q_bar, opts);
    ordered_json out = {{"rate", sol.rate},
                        {"harvested", sol.harvested},
                        {"lambda", sol.dual.lambda},
                        {"mu", sol.dual.mu},
                        {"iterations", sol.iterations},
                        {"converged", sol.converged},
                        {"regime", std::string(to_string(sol.regime))},
                        {"covariance", matrix_json(sol.covariance.matrix())}};
    std::cout << out.dump(2) << "\n";
    return sol.converged ? kExitOk : kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "swipt-re: " << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_gen_channel(int m, int n, double variance, std::uint64_t seed) {
  try {
    const CMatrix h = generate_rayleigh_channel(m, n, variance, seed);
    std::cout << ordered_json{{"h", matrix_json(h)}}.dump() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "swipt-re: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-energy region tracing for MIMO broadcast with power transfer"};
  app.require_subcommand(1);

  std::string config, out_dir;
  auto* run = app.add_subcommand("run", "Trace every scheme in a scenario config");
  run->add_option("config", config, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string channel_file;
  double power = 0.0, q_bar = 0.0, tol = 1e-6;
  int max_iterations = SolverOptions{}.max_iterations;
  auto* solve = app.add_subcommand("solve-p3", "Maximize rate subject to a harvest floor");
  solve->add_option("--channel", channel_file, "JSON file with h (and optional g)")->required();
  solve->add_option("--power", power, "Transmit power budget")->required();
  solve->add_option("--qbar", q_bar, "Harvested power floor")->required();
  solve->add_option("--tol", tol, "Solver tolerance");
  solve->add_option("--max-iterations", max_iterations, "Ellipsoid iteration cap")
      ->check(CLI::PositiveNumber);

  int m = 0, n = 0;
  double variance = 1.0;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen-channel", "Print a seeded Rayleigh channel as JSON");
  gen->add_option("--m", m, "Transmit antennas")->required();
  gen->add_option("--n", n, "Receive antennas")->required();
  gen->add_option("--var", variance, "Per-element variance")->required();
  gen->add_option("--seed", seed, "Seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(config, out_dir);
  if (*solve) return cmd_solve_p3(channel_file, power, q_bar, tol, max_iterations);
  return cmd_gen_channel(m, n, variance, seed);
}
