#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swipt_re/oracle.hpp"
#include "swipt_re/regions.hpp"
#include "swipt_re/scenario.hpp"
#include "swipt_re/solvers.hpp"

namespace py = pybind11;
using namespace swipt;

namespace {

ChannelPair channel_pair(const CMatrix& h, const std::optional<CMatrix>& g) {
  return g ? ChannelPair::separated(h, *g) : ChannelPair::colocated(h);
}

py::dict boundary_dict(const REBoundary& b) {
  std::vector<double> e, r;
  std::vector<bool> c;
  for (const REPoint& p : b.points) {
    e.push_back(p.energy);
    r.push_back(p.rate);
    c.push_back(p.converged);
  }
  py::dict d;
  d["scheme"] = std::string(to_string(b.scheme));
  d["energy"] = e;
  d["rate"] = r;
  d["converged"] = c;
  return d;
}

SweepSpec sweep_of(int n_points) {
  SweepSpec s;
  s.n_points = n_points;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate-energy region solvers";

  py::register_exception<Error>(m, "SwiptError", PyExc_ValueError);

  m.def("generate_rayleigh_channel", &generate_rayleigh_channel, py::arg("m"), py::arg("n"),
        py::arg("variance"), py::arg("seed"));

  m.def("waterfill", [](const RVector& gains, double power) {
    const WaterfillResult w = waterfill(gains, power);
    return py::make_tuple(w.powers, w.water_level, w.rate);
  }, py::arg("gains"), py::arg("power"));

  m.def("solve_p1", [](const CMatrix& h, std::optional<CMatrix> g, double power) {
    const P1Solution s = solve_p1(channel_pair(h, g), power);
    return py::make_tuple(s.covariance.matrix(), s.q_max);
  }, py::arg("h"), py::arg("g") = py::none(), py::arg("power"));

  m.def("solve_p2", [](const CMatrix& h, std::optional<CMatrix> g, double power) {
    const P2Solution s = solve_p2(channel_pair(h, g), power);
    return py::make_tuple(s.covariance.matrix(), s.waterfill.rate);
  }, py::arg("h"), py::arg("g") = py::none(), py::arg("power"));

  m.def("compute_corners", [](const CMatrix& h, std::optional<CMatrix> g, double power) {
    const Corners c = compute_corners(channel_pair(h, g), power);
    py::dict d;
    d["r_max"] = c.r_max;
    d["q_id"] = c.q_id;
    d["r_eh"] = c.r_eh;
    d["q_max"] = c.q_max;
    return d;
  }, py::arg("h"), py::arg("g") = py::none(), py::arg("power"));

  m.def("solve_p3", [](const CMatrix& h, std::optional<CMatrix> g, double power, double q_bar,
                       double tol) {
    SolverOptions opts;
    opts.tol = tol;
    const P3Solution s = solve_p3(channel_pair(h, g), power, q_bar, opts);
    py::dict d;
    d["covariance"] = s.covariance.matrix();
    d["rate"] = s.rate;
    d["harvested"] = s.harvested;
    d["lambda"] = s.dual.lambda;
    d["mu"] = s.dual.mu;
    d["iterations"] = s.iterations;
    d["converged"] = s.converged;
    d["regime"] = std::string(to_string(s.regime));
    return d;
  }, py::arg("h"), py::arg("g") = py::none(), py::arg("power"), py::arg("q_bar"),
     py::arg("tol") = 1e-6);

  m.def("trace_separated", [](const CMatrix& h, const CMatrix& g, double power, double zeta,
                              int n_points) {
    return boundary_dict(trace_separated(ChannelPair::separated(h, g), power, zeta,
                                         sweep_of(n_points)));
  }, py::arg("h"), py::arg("g"), py::arg("power"), py::arg("zeta") = 1.0,
     py::arg("n_points") = 101);

  m.def("trace_colocated_outer", [](const CMatrix& h, double power, double zeta, int n_points) {
    return boundary_dict(trace_colocated_outer(h, power, zeta, sweep_of(n_points)));
  }, py::arg("h"), py::arg("power"), py::arg("zeta") = 1.0, py::arg("n_points") = 101);

  m.def("trace_ts1", [](const CMatrix& h, double power, double zeta, int n_points) {
    return boundary_dict(trace_ts1(h, power, zeta, n_points));
  }, py::arg("h"), py::arg("power"), py::arg("zeta") = 1.0, py::arg("n_points") = 101);

  m.def("trace_ts2", [](const CMatrix& h, double power, double zeta, int n_points,
                        std::optional<double> peak) {
    return boundary_dict(trace_ts2(h, power, zeta, sweep_of(n_points), peak));
  }, py::arg("h"), py::arg("power"), py::arg("zeta") = 1.0, py::arg("n_points") = 101,
     py::arg("peak_power") = py::none());

  m.def("trace_ups", [](const CMatrix& h, double power, double zeta, int n_points) {
    return boundary_dict(trace_ups(h, power, zeta, default_rho_sweep(), sweep_of(n_points)));
  }, py::arg("h"), py::arg("power"), py::arg("zeta") = 1.0, py::arg("n_points") = 101);

  m.def("trace_simo_closed", [](const CMatrix& h, double power, double zeta, int n_points) {
    return boundary_dict(trace_simo_closed(h, power, zeta, sweep_of(n_points)));
  }, py::arg("h"), py::arg("power"), py::arg("zeta") = 1.0, py::arg("n_points") = 101);

  m.def("grid_search_p3_diag", [](const RVector& h_diag, const RVector& g_diag, double power,
                                  double q_bar, double resolution) {
    return grid_search_p3_diag(h_diag, g_diag, power, q_bar, resolution).best_rate;
  }, py::arg("h_diag"), py::arg("g_diag"), py::arg("power"), py::arg("q_bar"),
     py::arg("resolution") = 1e-3);

  m.def("run_scenario", [](const std::string& config_path, const std::string& out_dir) {
    return run_scenario(load_scenario(config_path), out_dir);
  }, py::arg("config_path"), py::arg("out_dir"));
}
