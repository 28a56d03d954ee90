#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tiltlab/cli.hpp"
#include "tiltlab/diagnostics.hpp"
#include "tiltlab/hydro.hpp"
#include "tiltlab/special.hpp"
#include "tiltlab/verify.hpp"

namespace py = pybind11;
using namespace tiltlab;

namespace {

py::dict report_dict(const TestReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["value"] = r.value;
  d["threshold"] = r.threshold;
  d["upper"] = r.upper;
  d["pass"] = r.pass;
  d["sizes"] = r.sizes;
  d["seed"] = r.seed;
  d["note"] = r.note;
  d["suite"] = r.suite;
  d["family"] = r.family;
  return d;
}

// (times, values) with values shaped (draws, lines, points)
py::tuple draws_to_arrays(const std::vector<Ensemble>& draws) {
  if (draws.empty()) return py::make_tuple(py::array_t<double>(0), py::array_t<double>(0));
  const TimeGrid& g = draws.front().grid();
  const auto n = draws.front().lines(), m = g.points();
  py::array_t<double> t(m);
  auto tv = t.mutable_unchecked<1>();
  for (std::size_t j = 0; j < m; ++j) tv(j) = j + 1 == m ? g.right() : g.time(j);
  py::array_t<double> x({draws.size(), n, m});
  auto xv = x.mutable_unchecked<3>();
  for (std::size_t d = 0; d < draws.size(); ++d)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) xv(d, i, j) = draws[d].at(i, j);
  return py::make_tuple(t, x);
}

std::vector<Ensemble> draw(RunConfig c) {
  py::gil_scoped_release unlock;
  return draw_samples(std::move(c));
}

}  // namespace

PYBIND11_MODULE(_tiltlab, m) {
  m.doc() = "Area-tilted Brownian line ensembles: samplers, stationary law and checks.";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("airy_ai", py::vectorize(airy_ai), py::arg("x"));
  m.def("airy_first_zero", &airy_first_zero);
  m.def("fs_density", py::vectorize(fs_density), py::arg("x"), py::arg("a") = 2.0);
  m.def("fs_cdf", py::vectorize(fs_cdf), py::arg("x"), py::arg("a") = 2.0);
  m.def("fs_quantile", py::vectorize(fs_quantile), py::arg("u"), py::arg("a") = 2.0);
  m.def("fs_tail_exponent", &fs_tail_exponent, py::arg("t"), py::arg("a") = 2.0);

  m.def(
      "sample_one_line",
      [](double a, double T, double x, double y, std::size_t grid_points, std::size_t draws,
         const std::string& method, std::uint64_t seed, std::size_t sweeps,
         std::size_t block_points) {
        RunConfig c;
        c.command = "sample-one-line";
        c.a = a, c.T = T, c.x = x, c.y = y, c.grid_points = grid_points, c.draws = draws;
        c.method = method, c.seed = seed, c.sweeps = sweeps, c.block_points = block_points;
        return draws_to_arrays(draw(c));
      },
      py::arg("a") = 2.0, py::arg("T") = 1.0, py::arg("x") = 1.0, py::arg("y") = 1.0,
      py::arg("grid_points") = 129, py::arg("draws") = 1, py::arg("method") = "pbr",
      py::arg("seed") = 1, py::arg("sweeps") = 200, py::arg("block_points") = 65,
      "Returns (times, values) with values of shape (draws, 1, grid_points).");

  m.def(
      "sample_ensemble",
      [](double a, double lam, std::size_t n, double T, std::size_t grid_points, std::size_t draws,
         const std::string& boundary, std::uint64_t seed, std::size_t sweeps,
         std::size_t block_points) {
        RunConfig c;
        c.command = "sample-ensemble";
        c.a = a, c.lambda = lam, c.n = n, c.T = T, c.grid_points = grid_points, c.draws = draws;
        c.boundary = boundary, c.seed = seed, c.sweeps = sweeps, c.block_points = block_points;
        return draws_to_arrays(draw(c));
      },
      py::arg("a") = 2.0, py::arg("lam") = 2.0, py::arg("n") = 2, py::arg("T") = 1.0,
      py::arg("grid_points") = 129, py::arg("draws") = 1, py::arg("boundary") = "zero",
      py::arg("seed") = 1, py::arg("sweeps") = 200, py::arg("block_points") = 65,
      "Boundary is zero, flat:<h>, nu:<L>,<R> or rho:<K>.  Returns (times, values) with values "
      "of shape (draws, n, grid_points).");

  m.def(
      "ks_two_sample",
      [](std::vector<double> a, std::vector<double> b, double significance) {
        return report_dict(ks_two_sample(a, b, significance));
      },
      py::arg("a"), py::arg("b"), py::arg("significance") = 1e-3);

  m.def("tangency_location", &tangency_location, py::arg("T"), py::arg("alpha"), py::arg("a"));
  m.def(
      "hydro_limit_shape",
      [](double L, double R, double t) {
        return hydro_limit_shape(SlopePair(ExtendedReal::finite(L), ExtendedReal::finite(R)), t);
      },
      py::arg("L"), py::arg("R"), py::arg("t"));
  m.def("n0_threshold", &n0_threshold, py::arg("T"), py::arg("lam"));
  m.def(
      "light_path_scaffold",
      [](double T, double K, double lam, double delta, int k, std::vector<double> t) {
        const HydroGeometry g(T, K, lam, delta);
        const LightScaffold s = light_path_scaffold(g, k);
        std::vector<double> floor, path;
        for (double v : t) floor.push_back(s.floor(v)), path.push_back(s.path(v));
        py::dict d;
        d["n0"] = g.n0;
        d["S"] = s.S;
        d["xi"] = s.xi;
        d["xi_bar"] = s.xi_bar;
        d["bracket"] = py::make_tuple(s.bracket_lo, s.bracket_hi);
        d["floor"] = floor;
        d["path"] = path;
        return d;
      },
      py::arg("T"), py::arg("K"), py::arg("lam"), py::arg("delta"), py::arg("k"), py::arg("t"));

  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& suite, const std::string& budget, std::uint64_t seed,
         std::size_t threads) {
        Budget b = Budget::named(budget);
        if (threads) b.threads = threads;
        std::vector<TestReport> reports;
        {
          py::gil_scoped_release unlock;
          reports = run_suite(suite, b, seed);
        }
        py::list out;
        for (const auto& r : reports) out.append(report_dict(r));
        return out;
      },
      py::arg("suite"), py::arg("budget") = "smoke", py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "main",
      [](std::vector<std::string> argv) {
        argv.insert(argv.begin(), "tiltlab");
        std::vector<char*> ptrs;
        for (auto& s : argv) ptrs.push_back(s.data());
        py::gil_scoped_release unlock;
        return main_entry(static_cast<int>(ptrs.size()), ptrs.data());
      },
      py::arg("argv"), "Runs the command-line tool with the given arguments; returns the exit code.");
}
