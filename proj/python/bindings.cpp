#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "racetrack/dynamics.hpp"
#include "racetrack/equilibrium.hpp"
#include "racetrack/errors.hpp"
#include "racetrack/experiments.hpp"
#include "racetrack/geometry.hpp"
#include "racetrack/spectral.hpp"

namespace py = pybind11;
using namespace racetrack;

namespace {

PopulationField as_population(const Grid& grid, const Field& values) {
  PopulationField field{values};
  field.validate(grid);
  return field;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Racetrack core-periphery model: linear stability, equilibrium and dynamics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double mu, double sigma, double eta, double tau_a, double tau_m, double radius, double gamma) {
             ModelParams p{mu, sigma, eta, tau_a, tau_m, radius, gamma};
             p.validate();
             return p;
           }),
           py::arg("mu") = 0.5, py::arg("sigma") = 3.0, py::arg("eta") = 2.0, py::arg("tau_a") = 2.0,
           py::arg("tau_m") = 4.0, py::arg("radius") = 1.0, py::arg("gamma") = 1.0)
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("eta", &ModelParams::eta)
      .def_readwrite("tau_a", &ModelParams::tau_a)
      .def_readwrite("tau_m", &ModelParams::tau_m)
      .def_readwrite("radius", &ModelParams::radius)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("beta", &ModelParams::beta)
      .def_property_readonly("no_black_hole", &ModelParams::no_black_hole)
      .def("with_tau_m", &ModelParams::with_tau_m)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(mu=" + std::to_string(p.mu) + ", sigma=" + std::to_string(p.sigma) +
               ", eta=" + std::to_string(p.eta) + ", tau_a=" + std::to_string(p.tau_a) +
               ", tau_m=" + std::to_string(p.tau_m) + ", radius=" + std::to_string(p.radius) +
               ", gamma=" + std::to_string(p.gamma) + ")";
      });

  // geometry
  py::class_<Grid>(m, "Grid")
      .def(py::init<int, double>(), py::arg("nodes"), py::arg("radius") = 1.0)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("radius", &Grid::radius)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("weight", &Grid::weight)
      .def_property_readonly("angles", &Grid::angles)
      .def("distances", &Grid::distances)
      .def("integrate", &Grid::integrate);

  // spectral
  m.def("exp_kernel_mass", &exp_kernel_mass, py::arg("decay"), py::arg("radius"));
  m.def("h_coefficient", &h_coefficient, py::arg("n"), py::arg("decay"), py::arg("radius"));

  py::class_<HomogeneousState>(m, "HomogeneousState")
      .def_readonly("lambda_", &HomogeneousState::lambda)
      .def_readonly("phi", &HomogeneousState::phi)
      .def_readonly("wage", &HomogeneousState::wage)
      .def_readonly("income", &HomogeneousState::income)
      .def_readonly("price_agri", &HomogeneousState::price_agri)
      .def_readonly("price_manu", &HomogeneousState::price_manu)
      .def_readonly("real_wage", &HomogeneousState::real_wage)
      .def_readonly("mass_alpha", &HomogeneousState::mass_alpha)
      .def_readonly("mass_beta", &HomogeneousState::mass_beta);
  m.def("homogeneous_state", &homogeneous_state, py::arg("params"), py::arg("wage") = 1.0);

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("n", &SpectralResult::n)
      .def_readonly("h_alpha", &SpectralResult::h_alpha)
      .def_readonly("h_beta", &SpectralResult::h_beta)
      .def_readonly("b", &SpectralResult::b)
      .def_readonly("d", &SpectralResult::d)
      .def_readonly("big_b", &SpectralResult::big_b)
      .def_readonly("q", &SpectralResult::q)
      .def_readonly("omega", &SpectralResult::omega)
      .def_readonly("eigenvalue", &SpectralResult::eigenvalue);
  m.def("mode_growth", &mode_growth, py::arg("n"), py::arg("params"));

  py::class_<CriticalPoints>(m, "CriticalPoints")
      .def_readonly("n", &CriticalPoints::n)
      .def_readonly("lower", &CriticalPoints::lower)
      .def_readonly("upper", &CriticalPoints::upper)
      .def_property_readonly("status", [](const CriticalPoints& c) { return to_string(c.status); })
      .def_readonly("crossings", &CriticalPoints::crossings);
  m.def(
      "critical_points",
      [](int n, const ModelParams& params, double tau_lo, double tau_hi, int points, double tol) {
        return critical_points(n, params, ScanOptions{tau_lo, tau_hi, points, tol});
      },
      py::arg("n"), py::arg("params"), py::arg("tau_lo") = 1e-3, py::arg("tau_hi") = 20.0, py::arg("points") = 400,
      py::arg("tol") = 1e-8);

  // equilibrium
  py::class_<Equilibrium>(m, "Equilibrium")
      .def_readonly("income", &Equilibrium::income)
      .def_readonly("wage_agri", &Equilibrium::wage_agri)
      .def_readonly("wage_manu", &Equilibrium::wage_manu)
      .def_readonly("price_agri", &Equilibrium::price_agri)
      .def_readonly("price_manu", &Equilibrium::price_manu)
      .def_readonly("real_wage", &Equilibrium::real_wage)
      .def_readonly("iterations", &Equilibrium::iterations)
      .def_readonly("residual", &Equilibrium::residual);
  m.def(
      "solve_instantaneous",
      [](const Grid& grid, const Field& lambda, const Field& phi, const ModelParams& params, double tol) {
        SolverOptions opts;
        opts.tol = tol;
        return solve_instantaneous(grid, as_population(grid, lambda), as_population(grid, phi), params, opts);
      },
      py::arg("grid"), py::arg("lambda_"), py::arg("phi"), py::arg("params"), py::arg("tol") = 1e-10);

  // dynamics
  m.def(
      "random_initial", [](std::uint64_t seed, double amplitude, const Grid& grid) {
        return random_initial(seed, amplitude, grid).values;
      },
      py::arg("seed"), py::arg("amplitude"), py::arg("grid"));
  m.def(
      "cosine_seed", [](int n, double amplitude, const Grid& grid) { return cosine_seed(n, amplitude, grid).values; },
      py::arg("n"), py::arg("amplitude"), py::arg("grid"));
  m.def(
      "count_spikes",
      [](const Grid& grid, const Field& lambda, double rel_height, int min_separation) {
        SpikeOptions opts;
        opts.rel_height = rel_height;
        opts.min_separation = min_separation;
        return count_spikes(grid, lambda, opts).locations;
      },
      py::arg("grid"), py::arg("lambda_"), py::arg("rel_height") = 0.1, py::arg("min_separation") = 2,
      "Node indices of the detected spikes.");

  py::class_<StationaryResult>(m, "StationaryResult")
      .def_readonly("lambda_", &StationaryResult::lambda)
      .def_readonly("steps", &StationaryResult::steps)
      .def_readonly("converged", &StationaryResult::converged)
      .def_readonly("last_change", &StationaryResult::last_change)
      .def_property_readonly("spikes", [](const StationaryResult& r) { return r.spikes.count; })
      .def_property_readonly("spike_locations", [](const StationaryResult& r) { return r.spikes.locations; })
      .def_readonly("max_mass_drift", &StationaryResult::max_mass_drift)
      .def_readonly("min_lambda", &StationaryResult::min_lambda);
  m.def(
      "run_to_stationary",
      [](const Grid& grid, const Field& initial, const ModelParams& params, double dt, double stop_tol,
         long max_steps) {
        SimulationConfig cfg;
        cfg.dt = dt;
        cfg.stop_tol = stop_tol;
        cfg.max_steps = max_steps;
        const PopulationField start = as_population(grid, initial);
        py::gil_scoped_release release;
        return run_to_stationary(grid, start, PopulationField::homogeneous(grid), params, cfg);
      },
      py::arg("grid"), py::arg("initial"), py::arg("params"), py::arg("dt") = 0.01, py::arg("stop_tol") = 1e-10,
      py::arg("max_steps") = 10'000'000);
  m.def(
      "measured_growth_rate",
      [](int n, const Grid& grid, const ModelParams& params, double amplitude, int horizon) {
        return measured_growth_rate(n, grid, params, {}, amplitude, horizon).rate;
      },
      py::arg("n"), py::arg("grid"), py::arg("params"), py::arg("amplitude") = 1e-4, py::arg("horizon") = 50);
}
