// Copyright 2026 The fnslab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy at
// http://www.apache.org/licenses/LICENSE-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "fns/cli.hpp"
#include "fns/convergence_lab.hpp"
#include "fns/error.hpp"
#include "fns/fractional_kernels.hpp"
#include "fns/mild_solver.hpp"
#include "fns/norms.hpp"
#include "fns/presets.hpp"
#include "fns/spectral_ops.hpp"

namespace py = pybind11;
using namespace fns;

namespace {

std::vector<py::ssize_t> field_shape(const GridSpec& g, int components) {
  std::vector<py::ssize_t> shape{components};
  for (int d = 0; d < g.dim; ++d) shape.push_back(g.n);
  return shape;
}

py::array_t<double> physical_array(const SpectralField& f) {
  const PhysicalField p = f.to_physical();
  py::array_t<double> out(field_shape(f.grid(), f.components()));
  std::memcpy(out.mutable_data(), p.values().data(), p.values().size_bytes());
  return out;
}

SpectralField field_from_array(const GridSpec& grid,
                               py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  grid.validate();
  if (a.ndim() != grid.dim + 1) throw DomainError("array must have shape (components, n, ...)");
  for (int d = 0; d < grid.dim; ++d) {
    if (a.shape(d + 1) != grid.n) throw DomainError("array extent does not match the grid");
  }
  PhysicalField p(grid, static_cast<int>(a.shape(0)));
  std::memcpy(p.values().data(), a.data(), p.values().size_bytes());
  return SpectralField::from_physical(p);
}

py::dict diagnostics_dict(const StepDiagnostics& d) {
  py::dict out;
  out["t"] = d.t;
  out["energy_kin"] = d.energy_kin;
  out["energy_mag"] = d.energy_mag;
  out["div_residual"] = d.div_residual;
  out["picard_iters"] = d.picard_iters;
  return out;
}

}  // namespace

PYBIND11_MODULE(_fnslab, m) {
  m.doc() = "Fractional Navier-Stokes convergence laboratory";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<PicardDivergence>(m, "PicardDivergence", numerical.ptr());
  py::register_exception<EnergyViolation>(m, "EnergyViolation", numerical.ptr());

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int dim, int n, double length) {
             GridSpec g{dim, n, length};
             g.validate();
             return g;
           }),
           py::arg("dim") = 2, py::arg("n") = 64, py::arg("length") = 2.0 * M_PI)
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("n", &GridSpec::n)
      .def_readonly("length", &GridSpec::length)
      .def("__repr__", [](const GridSpec& g) {
        std::ostringstream os;
        os << "GridSpec(dim=" << g.dim << ", n=" << g.n << ", length=" << g.length << ")";
        return os.str();
      });

  py::class_<SpectralField>(m, "SpectralField")
      .def_static("from_physical", &field_from_array, py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &SpectralField::grid)
      .def_property_readonly("components", &SpectralField::components)
      .def("to_physical", &physical_array)
      .def("__sub__", [](const SpectralField& a, const SpectralField& b) {
        if (!a.compatible(b)) throw DomainError("fields live on different grids");
        return a - b;
      });

  m.def(
      "make_preset",
      [](const GridSpec& grid, const std::string& kind, double amplitude, int wavenumber,
         std::uint64_t seed, double decay, int kmax) {
        return make_preset(grid, {parse_preset(kind), amplitude, wavenumber, seed, decay, kmax});
      },
      py::arg("grid"), py::arg("kind") = "taylor_green", py::arg("amplitude") = 1.0,
      py::arg("wavenumber") = 1, py::arg("seed") = 20240611, py::arg("decay") = 4.0,
      py::arg("kmax") = 6);
  m.def("taylor_green_exact", &taylor_green_exact, py::arg("grid"), py::arg("t"),
        py::arg("alpha") = 2.0, py::arg("amplitude") = 1.0, py::arg("k") = 1);
  m.def("leray_project", &leray_project);
  m.def("divergence_residual", &divergence_residual);

  m.def("norm", [](const SpectralField& f, const std::string& spec) {
    return norm(f, NormSpec::parse(spec));
  }, py::arg("field"), py::arg("spec") = "sup");
  m.def("bmo_discrete", py::overload_cast<const SpectralField&, int>(&bmo_discrete),
        py::arg("field"), py::arg("max_level") = 4);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](const GridSpec& grid, double alpha, double beta, double dt, double t_end,
                       const std::string& scheme, int snapshots, std::vector<double> snapshot_times) {
             SolverConfig c;
             c.grid = grid;
             c.alpha = alpha;
             c.beta = beta;
             c.dt = dt;
             c.t_end = t_end;
             c.scheme = parse_scheme(scheme);
             c.snapshots = snapshots;
             c.snapshot_times = std::move(snapshot_times);
             return c;
           }),
           py::arg("grid"), py::arg("alpha") = 2.0, py::arg("beta") = 2.0, py::arg("dt") = 1e-3,
           py::arg("t_end") = 0.1, py::arg("scheme") = "picard", py::arg("snapshots") = 32,
           py::arg("snapshot_times") = std::vector<double>{})
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("dt", &SolverConfig::dt)
      .def_readwrite("t_end", &SolverConfig::t_end)
      .def_readwrite("picard_tol", &SolverConfig::picard_tol)
      .def_readwrite("picard_max_iter", &SolverConfig::picard_max_iter);

  py::class_<SolveRecord>(m, "SolveRecord")
      .def_readonly("times", &SolveRecord::times)
      .def_readonly("velocity", &SolveRecord::velocity)
      .def_readonly("pressure", &SolveRecord::pressure)
      .def_readonly("magnetic", &SolveRecord::magnetic)
      .def_readonly("warnings", &SolveRecord::warnings)
      .def_property_readonly("diagnostics", [](const SolveRecord& r) {
        py::list out;
        for (const auto& d : r.diagnostics) out.append(diagnostics_dict(d));
        return out;
      });

  m.def("solve_ns", &solve_ns, py::arg("u0"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("solve_mhd", &solve_mhd, py::arg("u0"), py::arg("b0"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("trajectory_norm", [](const SolveRecord& a, const SolveRecord& b, const std::string& spec) {
    return trajectory_norm(a, b, NormSpec::parse(spec));
  }, py::arg("a"), py::arg("b"), py::arg("spec") = "sup");

  py::class_<KernelDistance>(m, "KernelDistance")
      .def_readonly("value", &KernelDistance::value)
      .def_readonly("t_star", &KernelDistance::t_star)
      .def_readonly("err_bound", &KernelDistance::err_bound);
  m.def("kernel_distance_hms",
        [](double a, double s, double T, int dim) { return kernel_distance_hms(a, s, T, dim); },
        py::arg("alpha"), py::arg("s"), py::arg("horizon"), py::arg("dim") = 3);
  m.def("grad_kernel_distance_hms",
        [](double a, double s, double T, int dim) { return grad_kernel_distance_hms(a, s, T, dim); },
        py::arg("alpha"), py::arg("s"), py::arg("horizon"), py::arg("dim") = 3);

  py::class_<KernelDistanceReport>(m, "KernelDistanceReport")
      .def_readonly("alphas", &KernelDistanceReport::alphas)
      .def_readonly("distances", &KernelDistanceReport::distances)
      .def_readonly("grad_distances", &KernelDistanceReport::grad_distances)
      .def_readonly("fitted_upper_C", &KernelDistanceReport::fitted_upper_C)
      .def_readonly("fitted_lower_c", &KernelDistanceReport::fitted_lower_c)
      .def_readonly("slope", &KernelDistanceReport::slope)
      .def_readonly("grad_slope", &KernelDistanceReport::grad_slope)
      .def_readonly("passed", &KernelDistanceReport::passed);
  m.def("certify_two_sided_bound",
        [](double s, double T, const std::vector<double>& alphas, int dim) {
          return certify_two_sided_bound(s, T, alphas, dim);
        },
        py::arg("s"), py::arg("horizon"), py::arg("alphas"), py::arg("dim") = 3);

  m.def("existence_time", &existence_time, py::arg("alpha"), py::arg("data_norm_hs"),
        py::arg("C") = 1.0);
  m.def("existence_time_mhd", &existence_time_mhd, py::arg("alpha"), py::arg("beta"),
        py::arg("u_norm"), py::arg("b_norm"), py::arg("C") = 1.0);
  py::class_<UniformTimeFloor>(m, "UniformTimeFloor")
      .def_readonly("T0", &UniformTimeFloor::T0)
      .def_readonly("A", &UniformTimeFloor::A)
      .def_readonly("small_branch", &UniformTimeFloor::small_branch)
      .def_readonly("verified", &UniformTimeFloor::verified)
      .def_readonly("min_ratio", &UniformTimeFloor::min_ratio);
  m.def("uniform_time_floor", &uniform_time_floor, py::arg("epsilon"),
        py::arg("data_norm_hs_limit"), py::arg("C") = 1.0, py::arg("samples") = 100);

  py::class_<RateFitResult>(m, "RateFitResult")
      .def_readonly("slope", &RateFitResult::slope)
      .def_readonly("intercept", &RateFitResult::intercept)
      .def_readonly("r_squared", &RateFitResult::r_squared)
      .def_readonly("predicted_slope", &RateFitResult::predicted_slope)
      .def_readonly("passed", &RateFitResult::passed);
  m.def("fit_rate",
        py::overload_cast<const std::vector<double>&, const std::vector<double>&, double,
                          const std::vector<bool>&, double>(&fit_rate),
        py::arg("alphas"), py::arg("errors"), py::arg("predicted_slope"),
        py::arg("excluded") = std::vector<bool>{}, py::arg("tolerance") = 0.15);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));

  m.attr("__version__") = "0.3.0";
}
