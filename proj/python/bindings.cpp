// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "nhdfem/ball_mesh.hpp"
#include "nhdfem/config.hpp"
#include "nhdfem/drivers.hpp"
#include "nhdfem/gmsh_io.hpp"
#include "nhdfem/model.hpp"
#include "nhdfem/postprocess.hpp"

namespace py = pybind11;
using namespace nhdfem;

namespace {

RunConfig load_config(const std::string& path, const std::string& out_dir, bool serial) {
  (void)serial;
  RunConfig config = parse_config_file(path);
  if (!out_dir.empty()) config.output.dir = out_dir;
  return config;
}

py::dict row_dict(const ConvergenceRow& row) {
  py::dict d;
  d["level"] = row.level;
  d["h"] = row.h;
  d["ndofs_E"] = row.ndofs_E;
  d["ndofs_J"] = row.ndofs_J;
  d["err_E"] = row.err_E;
  d["err_J"] = row.err_J;
  d["order_E"] = row.order_E;
  d["order_J"] = row.order_J;
  return d;
}

py::dict solve_manufactured(int n, int order, double tol) {
  const PhysicalParams params;
  const ManufacturedCase mc = manufactured_case_unit_cube(params);
  SolverConfig solver;
  solver.tol = tol;
  auto run = solve_coupled(std::make_unique<Mesh>(unit_cube_mesh(n)), order, params, mc.f1,
                           mc.f2, mc.g, 1, 1, solver);

  ComplexVector x(run->E.coeffs.size() + run->J.coeffs.size());
  x << run->E.coeffs, run->J.coeffs;
  const BlockResiduals res = galerkin_residual(run->system.blocks, x);
  const ErrorNorms err_E = error_hcurl(run->E, mc.E, mc.curl_E);
  const ErrorNorms err_J = error_hdiv(run->J, mc.J, mc.div_J);

  py::dict d;
  d["h"] = run->mesh->max_diameter();
  d["ndofs_E"] = run->e_space.n_dofs;
  d["ndofs_J"] = run->j_space.n_free_dofs();
  d["err_E"] = err_E.combined_sum;
  d["err_J"] = err_J.combined_sum;
  d["residual_E"] = res.r_E;
  d["residual_J"] = res.r_J;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "frequency-domain Maxwell solver with a nonlocal current model";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ParseError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "OutputError", PyExc_OSError);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_edges", &Mesh::n_edges)
      .def_property_readonly("n_faces", &Mesh::n_faces)
      .def_property_readonly("n_cells", &Mesh::n_cells)
      .def_property_readonly("max_diameter", &Mesh::max_diameter)
      .def_property_readonly("total_volume", &Mesh::total_volume)
      .def("__repr__", [](const Mesh& mesh) {
        std::ostringstream out;
        out << "<Mesh " << mesh.n_vertices() << " vertices, " << mesh.n_cells() << " cells>";
        return out.str();
      });

  m.def("unit_cube", &unit_cube_mesh, py::arg("n"),
        "uniform tetrahedral mesh of the unit cube, n cells per axis");
  m.def("ball", &make_ball_mesh, py::arg("n"), py::arg("metal_shell"), py::arg("r_metal"),
        py::arg("r_outer"),
        "metal ball inside a spherical shell domain (markers: metal 1, vacuum 2)");
  m.def("refine", &refine_uniform, py::arg("mesh"), "one sweep of uniform refinement");
  m.def(
      "read_msh",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open mesh file '" + path + "'");
        return read_gmsh_msh(in);
      },
      py::arg("path"), "read a Gmsh MSH 2.2 ASCII mesh");
  m.def(
      "write_msh",
      [](const Mesh& mesh, const std::string& path) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write mesh file '" + path + "'");
        write_gmsh_msh(mesh, out);
      },
      py::arg("mesh"), py::arg("path"), "write a Gmsh MSH 2.2 ASCII mesh");

  m.def(
      "permittivity",
      [](double omega, double k, double omega_p, double gamma, double beta, double eps_inf) {
        PhysicalParams params;
        params.omega = omega;
        params.omega_p = omega_p;
        params.gamma = gamma;
        params.beta = beta;
        params.eps_inf = eps_inf;
        return nonlocal_permittivity(params, k);
      },
      py::arg("omega"), py::arg("k"), py::arg("omega_p") = 1.0, py::arg("gamma") = 1.0,
      py::arg("beta") = 1.0, py::arg("eps_inf") = 1.0,
      "spatially dispersive permittivity eps(omega, k); raises ValueError on a pole");

  m.def("solve_manufactured", &solve_manufactured, py::arg("n") = 2, py::arg("order") = 1,
        py::arg("tol") = 1e-10,
        "solve the built-in reference problem on an n^3 box; returns errors and residuals");

  m.def(
      "run_convergence",
      [](const std::string& config, const std::string& out_dir, bool serial) {
        AssemblyOptions opt;
        opt.serial = serial;
        std::ostringstream log;
        const ConvergenceTable table =
            run_convergence_study(load_config(config, out_dir, serial), log, opt);
        py::list rows;
        for (const ConvergenceRow& row : table.rows) rows.append(row_dict(row));
        return rows;
      },
      py::arg("config"), py::arg("out_dir") = "", py::arg("serial") = false,
      "refinement study from a config file; returns the rows of convergence.csv");

  m.def(
      "run_scattering",
      [](const std::string& config, const std::string& out_dir, bool serial) {
        AssemblyOptions opt;
        opt.serial = serial;
        std::ostringstream log;
        run_scattering(load_config(config, out_dir, serial), log, opt);
        return log.str();
      },
      py::arg("config"), py::arg("out_dir") = "", py::arg("serial") = false,
      "plane-wave sweep from a config file; writes sigma_ext.csv, returns the run log");

  m.def(
      "run_dispersion",
      [](const std::string& config, const std::string& out_dir) {
        std::ostringstream log;
        run_dispersion(load_config(config, out_dir, false), log);
        return log.str();
      },
      py::arg("config"), py::arg("out_dir") = "",
      "permittivity scan from a config file; writes dispersion.csv, returns the run log");

  m.def(
      "mesh_info",
      [](const std::string& config) {
        std::ostringstream out;
        run_mesh_info(load_config(config, "", false), out);
        return out.str();
      },
      py::arg("config"), "mesh statistics for the mesh described by a config file");
}
