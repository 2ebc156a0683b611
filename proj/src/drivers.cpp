// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/drivers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "nhdfem/ball_mesh.hpp"
#include "nhdfem/gmsh_io.hpp"

namespace nhdfem {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

SolveMethod method_from(const SolverConfig& solver) {
  return solver.method == "gmres" ? SolveMethod::Gmres : SolveMethod::DirectLU;
}

GmresOptions gmres_from(const SolverConfig& solver) {
  GmresOptions opts;
  opts.restart = solver.restart;
  opts.max_iter = solver.max_iter;
  opts.tol = solver.tol;
  return opts;
}

}  // namespace

std::unique_ptr<CoupledSolve> solve_coupled(std::unique_ptr<Mesh> mesh, int order,
                                            const PhysicalParams& params, const VecField& f1,
                                            const VecField& f2, const BoundaryField& g,
                                            int metal_marker, int boundary_marker,
                                            const SolverConfig& solver,
                                            const AssemblyOptions& opt) {
  auto run = std::make_unique<CoupledSolve>();
  run->mesh = std::move(mesh);
  run->metal = std::make_unique<Submesh>(extract_submesh(*run->mesh, metal_marker));
  run->e_space = build_space(FEKind::Nedelec, *run->mesh, order);
  run->j_space = build_space(FEKind::RaviartThomas, run->metal->mesh, order, true);
  run->system = build_coupled_system(params, run->e_space, run->j_space, *run->metal, f1, f2,
                                     g, boundary_marker, opt);

  auto [x, report] = solve(run->system.A, run->system.b, method_from(solver),
                           gmres_from(solver));
  run->report = report;
  if (!report.converged)
    throw SolverFailure("linear solve failed: method " + report.method +
                        ", relative residual " + std::to_string(report.rel_residual));

  run->E.space = &run->e_space;
  run->E.coeffs = x.head(run->e_space.n_dofs);
  run->J.space = &run->j_space;
  run->J.coeffs = x.tail(run->j_space.n_dofs);
  return run;
}

Mesh mesh_from_config(const MeshConfig& mesh) {
  if (mesh.source == "box") return unit_cube_mesh(mesh.n);
  if (mesh.source == "ball")
    return make_ball_mesh(mesh.ball_n, mesh.ball_metal_shell, mesh.ball_r_metal,
                          mesh.ball_r_outer);
  std::ifstream in(mesh.path);
  if (!in) throw IoError("cannot open mesh file '" + mesh.path + "'");
  return read_gmsh_msh(in);
}

ConvergenceTable run_convergence_study(const RunConfig& config, std::ostream& log,
                                       const AssemblyOptions& opt) {
  if (config.problem != "manufactured")
    throw std::invalid_argument("run_convergence_study: problem must be manufactured");
  if (config.mesh.source != "box")
    throw std::invalid_argument("run_convergence_study: mesh source must be box");
  const ManufacturedCase mc = manufactured_case_unit_cube(config.physics.params);

  ConvergenceTable table;
  std::vector<double> hs, errs_E, errs_J;
  Mesh current = unit_cube_mesh(config.mesh.n);
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) current = refine_uniform(current);
    auto mesh = std::make_unique<Mesh>(current);
    const double h = mesh->max_diameter();
    auto run = solve_coupled(std::move(mesh), config.order, mc.params, mc.f1, mc.f2, mc.g,
                             config.mesh.metal_marker, config.mesh.boundary_marker,
                             config.solver, opt);

    const ErrorNorms err_E = error_hcurl(run->E, mc.E, mc.curl_E);
    const ErrorNorms err_J = error_hdiv(run->J, mc.J, mc.div_J);
    hs.push_back(h);
    errs_E.push_back(err_E.combined_sum);
    errs_J.push_back(err_J.combined_sum);

    ConvergenceRow row;
    row.level = level;
    row.h = h;
    row.ndofs_E = run->e_space.n_dofs;
    row.ndofs_J = run->j_space.n_free_dofs();
    row.err_E = err_E.combined_sum;
    row.err_J = err_J.combined_sum;
    row.order_E = row.order_J = std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "level %d: h=%.4g ndofs_E=%d ndofs_J=%d err_E=%.6e err_J=%.6e (%s, %.2fs)\n",
                  level, h, row.ndofs_E, row.ndofs_J, row.err_E, row.err_J,
                  run->report.method.c_str(), run->report.wall_time_s);
    log << buf << std::flush;
  }

  if (table.rows.size() >= 2) {
    const auto ord_E = convergence_orders(errs_E, hs);
    const auto ord_J = convergence_orders(errs_J, hs);
    for (size_t i = 1; i < table.rows.size(); ++i) {
      table.rows[i].order_E = ord_E[i];
      table.rows[i].order_J = ord_J[i];
    }
  }

  auto csv = open_output(std::filesystem::path(config.output.dir) / "convergence.csv");
  write_convergence_csv(table, csv);
  return table;
}

void run_scattering(const RunConfig& config, std::ostream& log, const AssemblyOptions& opt) {
  if (config.problem != "scattering")
    throw std::invalid_argument("run_scattering: problem must be scattering");
  if (config.physics.omega_list.empty())
    throw std::invalid_argument("run_scattering: physics.omega_list is empty");

  const Mesh base = mesh_from_config(config.mesh);
  auto csv = open_output(std::filesystem::path(config.output.dir) / "sigma_ext.csv");
  csv << "omega_over_omega_p,sigma_ext\n";

  const double omega_p = config.physics.params.omega_p;
  const double denom = omega_p > 0 ? omega_p : 1.0;
  int snapshot = 0;
  for (double omega : config.physics.omega_list) {
    PhysicalParams params = config.physics.params;
    params.omega = omega;
    const IncidentWave wave = make_plane_wave(params, 1.0, Vec3(0, 1, 0), Vec3(1, 0, 0));
    const BoundaryField g = plane_wave_source(wave);

    auto run = solve_coupled(std::make_unique<Mesh>(base), config.order, params, {}, {}, g,
                             config.mesh.metal_marker, config.mesh.boundary_marker,
                             config.solver, opt);
    const double sigma =
        extinction_cross_section(run->E, wave, config.mesh.surface_marker,
                                 config.mesh.metal_marker, config.mesh.diameter, params);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.12g,%.12e\n", omega / denom, sigma);
    csv << buf;
    std::snprintf(buf, sizeof buf, "omega=%.6g sigma_ext=%.6e (%s, %.2fs)\n", omega, sigma,
                  run->report.method.c_str(), run->report.wall_time_s);
    log << buf << std::flush;

    for (double target : config.output.vtk_omegas) {
      if (std::abs(target - omega) > 1e-12) continue;
      char name[64];
      std::snprintf(name, sizeof name, "fields_%03d.vtk", snapshot);
      auto evtk = open_output(std::filesystem::path(config.output.dir) / name);
      export_vtk(*run->mesh, {{"E", &run->E}}, evtk);
      std::snprintf(name, sizeof name, "current_%03d.vtk", snapshot);
      auto jvtk = open_output(std::filesystem::path(config.output.dir) / name);
      export_vtk(run->metal->mesh, {{"J", &run->J}}, jvtk);
      ++snapshot;
    }
  }
}

void run_dispersion(const RunConfig& config, std::ostream& log) {
  if (config.problem != "dispersion")
    throw std::invalid_argument("run_dispersion: problem must be dispersion");
  const PhysicsConfig& ph = config.physics;

  auto csv = open_output(std::filesystem::path(config.output.dir) / "dispersion.csv");
  csv << "omega,k,re_eps,im_eps,pole\n";
  char buf[192];
  for (int iw = 0; iw < ph.omega_count; ++iw) {
    const double omega =
        ph.omega_count == 1
            ? ph.omega_min
            : ph.omega_min + iw * (ph.omega_max - ph.omega_min) / (ph.omega_count - 1);
    for (int ik = 0; ik < ph.k_count; ++ik) {
      const double k =
          ph.k_count == 1 ? ph.k_min
                          : ph.k_min + ik * (ph.k_max - ph.k_min) / (ph.k_count - 1);
      PhysicalParams params = ph.params;
      params.omega = omega;
      try {
        const Complex eps = nonlocal_permittivity(params, k);
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12e,%.12e,0\n", omega, k, eps.real(),
                      eps.imag());
      } catch (const PoleError&) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,nan,nan,1\n", omega, k);
      }
      csv << buf;
    }
  }
  log << "dispersion scan: " << ph.omega_count << " x " << ph.k_count << " grid\n";
}

void run_mesh_info(const RunConfig& config, std::ostream& out) {
  const Mesh mesh = mesh_from_config(config.mesh);
  out << "vertices: " << mesh.n_vertices() << "\n";
  out << "edges:    " << mesh.n_edges() << "\n";
  out << "faces:    " << mesh.n_faces() << "\n";
  out << "cells:    " << mesh.n_cells() << "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "max diameter: %.6g\n", mesh.max_diameter());
  out << buf;
  std::snprintf(buf, sizeof buf, "total volume: %.6g\n", mesh.total_volume());
  out << buf;

  std::map<int, int> regions, bmarks;
  for (int m : mesh.cell_region_marker) ++regions[m];
  int boundary_faces = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.is_boundary_face(f)) {
      ++boundary_faces;
      ++bmarks[mesh.face_marker[f]];
    }
  }
  out << "boundary faces: " << boundary_faces << "\n";
  for (const auto& [m, count] : regions)
    out << "region marker " << m << ": " << count << " cells\n";
  for (const auto& [m, count] : bmarks)
    out << "boundary marker " << m << ": " << count << " faces\n";
}

}  // namespace nhdfem
