// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/drivers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "nhdfem/ball_mesh.hpp"
#include "nhdfem/gmsh_io.hpp"
#include "nhdfem/model.hpp"

using namespace nhdfem;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("nhdfem_drv_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(bool(in));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

TEST_CASE("mesh_from_config builds box, ball, and msh meshes") {
  MeshConfig mc;
  mc.source = "box";
  mc.n = 2;
  const Mesh box = mesh_from_config(mc);
  CHECK(box.n_vertices() == 27);
  CHECK(box.n_cells() == 48);

  mc.source = "ball";
  mc.ball_n = 4;
  mc.ball_metal_shell = 1;
  mc.ball_r_metal = 0.3;
  mc.ball_r_outer = 1.0;
  const Mesh ball = mesh_from_config(mc);
  CHECK(ball.n_cells() == make_ball_mesh(4, 1, 0.3, 1.0).n_cells());

  TempDir tmp("msh");
  const fs::path file = tmp.path / "ball.msh";
  {
    std::ofstream out(file);
    write_gmsh_msh(ball, out);
  }
  mc.source = "msh";
  mc.path = file.string();
  const Mesh reread = mesh_from_config(mc);
  CHECK(reread.n_vertices() == ball.n_vertices());
  CHECK(reread.n_cells() == ball.n_cells());

  mc.path = (tmp.path / "missing.msh").string();
  CHECK_THROWS_AS(mesh_from_config(mc), IoError);
}

TEST_CASE("convergence study writes table, csv, and log") {
  TempDir tmp("conv");
  RunConfig config;
  config.problem = "manufactured";
  config.order = 1;
  config.levels = 2;
  config.mesh.n = 2;
  config.output.dir = tmp.str();

  std::ostringstream log;
  const ConvergenceTable table = run_convergence_study(config, log);

  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].level == 0);
  CHECK(table.rows[1].level == 1);
  CHECK(table.rows[1].h == doctest::Approx(table.rows[0].h / 2).epsilon(1e-12));
  CHECK(std::isnan(table.rows[0].order_E));
  CHECK(table.rows[1].order_E > 0.5);
  CHECK(table.rows[1].order_J > 0.5);
  CHECK(table.rows[1].err_E < table.rows[0].err_E);

  const auto lines = read_lines(tmp.path / "convergence.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "level,h,ndofs_E,ndofs_J,err_E,order_E,err_J,order_J");
  const auto first = split_csv(lines[1]);
  REQUIRE(first.size() == 8);
  CHECK(first[0] == "0");
  CHECK(first[5].empty());
  CHECK(first[7].empty());
  const auto second = split_csv(lines[2]);
  CHECK(!second[5].empty());
  CHECK(std::stod(second[5]) == doctest::Approx(table.rows[1].order_E).epsilon(1e-4));

  CHECK(log.str().find("level 0:") != std::string::npos);
  CHECK(log.str().find("level 1:") != std::string::npos);
}

TEST_CASE("single-level study leaves all order columns blank") {
  TempDir tmp("conv1");
  RunConfig config;
  config.levels = 1;
  config.mesh.n = 2;
  config.output.dir = tmp.str();

  std::ostringstream log;
  const ConvergenceTable table = run_convergence_study(config, log);
  REQUIRE(table.rows.size() == 1);
  CHECK(std::isnan(table.rows[0].order_E));
  CHECK(std::isnan(table.rows[0].order_J));

  const auto lines = read_lines(tmp.path / "convergence.csv");
  REQUIRE(lines.size() == 2);
  const auto fields = split_csv(lines[1]);
  REQUIRE(fields.size() == 8);
  CHECK(fields[5].empty());
  CHECK(fields[7].empty());
}

TEST_CASE("convergence study validates problem and mesh source") {
  RunConfig config;
  std::ostringstream log;
  config.problem = "scattering";
  CHECK_THROWS_AS(run_convergence_study(config, log), std::invalid_argument);
  config.problem = "manufactured";
  config.mesh.source = "ball";
  CHECK_THROWS_AS(run_convergence_study(config, log), std::invalid_argument);
}

TEST_CASE("non-convergent gmres surfaces as SolverFailure") {
  RunConfig config;
  config.levels = 1;
  config.mesh.n = 2;
  config.solver.method = "gmres";
  config.solver.tol = 1e-14;
  config.solver.max_iter = 1;
  config.solver.restart = 1;
  config.output.dir = (fs::temp_directory_path() / "nhdfem_drv_fail").string();

  std::ostringstream log;
  CHECK_THROWS_AS(run_convergence_study(config, log), SolverFailure);
  fs::remove_all(config.output.dir);
}

TEST_CASE("dispersion scan writes grid rows and flags poles") {
  TempDir tmp("disp");
  RunConfig config;
  config.problem = "dispersion";
  config.physics.params.omega_p = 1.0;
  config.physics.params.gamma = 0.0;
  config.physics.params.beta = 1.0;
  config.physics.params.eps_inf = 1.0;
  config.physics.omega_min = 1.0;
  config.physics.omega_max = 1.0;
  config.physics.omega_count = 1;
  config.physics.k_min = 0.0;
  config.physics.k_max = 2.0;
  config.physics.k_count = 3;
  config.output.dir = tmp.str();

  std::ostringstream log;
  run_dispersion(config, log);

  const auto lines = read_lines(tmp.path / "dispersion.csv");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "omega,k,re_eps,im_eps,pole");

  // k = 0: eps = 1 - 1/1 = 0.
  const auto row0 = split_csv(lines[1]);
  REQUIRE(row0.size() == 5);
  CHECK(std::stod(row0[0]) == doctest::Approx(1.0));
  CHECK(std::stod(row0[1]) == doctest::Approx(0.0));
  CHECK(std::stod(row0[2]) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::stod(row0[3]) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(row0[4] == "0");

  // k = 1: omega^2 - beta^2 k^2 = 0, a pole.
  const auto row1 = split_csv(lines[2]);
  REQUIRE(row1.size() == 5);
  CHECK(row1[2] == "nan");
  CHECK(row1[3] == "nan");
  CHECK(row1[4] == "1");

  // k = 2: eps = 1 - 1/(1 - 4) = 4/3.
  const auto row2 = split_csv(lines[3]);
  CHECK(std::stod(row2[2]) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(row2[4] == "0");

  CHECK(log.str().find("1 x 3 grid") != std::string::npos);
}

TEST_CASE("dispersion scan rejects other problem kinds") {
  RunConfig config;
  config.problem = "manufactured";
  std::ostringstream log;
  CHECK_THROWS_AS(run_dispersion(config, log), std::invalid_argument);
}

TEST_CASE("mesh-info reports counts, sizes, and markers") {
  RunConfig config;
  config.mesh.source = "box";
  config.mesh.n = 2;
  std::ostringstream out;
  run_mesh_info(config, out);
  const std::string text = out.str();
  CHECK(text.find("vertices: 27") != std::string::npos);
  CHECK(text.find("cells:    48") != std::string::npos);
  CHECK(text.find("boundary faces: 48") != std::string::npos);
  CHECK(text.find("total volume: 1") != std::string::npos);
  CHECK(text.find("region marker 1: 48 cells") != std::string::npos);
  CHECK(text.find("boundary marker 1: 48 faces") != std::string::npos);
}

TEST_CASE("scattering sweep writes finite cross sections and vtk snapshots") {
  TempDir tmp("scat");
  RunConfig config;
  config.problem = "scattering";
  config.order = 1;
  config.mesh.source = "ball";
  config.mesh.ball_n = 4;
  config.mesh.ball_metal_shell = 1;
  config.mesh.ball_r_metal = 0.25;
  config.mesh.ball_r_outer = 1.0;
  config.mesh.metal_marker = 1;
  config.mesh.boundary_marker = 2;
  config.mesh.surface_marker = 1;
  config.mesh.diameter = 0.5;
  config.physics.params.omega_p = 1.0;
  config.physics.params.gamma = 0.05;
  config.physics.params.beta = 0.05;
  config.physics.omega_list = {0.5, 0.65};
  config.output.dir = tmp.str();
  config.output.vtk_omegas = {0.65};

  std::ostringstream log;
  run_scattering(config, log);

  const auto lines = read_lines(tmp.path / "sigma_ext.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "omega_over_omega_p,sigma_ext");
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 2);
    CHECK(std::isfinite(std::stod(fields[0])));
    CHECK(std::isfinite(std::stod(fields[1])));
  }
  CHECK(std::stod(split_csv(lines[1])[0]) == doctest::Approx(0.5));

  CHECK(fs::exists(tmp.path / "fields_000.vtk"));
  CHECK(fs::exists(tmp.path / "current_000.vtk"));
  CHECK(!fs::exists(tmp.path / "fields_001.vtk"));
  CHECK(log.str().find("sigma_ext=") != std::string::npos);

  SUBCASE("omega_list is required") {
    config.physics.omega_list.clear();
    CHECK_THROWS_AS(run_scattering(config, log), std::invalid_argument);
  }
}

TEST_CASE("solve_coupled pins fields to their owning run") {
  SolverConfig solver;
  const PhysicalParams params;
  const ManufacturedCase mc = manufactured_case_unit_cube(params);
  auto run = solve_coupled(std::make_unique<Mesh>(unit_cube_mesh(2)), 1, params, mc.f1, mc.f2,
                           mc.g, 1, 1, solver);
  REQUIRE(run != nullptr);
  CHECK(run->report.converged);
  CHECK(run->E.space == &run->e_space);
  CHECK(run->J.space == &run->j_space);
  CHECK(run->E.coeffs.size() == run->e_space.n_dofs);
  CHECK(run->J.coeffs.size() == run->j_space.n_dofs);
  const ErrorNorms err = error_hcurl(run->E, mc.E, mc.curl_E);
  CHECK(err.combined_sum < 1.0);
}
