// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nhdfem/ball_mesh.hpp"
#include "nhdfem/gmsh_io.hpp"
#include "nhdfem/mesh.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate a two-region ball-in-ball tetrahedral mesh"};
  int n = 8;
  int metal_shell = 1;
  double r_metal = 0.25;
  double r_outer = 1.0;
  std::string out_path = "ball.msh";
  app.add_option("-n,--n", n, "cells per axis of the background box");
  app.add_option("--metal-shell", metal_shell, "region marker of the inner ball");
  app.add_option("--r-metal", r_metal, "inner ball radius");
  app.add_option("--r-outer", r_outer, "outer ball radius");
  app.add_option("-o,--out", out_path, "output MSH path");
  CLI11_PARSE(app, argc, argv);

  try {
    nhdfem::Mesh mesh = nhdfem::make_ball_mesh(n, metal_shell, r_metal, r_outer);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open " << out_path << "\n";
      return 4;
    }
    nhdfem::write_gmsh_msh(mesh, out);
    std::cout << "wrote " << out_path << ": " << mesh.vertices.size()
              << " vertices, " << mesh.cells.size() << " cells\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
