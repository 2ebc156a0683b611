// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhdfem/model.hpp"

namespace nhdfem {

/// Flat INI-style run configuration. Top-level keys: problem, order, levels;
/// sections: [mesh], [physics], [solver], [output]. Unknown sections or keys
/// are rejected. The canonical serializer emits every field, so
/// parse -> serialize -> parse is a fixpoint.
struct MeshConfig {
  std::string source = "box";  ///< box | msh | ball
  int n = 2;                   ///< box cells per axis
  std::string path;            ///< MSH file (source = msh)
  int metal_marker = 1;
  int boundary_marker = 1;
  int surface_marker = 1;   ///< extinction integration surface
  double diameter = 1.0;    ///< true scatterer diameter for sigma_ext
  int ball_n = 8;           ///< ball generator: box cells per axis
  int ball_metal_shell = 1; ///< ball generator: metal shells
  double ball_r_metal = 0.25;
  double ball_r_outer = 1.0;
};

struct PhysicsConfig {
  PhysicalParams params;
  std::vector<double> omega_list;  ///< scattering sweep
  double omega_min = 0.5;          ///< dispersion grid
  double omega_max = 1.5;
  int omega_count = 11;
  double k_min = 0.0;
  double k_max = 2.0;
  int k_count = 5;
};

struct SolverConfig {
  std::string method = "direct";  ///< direct | gmres
  double tol = 1e-10;
  int restart = 50;
  int max_iter = 2000;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<double> vtk_omegas;  ///< scattering frequencies to export
};

struct RunConfig {
  std::string problem = "manufactured";  ///< manufactured | scattering | dispersion
  int order = 1;
  int levels = 3;
  MeshConfig mesh;
  PhysicsConfig physics;
  SolverConfig solver;
  OutputConfig output;
};

/// Throws ParseError (with line number) on malformed input, unknown keys or
/// sections, or invalid enum values.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

/// Canonical text form: every field, fixed order, round-trip-exact numbers.
std::string serialize_config(const RunConfig& config);

}  // namespace nhdfem
