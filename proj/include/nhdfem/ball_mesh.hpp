// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nhdfem/mesh.hpp"

namespace nhdfem {

/// Sphere-inside-sphere mesh for scattering runs, built without an external
/// mesher: a Kuhn box mesh of [-1,1]^3 with n cells per axis (n even) whose
/// vertices are pushed radially so the cube shells ||x||_inf = 2k/n become
/// concentric spheres. Shell `metal_shell` maps to radius r_metal, the
/// outermost shell to r_outer, with piecewise-linear radii between.
///
/// Markers: metal cells 1, vacuum cells 2; metal/vacuum interface faces 1,
/// outer boundary faces 2.
Mesh make_ball_mesh(int n, int metal_shell, Real r_metal, Real r_outer);

}  // namespace nhdfem
