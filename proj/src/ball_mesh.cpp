// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/ball_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace nhdfem {

Mesh make_ball_mesh(int n, int metal_shell, Real r_metal, Real r_outer) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("make_ball_mesh: n must be even and >= 2");
  const int shells = n / 2;
  if (metal_shell < 1 || metal_shell >= shells)
    throw std::invalid_argument("make_ball_mesh: metal_shell must be in [1, n/2)");
  if (!(0.0 < r_metal && r_metal < r_outer))
    throw std::invalid_argument("make_ball_mesh: need 0 < r_metal < r_outer");

  Mesh box = generate_box_mesh({n, n, n}, Vec3(-1, -1, -1), Vec3(1, 1, 1));

  // Shell index of a box vertex (vertices sit on the lattice (2i-n)/n).
  auto shell_of = [&](const Vec3& v) {
    int k = 0;
    for (int d = 0; d < 3; ++d)
      k = std::max(k, static_cast<int>(std::lround(std::abs(v[d]) * shells)));
    return k;
  };
  auto radius_of = [&](int k) {
    if (k <= metal_shell) return r_metal * k / metal_shell;
    return r_metal + (r_outer - r_metal) * (k - metal_shell) / (shells - metal_shell);
  };

  // Region markers come from the unmapped lattice: a cell is metal when all
  // its vertices lie on shells <= metal_shell. Kuhn cells always span a full
  // sub-cube diagonal, so this marks exactly the central cube of cells.
  for (int c = 0; c < box.n_cells(); ++c) {
    int kmax = 0;
    for (int v : box.cells[c]) kmax = std::max(kmax, shell_of(box.vertices[v]));
    box.cell_region_marker[c] = kmax <= metal_shell ? 1 : 2;
  }

  for (int v = 0; v < box.n_vertices(); ++v) {
    const int k = shell_of(box.vertices[v]);
    if (k == 0) {
      box.vertices[v] = Vec3::Zero();
      continue;
    }
    box.vertices[v] *= radius_of(k) / box.vertices[v].norm();
  }

  Mesh mesh;
  mesh.vertices = std::move(box.vertices);
  mesh.cells = std::move(box.cells);
  mesh.cell_region_marker = std::move(box.cell_region_marker);
  mesh.finalize();

  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.is_boundary_face(f)) {
      mesh.face_marker[f] = 2;
      continue;
    }
    const int ra = mesh.cell_region_marker[mesh.face_cells[f][0]];
    const int rb = mesh.cell_region_marker[mesh.face_cells[f][1]];
    if (ra != rb) mesh.face_marker[f] = 1;
  }

  const Real ball = 4.0 / 3.0 * M_PI * r_outer * r_outer * r_outer;
  const Real vol = mesh.total_volume();
  if (!(vol > 0.5 * ball && vol < ball))
    throw std::runtime_error("make_ball_mesh: mapped mesh volume " + std::to_string(vol) +
                             " is implausible for ball volume " + std::to_string(ball));
  return mesh;
}

}  // namespace nhdfem
