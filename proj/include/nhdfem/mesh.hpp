// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "nhdfem/types.hpp"

namespace nhdfem {

/// Affine map x = origin + J * xhat from the reference tetrahedron
/// conv{0, e1, e2, e3} onto a physical cell. det > 0 always (cells are stored
/// in positively oriented vertex order).
struct AffineMap {
  Vec3 origin;
  Mat3 J;
  Mat3 Jinv;
  Mat3 JinvT;
  Real det = 0.0;

  Vec3 to_physical(const Vec3& xhat) const { return origin + J * xhat; }
  Vec3 to_reference(const Vec3& x) const { return Jinv * (x - origin); }
};

/// Conforming tetrahedral mesh with full entity topology.
///
/// Conventions (these fix all orientation handling downstream):
///  - cell vertex tuples are sorted ascending, then the last two entries are
///    swapped if needed so the signed Jacobian determinant is positive;
///  - edge and face vertex tuples are stored ascending;
///  - an edge is directed from its lower to its higher global vertex index;
///  - a face's reference normal is (v1-v0) x (v2-v0) of its ascending tuple.
///
/// face_marker covers all faces (0 = unmarked); generated box meshes mark
/// every boundary face 1. Interior faces may carry markers too (material
/// interfaces from MSH input).
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> cells;
  std::vector<int> cell_region_marker;

  // Derived topology (built by finalize()).
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 6>> cell_edges;  // local edges (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
  std::vector<std::array<int, 4>> cell_faces;  // local face i = opposite local vertex i
  std::vector<std::array<int, 2>> face_cells;  // incident cells, -1 = none
  std::vector<int> face_marker;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  bool is_boundary_face(int f) const { return face_cells[f][1] < 0; }

  /// Canonicalizes cell vertex order and rebuilds edges/faces/incidence.
  /// Preserves face_marker entries by vertex triple if already present.
  void finalize();

  /// Cell diameter = longest edge.
  Real cell_diameter(int c) const;
  Real max_diameter() const;
  Real total_volume() const;

  /// Outward unit normal of a boundary face, or the ascending-convention
  /// reference normal (v1-v0)x(v2-v0), normalized, for an interior face.
  Vec3 face_normal(int f) const;
  Real face_area(int f) const;
  Vec3 face_centroid(int f) const;
};

/// Submesh over the cells of one region; vertex numbering preserves the
/// parent's relative order, so all geometry is bit-identical.
struct Submesh {
  Mesh mesh;
  std::vector<int> parent_cell;    // submesh cell -> parent cell
  std::vector<int> parent_vertex;  // submesh vertex -> parent vertex
};

/// Kuhn (6 tetrahedra per sub-cube) structured mesh of an axis-aligned box.
/// All cells get region marker 1; all boundary faces get face marker 1.
Mesh generate_box_mesh(const std::array<int, 3>& n, const Vec3& lo, const Vec3& hi);

inline Mesh unit_cube_mesh(int n) {
  return generate_box_mesh({n, n, n}, Vec3(0, 0, 0), Vec3(1, 1, 1));
}

/// Red (8-child, edge-midpoint) uniform refinement. Region markers inherited;
/// face markers inherited by the four sub-faces of each marked face.
Mesh refine_uniform(const Mesh& mesh);

/// Extracts the cells with the given region marker. Throws
/// std::invalid_argument when no cell carries the marker.
Submesh extract_submesh(const Mesh& mesh, int region_marker);

/// Affine reference-to-physical map of one cell. Throws DegenerateCellError
/// when |det| < 1e-14 * diameter^3.
AffineMap cell_affine_map(const Mesh& mesh, int cell);

/// Asserts the structural invariants: positive cell volumes, ascending entity
/// tuples, interior faces with exactly 2 incident cells and boundary faces
/// with 1, Euler characteristic V - E + F - C = 1. Throws std::runtime_error
/// with a description on the first violation.
void validate(const Mesh& mesh);

}  // namespace nhdfem
