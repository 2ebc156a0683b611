// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace nhdfem {

namespace {

struct TripleHash {
  size_t operator()(const std::array<int, 3>& a) const {
    size_t h = 1469598103934665603ull;
    for (int v : a) {
      h ^= static_cast<size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct PairHash {
  size_t operator()(const std::array<int, 2>& a) const {
    return TripleHash()({a[0], a[1], 0});
  }
};

Real signed_det(const Mesh& m, const std::array<int, 4>& c) {
  Mat3 J;
  for (int i = 0; i < 3; ++i) J.col(i) = m.vertices[c[i + 1]] - m.vertices[c[0]];
  return J.determinant();
}

constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Local face i is opposite local vertex i.
constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

}  // namespace

void Mesh::finalize() {
  // Keep any pre-assigned face markers, keyed by sorted vertex triple.
  std::unordered_map<std::array<int, 3>, int, TripleHash> old_markers;
  for (size_t f = 0; f < face_marker.size() && f < faces.size(); ++f)
    if (face_marker[f] != 0) old_markers[faces[f]] = face_marker[f];

  for (auto& c : cells) {
    std::sort(c.begin(), c.end());
    if (c[0] < 0 || c[3] >= n_vertices())
      throw std::invalid_argument("mesh cell references vertex " +
                                  std::to_string(c[3] >= n_vertices() ? c[3] : c[0]) +
                                  " out of range");
    if (c[0] == c[1] || c[1] == c[2] || c[2] == c[3])
      throw std::invalid_argument("mesh cell with repeated vertex");
    if (signed_det(*this, c) < 0.0) std::swap(c[2], c[3]);
  }
  if (cell_region_marker.size() != cells.size())
    cell_region_marker.assign(cells.size(), 1);

  edges.clear();
  faces.clear();
  cell_edges.assign(cells.size(), {});
  cell_faces.assign(cells.size(), {});
  std::unordered_map<std::array<int, 2>, int, PairHash> edge_id;
  std::unordered_map<std::array<int, 3>, int, TripleHash> face_id;
  edge_id.reserve(cells.size() * 2);
  face_id.reserve(cells.size() * 3);

  for (int c = 0; c < n_cells(); ++c) {
    const auto& cv = cells[c];
    for (int le = 0; le < 6; ++le) {
      std::array<int, 2> e = {cv[kLocalEdges[le][0]], cv[kLocalEdges[le][1]]};
      if (e[0] > e[1]) std::swap(e[0], e[1]);
      auto it = edge_id.find(e);
      if (it == edge_id.end()) {
        it = edge_id.emplace(e, static_cast<int>(edges.size())).first;
        edges.push_back(e);
      }
      cell_edges[c][le] = it->second;
    }
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> f = {cv[kLocalFaces[lf][0]], cv[kLocalFaces[lf][1]],
                              cv[kLocalFaces[lf][2]]};
      std::sort(f.begin(), f.end());
      auto it = face_id.find(f);
      if (it == face_id.end()) {
        it = face_id.emplace(f, static_cast<int>(faces.size())).first;
        faces.push_back(f);
      }
      cell_faces[c][lf] = it->second;
    }
  }

  face_cells.assign(faces.size(), {-1, -1});
  for (int c = 0; c < n_cells(); ++c) {
    for (int lf = 0; lf < 4; ++lf) {
      auto& fc = face_cells[cell_faces[c][lf]];
      if (fc[0] < 0)
        fc[0] = c;
      else if (fc[1] < 0)
        fc[1] = c;
      else
        throw std::runtime_error("face shared by more than two cells");
    }
  }

  face_marker.assign(faces.size(), 0);
  for (int f = 0; f < n_faces(); ++f) {
    auto it = old_markers.find(faces[f]);
    if (it != old_markers.end()) face_marker[f] = it->second;
  }
}

Real Mesh::cell_diameter(int c) const {
  Real d = 0.0;
  const auto& cv = cells[c];
  for (const auto& le : kLocalEdges)
    d = std::max(d, (vertices[cv[le[0]]] - vertices[cv[le[1]]]).norm());
  return d;
}

Real Mesh::max_diameter() const {
  Real d = 0.0;
  for (int c = 0; c < n_cells(); ++c) d = std::max(d, cell_diameter(c));
  return d;
}

Real Mesh::total_volume() const {
  Real v = 0.0;
  for (int c = 0; c < n_cells(); ++c) v += signed_det(*this, cells[c]) / 6.0;
  return v;
}

Vec3 Mesh::face_normal(int f) const {
  const auto& fv = faces[f];
  Vec3 n = (vertices[fv[1]] - vertices[fv[0]]).cross(vertices[fv[2]] - vertices[fv[0]]);
  n.normalize();
  if (is_boundary_face(f)) {
    // Flip toward the exterior of the single incident cell.
    int c = face_cells[f][0];
    Vec3 centroid = Vec3::Zero();
    for (int v : cells[c]) centroid += vertices[v];
    centroid /= 4.0;
    if (n.dot(face_centroid(f) - centroid) < 0.0) n = -n;
  }
  return n;
}

Real Mesh::face_area(int f) const {
  const auto& fv = faces[f];
  return 0.5 * (vertices[fv[1]] - vertices[fv[0]])
                   .cross(vertices[fv[2]] - vertices[fv[0]])
                   .norm();
}

Vec3 Mesh::face_centroid(int f) const {
  const auto& fv = faces[f];
  return (vertices[fv[0]] + vertices[fv[1]] + vertices[fv[2]]) / 3.0;
}

Mesh generate_box_mesh(const std::array<int, 3>& n, const Vec3& lo, const Vec3& hi) {
  for (int d = 0; d < 3; ++d) {
    if (n[d] < 1)
      throw std::invalid_argument("generate_box_mesh: subdivision count must be >= 1");
    if (!(hi[d] > lo[d]))
      throw std::invalid_argument("generate_box_mesh: degenerate box bounds");
  }
  Mesh m;
  const int nx = n[0], ny = n[1], nz = n[2];
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  m.vertices.reserve((nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.vertices.emplace_back(lo[0] + (hi[0] - lo[0]) * i / nx,
                                lo[1] + (hi[1] - lo[1]) * j / ny,
                                lo[2] + (hi[2] - lo[2]) * k / nz);

  // Kuhn split: one tet per permutation of the axes, each walking the cube
  // from corner (0,0,0) to (1,1,1). All cubes split identically, so shared
  // faces match.
  constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  m.cells.reserve(6 * nx * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> at = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = vid(at[0], at[1], at[2]);
          for (int s = 0; s < 3; ++s) {
            at[p[s]] += 1;
            tet[s + 1] = vid(at[0], at[1], at[2]);
          }
          m.cells.push_back(tet);
        }
  m.cell_region_marker.assign(m.cells.size(), 1);
  m.finalize();
  for (int f = 0; f < m.n_faces(); ++f)
    if (m.is_boundary_face(f)) m.face_marker[f] = 1;
  return m;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(mesh.n_vertices() + mesh.n_edges());
  // Midpoint vertex of parent edge e gets index n_vertices + e.
  for (const auto& e : mesh.edges)
    fine.vertices.push_back(0.5 * (mesh.vertices[e[0]] + mesh.vertices[e[1]]));

  auto mid = [&](int c, int lv0, int lv1) {
    int a = mesh.cells[c][lv0], b = mesh.cells[c][lv1];
    for (int le = 0; le < 6; ++le) {
      int e = mesh.cell_edges[c][le];
      const auto& ev = mesh.edges[e];
      if ((ev[0] == a && ev[1] == b) || (ev[0] == b && ev[1] == a))
        return mesh.n_vertices() + e;
    }
    throw std::logic_error("refine_uniform: local edge not found");
  };

  // Cells are labeled in coordinate-lexicographic vertex order before the
  // split. With that labeling the m02-m13 octahedron diagonal maps the
  // structured box family onto its half-size lattice at every level, so the
  // max cell diameter exactly halves and cell shapes never degrade.
  auto lex_less = [&](int a, int b) {
    const Vec3& pa = mesh.vertices[a];
    const Vec3& pb = mesh.vertices[b];
    for (int k = 0; k < 3; ++k) {
      if (pa[k] < pb[k]) return true;
      if (pa[k] > pb[k]) return false;
    }
    return a < b;
  };

  fine.cells.reserve(8 * mesh.n_cells());
  fine.cell_region_marker.reserve(8 * mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::array<int, 4> lv = {0, 1, 2, 3};
    std::sort(lv.begin(), lv.end(), [&](int i, int j) {
      return lex_less(mesh.cells[c][i], mesh.cells[c][j]);
    });
    const auto& cv = mesh.cells[c];
    const std::array<int, 4> v = {cv[lv[0]], cv[lv[1]], cv[lv[2]], cv[lv[3]]};
    int m01 = mid(c, lv[0], lv[1]), m02 = mid(c, lv[0], lv[2]), m03 = mid(c, lv[0], lv[3]);
    int m12 = mid(c, lv[1], lv[2]), m13 = mid(c, lv[1], lv[3]), m23 = mid(c, lv[2], lv[3]);
    // Four corner children plus the interior octahedron cut along the
    // m02-m13 diagonal.
    const std::array<std::array<int, 4>, 8> kids = {{
        {v[0], m01, m02, m03},
        {m01, v[1], m12, m13},
        {m02, m12, v[2], m23},
        {m03, m13, m23, v[3]},
        {m01, m02, m03, m13},
        {m01, m02, m12, m13},
        {m02, m03, m13, m23},
        {m02, m12, m13, m23},
    }};
    for (const auto& kid : kids) {
      fine.cells.push_back(kid);
      fine.cell_region_marker.push_back(mesh.cell_region_marker[c]);
    }
  }

  fine.finalize();

  // Face markers: a child face inherits a parent marker when its vertices all
  // come from one parent face's closure (corners or edge midpoints of it).
  std::unordered_map<std::array<int, 3>, int, TripleHash> marked;
  std::unordered_map<std::array<int, 2>, int, PairHash> edge_of;
  for (int e = 0; e < mesh.n_edges(); ++e) edge_of[mesh.edges[e]] = e;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.face_marker[f] == 0) continue;
    const auto& fv = mesh.faces[f];
    auto me = [&](int a, int b) {
      std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      return mesh.n_vertices() + edge_of.at(key);
    };
    int m01 = me(fv[0], fv[1]), m02 = me(fv[0], fv[2]), m12 = me(fv[1], fv[2]);
    const std::array<std::array<int, 3>, 4> subs = {{
        {fv[0], m01, m02},
        {fv[1], m01, m12},
        {fv[2], m02, m12},
        {m01, m02, m12},
    }};
    for (auto s : subs) {
      std::sort(s.begin(), s.end());
      marked[s] = mesh.face_marker[f];
    }
  }
  for (int f = 0; f < fine.n_faces(); ++f) {
    auto it = marked.find(fine.faces[f]);
    if (it != marked.end()) fine.face_marker[f] = it->second;
  }
  return fine;
}

Submesh extract_submesh(const Mesh& mesh, int region_marker) {
  Submesh sub;
  std::vector<int> to_sub(mesh.n_vertices(), -1);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.cell_region_marker[c] != region_marker) continue;
    sub.parent_cell.push_back(c);
    for (int v : mesh.cells[c]) to_sub[v] = 0;
  }
  if (sub.parent_cell.empty())
    throw std::invalid_argument("extract_submesh: no cell has region marker " +
                                std::to_string(region_marker));
  // Ascending parent order keeps relative vertex order, so canonical cell
  // tuples and affine maps match the parent's bit for bit.
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (to_sub[v] == 0) {
      to_sub[v] = static_cast<int>(sub.parent_vertex.size());
      sub.parent_vertex.push_back(v);
      sub.mesh.vertices.push_back(mesh.vertices[v]);
    }
  }
  for (int c : sub.parent_cell) {
    const auto& cv = mesh.cells[c];
    sub.mesh.cells.push_back({to_sub[cv[0]], to_sub[cv[1]], to_sub[cv[2]], to_sub[cv[3]]});
    sub.mesh.cell_region_marker.push_back(mesh.cell_region_marker[c]);
  }
  sub.mesh.finalize();

  // Inherit parent face markers by vertex triple.
  std::unordered_map<std::array<int, 3>, int, TripleHash> parent_marked;
  for (int f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face_marker[f] != 0) parent_marked[mesh.faces[f]] = mesh.face_marker[f];
  for (int f = 0; f < sub.mesh.n_faces(); ++f) {
    const auto& fv = sub.mesh.faces[f];
    std::array<int, 3> pf = {sub.parent_vertex[fv[0]], sub.parent_vertex[fv[1]],
                             sub.parent_vertex[fv[2]]};
    auto it = parent_marked.find(pf);
    if (it != parent_marked.end()) sub.mesh.face_marker[f] = it->second;
  }
  return sub;
}

AffineMap cell_affine_map(const Mesh& mesh, int cell) {
  if (cell < 0 || cell >= mesh.n_cells())
    throw std::invalid_argument("cell_affine_map: cell index out of range");
  const auto& cv = mesh.cells[cell];
  AffineMap map;
  map.origin = mesh.vertices[cv[0]];
  for (int i = 0; i < 3; ++i) map.J.col(i) = mesh.vertices[cv[i + 1]] - map.origin;
  map.det = map.J.determinant();
  const Real scale = mesh.cell_diameter(cell);
  if (std::abs(map.det) < 1e-14 * scale * scale * scale)
    throw DegenerateCellError("cell " + std::to_string(cell) +
                              " is degenerate (|det| = " + std::to_string(map.det) + ")");
  map.Jinv = map.J.inverse();
  map.JinvT = map.Jinv.transpose();
  return map;
}

void validate(const Mesh& mesh) {
  auto fail = [](const std::string& what) { throw std::runtime_error("mesh invariant violated: " + what); };
  if (mesh.cells.size() != mesh.cell_region_marker.size()) fail("region marker count");
  if (mesh.faces.size() != mesh.face_marker.size()) fail("face marker count");
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (signed_det(mesh, mesh.cells[c]) <= 0.0) fail("non-positive cell volume");
    const auto& cv = mesh.cells[c];
    if (!(cv[0] < cv[1] && cv[1] < std::min(cv[2], cv[3])))
      fail("cell tuple not canonically ordered");
  }
  for (const auto& e : mesh.edges)
    if (!(e[0] < e[1])) fail("edge tuple not ascending");
  for (const auto& f : mesh.faces)
    if (!(f[0] < f[1] && f[1] < f[2])) fail("face tuple not ascending");
  std::vector<int> count(mesh.n_faces(), 0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int lf = 0; lf < 4; ++lf) count[mesh.cell_faces[c][lf]] += 1;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    int expected = mesh.is_boundary_face(f) ? 1 : 2;
    if (count[f] != expected) fail("face incidence count");
    if (mesh.face_cells[f][0] < 0) fail("face without incident cell");
  }
  long euler = static_cast<long>(mesh.n_vertices()) - mesh.n_edges() +
               mesh.n_faces() - mesh.n_cells();
  if (euler != 1) fail("Euler characteristic V-E+F-C = " + std::to_string(euler));
}

}  // namespace nhdfem
