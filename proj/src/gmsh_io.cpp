// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/gmsh_io.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace nhdfem {

namespace {

struct LineReader {
  std::istream& in;
  long line_no = 0;

  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      while (!out.empty() && (out.back() == '\r' || out.back() == '\n')) out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  }

  std::string require(const std::string& what) {
    std::string s;
    if (!next(s)) throw ParseError("unexpected end of file, expected " + what, line_no);
    return s;
  }
};

}  // namespace

Mesh read_gmsh_msh(std::istream& in) {
  LineReader r{in};

  std::string line = r.require("$MeshFormat");
  if (line != "$MeshFormat") throw ParseError("expected $MeshFormat, got '" + line + "'", r.line_no);
  line = r.require("format header");
  {
    std::istringstream ss(line);
    double version = 0;
    int file_type = -1, data_size = 0;
    if (!(ss >> version >> file_type >> data_size))
      throw ParseError("malformed format header '" + line + "'", r.line_no);
    if (version < 2.0 || version >= 3.0)
      throw ParseError("unsupported MSH version " + std::to_string(version) +
                           " (only 2.x ASCII is supported)",
                       r.line_no);
    if (file_type != 0) throw ParseError("binary MSH files are not supported", r.line_no);
  }
  line = r.require("$EndMeshFormat");
  if (line != "$EndMeshFormat") throw ParseError("expected $EndMeshFormat", r.line_no);

  Mesh mesh;
  std::unordered_map<long, int> node_index;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> tri_markers;
  std::vector<long> tri_lines;

  while (r.next(line)) {
    if (line == "$Nodes") {
      line = r.require("node count");
      long n = 0;
      try {
        n = std::stol(line);
      } catch (...) {
        throw ParseError("malformed node count '" + line + "'", r.line_no);
      }
      mesh.vertices.reserve(n);
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(r.require("node line"));
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("malformed node line", r.line_no);
        if (!node_index.emplace(id, static_cast<int>(mesh.vertices.size())).second)
          throw ParseError("duplicate node id " + std::to_string(id), r.line_no);
        mesh.vertices.emplace_back(x, y, z);
      }
      line = r.require("$EndNodes");
      if (line != "$EndNodes") throw ParseError("expected $EndNodes, got '" + line + "'", r.line_no);
    } else if (line == "$Elements") {
      line = r.require("element count");
      long n = 0;
      try {
        n = std::stol(line);
      } catch (...) {
        throw ParseError("malformed element count '" + line + "'", r.line_no);
      }
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(r.require("element line"));
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags)) throw ParseError("malformed element line", r.line_no);
        std::vector<int> tags(ntags);
        for (int t = 0; t < ntags; ++t)
          if (!(ss >> tags[t])) throw ParseError("malformed element tags", r.line_no);
        const int physical = ntags > 0 ? tags[0] : 0;
        const int n_nodes = type == 2 ? 3 : type == 4 ? 4 : 0;
        if (n_nodes == 0)
          throw ParseError("unsupported element type " + std::to_string(type), r.line_no);
        std::array<int, 4> nodes = {-1, -1, -1, -1};
        for (int k = 0; k < n_nodes; ++k) {
          long nid;
          if (!(ss >> nid)) throw ParseError("element with missing node ids", r.line_no);
          auto it = node_index.find(nid);
          if (it == node_index.end())
            throw ParseError("element references unknown node " + std::to_string(nid),
                             r.line_no);
          nodes[k] = it->second;
        }
        if (type == 4) {
          mesh.cells.push_back(nodes);
          mesh.cell_region_marker.push_back(physical);
        } else {
          tris.push_back({nodes[0], nodes[1], nodes[2]});
          tri_markers.push_back(physical);
          tri_lines.push_back(r.line_no);
        }
      }
      line = r.require("$EndElements");
      if (line != "$EndElements")
        throw ParseError("expected $EndElements, got '" + line + "'", r.line_no);
    } else if (!line.empty() && line[0] == '$') {
      // Skip unknown sections ($PhysicalNames, ...) up to their matching end.
      const std::string end = "$End" + line.substr(1);
      while (true) {
        std::string s = r.require(end);
        if (s == end) break;
      }
    } else {
      throw ParseError("unexpected content '" + line + "'", r.line_no);
    }
  }

  if (mesh.cells.empty()) throw ParseError("file contains no tetrahedra", r.line_no);
  mesh.finalize();

  std::unordered_map<long long, int> face_of;
  auto face_key = [&](std::array<int, 3> f) {
    std::sort(f.begin(), f.end());
    return (static_cast<long long>(f[0]) * mesh.n_vertices() + f[1]) * mesh.n_vertices() +
           f[2];
  };
  for (int f = 0; f < mesh.n_faces(); ++f) face_of[face_key(mesh.faces[f])] = f;
  for (size_t t = 0; t < tris.size(); ++t) {
    auto it = face_of.find(face_key(tris[t]));
    if (it == face_of.end())
      throw ParseError("triangle does not match any tetrahedron face", tri_lines[t]);
    mesh.face_marker[it->second] = tri_markers[t];
  }
  return mesh;
}

void write_gmsh_msh(const Mesh& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.n_vertices() << "\n";
  out.precision(17);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const Vec3& p = mesh.vertices[v];
    out << (v + 1) << ' ' << p[0] << ' ' << p[1] << ' ' << p[2] << "\n";
  }
  out << "$EndNodes\n";

  std::vector<int> marked_faces;
  for (int f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face_marker[f] != 0) marked_faces.push_back(f);

  out << "$Elements\n" << (marked_faces.size() + mesh.cells.size()) << "\n";
  long id = 1;
  for (int f : marked_faces) {
    const auto& fv = mesh.faces[f];
    out << id++ << " 2 2 " << mesh.face_marker[f] << ' ' << mesh.face_marker[f] << ' '
        << (fv[0] + 1) << ' ' << (fv[1] + 1) << ' ' << (fv[2] + 1) << "\n";
  }
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    out << id++ << " 4 2 " << mesh.cell_region_marker[c] << ' '
        << mesh.cell_region_marker[c] << ' ' << (cv[0] + 1) << ' ' << (cv[1] + 1) << ' '
        << (cv[2] + 1) << ' ' << (cv[3] + 1) << "\n";
  }
  out << "$EndElements\n";
}

}  // namespace nhdfem
