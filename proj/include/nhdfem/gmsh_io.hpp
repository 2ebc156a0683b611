// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "nhdfem/mesh.hpp"

namespace nhdfem {

/// Reads an ASCII Gmsh MSH 2.2 file holding 4-node tetrahedra (type 4) and
/// optional 3-node triangles (type 2). The first element tag (physical group)
/// becomes the cell region marker / face marker. Triangles may mark interior
/// faces (material interfaces). Throws ParseError naming the offending line.
Mesh read_gmsh_msh(std::istream& in);

/// Writes the mesh in the same dialect: every cell as a type-4 element tagged
/// with its region marker, every marked face as a type-2 element.
void write_gmsh_msh(const Mesh& mesh, std::ostream& out);

}  // namespace nhdfem
