// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "nhdfem/mesh.hpp"
#include "nhdfem/types.hpp"

namespace nhdfem {

enum class FEKind { Nedelec, RaviartThomas };

/// Complex vector field of position, used for sources and exact solutions.
using VecField = std::function<Vec3c(const Vec3&)>;

/// A curl-conforming (Nedelec, first kind) or div-conforming (Raviart-Thomas)
/// space of order 1 or 2 on a tetrahedral mesh.
///
/// DOF layout (global ids):
///   Nedelec r=1: one per edge (id = edge).
///   Nedelec r=2: per edge e the moments {2e, 2e+1} (constant and linear
///                tangential moments), then per face f the two in-plane
///                moments {2E+2f, 2E+2f+1}.
///   RT r=1:      one normal flux per face (id = face).
///   RT r=2:      per face f the flux moments {3f, 3f+1, 3f+2} (weights
///                1, s, t in the ascending-vertex face parametrization),
///                then per cell c the interior moments {3F+3c+0..2}.
///
/// All functionals are defined on global entities in ascending-vertex-index
/// orientation, so both cells sharing an entity see the same functional and
/// tangential/normal continuity is automatic. The per-cell basis is the dual
/// basis of those functionals on the cell's polynomial space; with the global
/// functional convention every per-DOF sign is +1.
struct FESpace {
  FEKind kind = FEKind::Nedelec;
  int order = 1;
  const Mesh* mesh = nullptr;
  bool zero_normal_bc = false;

  int n_dofs = 0;
  std::vector<std::vector<int>> cell_dofs;       // local -> global
  std::vector<std::vector<int>> cell_dof_signs;  // all +1, kept for the record
  std::vector<uint8_t> dof_on_boundary;          // support touches the boundary

  int dofs_per_cell() const;
  /// Global DOFs eliminated by the zero-normal-flux boundary condition
  /// (empty unless zero_normal_bc).
  std::vector<int> eliminated_dofs() const;
  int n_free_dofs() const;
};

/// Builds a space. zero_normal_bc is only valid for RaviartThomas and flags
/// every boundary-face DOF for elimination (n.J = 0 is exact for flux DOFs).
FESpace build_space(FEKind kind, const Mesh& mesh, int order, bool zero_normal_bc = false);

/// Values and first-order derivatives of all local basis functions of one
/// cell at reference points, in physical coordinates (Piola-transformed).
struct CellBasis {
  int cell = 0;
  std::vector<int> dofs;                // global ids, local order
  std::vector<Eigen::Matrix3Xd> value;  // per point: 3 x ndof
  std::vector<Eigen::Matrix3Xd> curl;   // Nedelec only
  std::vector<Eigen::VectorXd> div;     // RT only
};

CellBasis eval_basis(const FESpace& space, int cell, const std::vector<Vec3>& ref_points);

/// A coefficient vector over a space.
struct FEField {
  const FESpace* space = nullptr;
  ComplexVector coeffs;
};

/// Field values at reference points of one cell.
struct FieldValues {
  std::vector<Vec3c> value;
  std::vector<Vec3c> curl;    // Nedelec only
  std::vector<Complex> div;   // RT only
};

FieldValues eval_field(const FEField& field, int cell, const std::vector<Vec3>& ref_points);

/// Canonical interpolation: evaluates every DOF functional on the analytic
/// field by quadrature of degree 2r+2.
FEField interpolate(const FESpace& space, const VecField& f);

/// Tangential traces u_T = (n x u) x n of all local basis functions of the
/// cell incident to a boundary face, at points of the reference triangle
/// parametrizing that face (ascending-vertex convention). Throws
/// std::invalid_argument for a non-boundary face.
struct FaceTrace {
  int cell = 0;
  std::vector<int> dofs;
  Vec3 normal;                               // outward unit normal
  std::vector<Vec3> physical_points;
  std::vector<Eigen::Matrix3Xd> tangential;  // per point: 3 x ndof
};

FaceTrace boundary_tangential_trace(const FESpace& space, int face,
                                    const std::vector<Vec3>& face_ref_points);

namespace fedetail {

/// Evaluates one DOF functional on an arbitrary field (used by interpolate
/// and by the unisolvence test oracle). Functionals are indexed globally.
Complex eval_dof_functional(const FESpace& space, int global_dof, const VecField& f);

}  // namespace fedetail

}  // namespace nhdfem
