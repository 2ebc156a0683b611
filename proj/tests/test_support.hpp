// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nhdfem/assembly.hpp"
#include "nhdfem/fespace.hpp"
#include "nhdfem/mesh.hpp"
#include "nhdfem/model.hpp"
#include "nhdfem/quadrature.hpp"

namespace nhdfem::testsup {

// ---------------------------------------------------------------------------
// Meshes

/// n=2 unit cube with every vertex jiggled by a fixed-seed uniform offset.
/// Small enough to keep all cells positively oriented; finalize() restores
/// the canonical vertex order afterwards.
inline Mesh distorted_cube_mesh(unsigned seed = 7u, double amp = 0.04) {
  Mesh mesh = unit_cube_mesh(2);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  for (auto& v : mesh.vertices) v += Vec3(u(rng), u(rng), u(rng));
  mesh.finalize();
  return mesh;
}

/// One-cell mesh: the first tetrahedron of the distorted cube.
inline Mesh single_cell_mesh(unsigned seed = 7u) {
  const Mesh src = distorted_cube_mesh(seed);
  Mesh mesh;
  for (int k = 0; k < 4; ++k) mesh.vertices.push_back(src.vertices[src.cells[0][k]]);
  mesh.cells.push_back({0, 1, 2, 3});
  mesh.cell_region_marker.push_back(1);
  mesh.finalize();
  for (auto& m : mesh.face_marker) m = 1;
  return mesh;
}

// ---------------------------------------------------------------------------
// Dense linear algebra helpers

inline Eigen::MatrixXcd dense_from_triplets(int rows, int cols,
                                            const std::vector<Triplet>& trips) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  for (const Triplet& t : trips) A(t.row, t.col) += t.val;
  return A;
}

inline Eigen::MatrixXcd dense_from_csr(const ComplexCSRMatrix& A) {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (long p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) D(i, A.col_idx[p]) = A.values[p];
  return D;
}

// ---------------------------------------------------------------------------
// Brute-force quadrature oracles. All loops are plain dense accumulation at a
// quadrature degree above what the library uses, sharing none of its
// assembly code paths.

inline Eigen::MatrixXcd brute_volume(const FESpace& space, VolumeForm form,
                                     const RegionCoeff& coeff) {
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tet_rule(6);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.n_dofs, space.n_dofs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const CellBasis basis = eval_basis(space, c, qr.points);
    const Complex cf = coeff(mesh.cell_region_marker[c]);
    const int nd = static_cast<int>(basis.dofs.size());
    for (int q = 0; q < qr.size(); ++q) {
      const double scale = qr.weights[q] * map.det;
      for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
          Complex v{};
          switch (form) {
            case VolumeForm::CurlCurl:
              v = basis.curl[q].col(j).dot(basis.curl[q].col(i));
              break;
            case VolumeForm::MassE:
            case VolumeForm::MassJ:
              v = basis.value[q].col(j).dot(basis.value[q].col(i));
              break;
            case VolumeForm::DivDiv:
              v = basis.div[q][j] * basis.div[q][i];
              break;
          }
          A(basis.dofs[i], basis.dofs[j]) += cf * scale * v;
        }
      }
    }
  }
  return A;
}

inline Eigen::MatrixXcd brute_boundary(const FESpace& space, int marker, Complex weight) {
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tri_rule(6);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.n_dofs, space.n_dofs);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f) || mesh.face_marker[f] != marker) continue;
    const FaceTrace trace = boundary_tangential_trace(space, f, qr.points);
    const double jac = 2.0 * mesh.face_area(f);
    const int nd = static_cast<int>(trace.dofs.size());
    for (int q = 0; q < qr.size(); ++q) {
      const double scale = qr.weights[q] * jac;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j)
          A(trace.dofs[i], trace.dofs[j]) +=
              weight * scale * trace.tangential[q].col(j).dot(trace.tangential[q].col(i));
    }
  }
  return A;
}

inline Eigen::MatrixXcd brute_coupling(CouplingDirection dir, const FESpace& e_space,
                                       const FESpace& j_space, const Submesh& metal,
                                       Complex weight) {
  const QuadRule& qr = tet_rule(6);
  const int rows = dir == CouplingDirection::JToE ? e_space.n_dofs : j_space.n_dofs;
  const int cols = dir == CouplingDirection::JToE ? j_space.n_dofs : e_space.n_dofs;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  for (int sc = 0; sc < metal.mesh.n_cells(); ++sc) {
    const int pc = metal.parent_cell[sc];
    const AffineMap map = cell_affine_map(metal.mesh, sc);
    const CellBasis eb = eval_basis(e_space, pc, qr.points);
    const CellBasis jb = eval_basis(j_space, sc, qr.points);
    const CellBasis& test = dir == CouplingDirection::JToE ? eb : jb;
    const CellBasis& trial = dir == CouplingDirection::JToE ? jb : eb;
    for (int q = 0; q < qr.size(); ++q) {
      const double scale = qr.weights[q] * map.det;
      for (size_t i = 0; i < test.dofs.size(); ++i)
        for (size_t j = 0; j < trial.dofs.size(); ++j)
          A(test.dofs[i], trial.dofs[j]) +=
              weight * scale * trial.value[q].col(j).dot(test.value[q].col(i));
    }
  }
  return A;
}

inline Eigen::VectorXcd brute_rhs_volume(const FESpace& space, const VecField& f,
                                         int degree) {
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tet_rule(degree);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(space.n_dofs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const CellBasis basis = eval_basis(space, c, qr.points);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3c fv = f(map.to_physical(qr.points[q]));
      const double scale = qr.weights[q] * map.det;
      for (size_t i = 0; i < basis.dofs.size(); ++i)
        b[basis.dofs[i]] += scale * basis.value[q].col(i).cast<Complex>().dot(fv);
    }
  }
  return b;
}

inline Eigen::VectorXcd brute_rhs_boundary(const FESpace& space, int marker,
                                           const BoundaryField& g, int degree) {
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tri_rule(degree);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(space.n_dofs);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f) || mesh.face_marker[f] != marker) continue;
    const FaceTrace trace = boundary_tangential_trace(space, f, qr.points);
    const double jac = 2.0 * mesh.face_area(f);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3c gv = g(trace.physical_points[q], trace.normal);
      const double scale = qr.weights[q] * jac;
      for (size_t i = 0; i < trace.dofs.size(); ++i)
        b[trace.dofs[i]] += scale * trace.tangential[q].col(i).cast<Complex>().dot(gv);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Element property checks. Each returns the worst absolute defect.

/// | functional_i(basis_j) - delta_ij | over all local pairs of every cell.
inline double unisolvence_defect(const FESpace& space) {
  const Mesh& mesh = *space.mesh;
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const std::vector<int>& dofs = space.cell_dofs[c];
    const int nd = static_cast<int>(dofs.size());
    for (int j = 0; j < nd; ++j) {
      VecField phi_j = [&space, &map, c, j](const Vec3& x) -> Vec3c {
        const CellBasis b = eval_basis(space, c, {map.to_reference(x)});
        return b.value[0].col(j).cast<Complex>();
      };
      for (int i = 0; i < nd; ++i) {
        const Complex v = fedetail::eval_dof_functional(space, dofs[i], phi_j);
        const double target = i == j ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(v - target));
      }
    }
  }
  return worst;
}

/// Tangential (Nedelec) or normal (RT) jump of a random-coefficient field
/// across every interior face, sampled at interior points of the face.
inline double continuity_defect(const FESpace& space, unsigned seed = 11u) {
  const Mesh& mesh = *space.mesh;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FEField field{&space, ComplexVector(space.n_dofs)};
  for (int d = 0; d < space.n_dofs; ++d) field.coeffs[d] = Complex(u(rng), u(rng));

  std::vector<Vec3> bary = {Vec3(0.3, 0.3, 0.0), Vec3(0.6, 0.2, 0.0), Vec3(0.15, 0.7, 0.0),
                            Vec3(1.0 / 3, 1.0 / 3, 0.0)};
  double worst = 0.0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.is_boundary_face(f)) continue;
    const auto& fv = mesh.faces[f];
    const Vec3 n = mesh.face_normal(f);
    for (const Vec3& st : bary) {
      const Vec3 x = (1.0 - st[0] - st[1]) * mesh.vertices[fv[0]] +
                     st[0] * mesh.vertices[fv[1]] + st[1] * mesh.vertices[fv[2]];
      Vec3c side[2];
      for (int k = 0; k < 2; ++k) {
        const int c = mesh.face_cells[f][k];
        const AffineMap map = cell_affine_map(mesh, c);
        const FieldValues fvv = eval_field(field, c, {map.to_reference(x)});
        side[k] = fvv.value[0];
      }
      const Vec3c jump = side[0] - side[1];
      const Complex jn = jump[0] * n[0] + jump[1] * n[1] + jump[2] * n[2];
      if (space.kind == FEKind::Nedelec) {
        worst = std::max(worst, (jump - jn * n.cast<Complex>()).norm());
      } else {
        worst = std::max(worst, std::abs(jn));
      }
    }
  }
  return worst;
}

/// Interpolation reproduces constants (order 1) or full P1 fields (order 2):
/// worst pointwise |u_h - u| over the quadrature points of every cell.
inline double patch_defect(const FESpace& space, unsigned seed = 13u) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3c a(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
  Eigen::Matrix3cd B = Eigen::Matrix3cd::Zero();
  if (space.order >= 2)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) B(i, j) = Complex(u(rng), u(rng));
  VecField exact = [a, B](const Vec3& x) -> Vec3c { return a + B * x.cast<Complex>(); };

  const FEField field = interpolate(space, exact);
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tet_rule(3);
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const FieldValues fv = eval_field(field, c, qr.points);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3 x = map.to_physical(qr.points[q]);
      worst = std::max(worst, (fv.value[q] - exact(x)).norm());
    }
  }
  return worst;
}

/// Commuting interpolation: curl of the curl-conforming interpolant of a
/// random quadratic field equals the div-conforming interpolant of its curl,
/// pointwise; and the cell integral of div of an RT interpolant reproduces
/// the exact integral (flux moments are exact).
inline double commuting_defect(const FESpace& e_space, const FESpace& j_space,
                               unsigned seed = 17u) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3c a;
  Eigen::Matrix3cd B;
  Eigen::Matrix3cd C[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = Complex(u(rng), u(rng));
    for (int j = 0; j < 3; ++j) {
      B(i, j) = Complex(u(rng), u(rng));
      for (int k = 0; k < 3; ++k) C[i](j, k) = Complex(u(rng), u(rng));
    }
    C[i] = ((C[i] + C[i].transpose()) / 2.0).eval();
  }
  VecField field = [&](const Vec3& x) -> Vec3c {
    const Vec3c xc = x.cast<Complex>();
    Vec3c v = a + B * xc;
    for (int i = 0; i < 3; ++i) v[i] += xc.dot(C[i] * xc);
    return v;
  };
  // curl components from grad u_i = B.row(i)^T + 2 C_i x.
  VecField curl = [&](const Vec3& x) -> Vec3c {
    const Vec3c xc = x.cast<Complex>();
    Eigen::Matrix3cd G;
    for (int i = 0; i < 3; ++i) G.row(i) = B.row(i) + (2.0 * C[i] * xc).transpose();
    return Vec3c(G(2, 1) - G(1, 2), G(0, 2) - G(2, 0), G(1, 0) - G(0, 1));
  };

  const FEField eh = interpolate(e_space, field);
  const FEField jh = interpolate(j_space, curl);
  const Mesh& mesh = *e_space.mesh;
  const QuadRule& qr = tet_rule(3);
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const FieldValues ev = eval_field(eh, c, qr.points);
    const FieldValues jv = eval_field(jh, c, qr.points);
    for (int q = 0; q < qr.size(); ++q)
      worst = std::max(worst, (ev.curl[q] - jv.value[q]).norm());
  }
  // div side: cellwise integral of div of the interpolant of `field`.
  const FEField fh = interpolate(j_space, field);
  Complex trB = B.trace();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const FieldValues fv = eval_field(fh, c, qr.points);
    Complex got = 0.0, want = 0.0;
    for (int q = 0; q < qr.size(); ++q) {
      const double scale = qr.weights[q] * map.det;
      got += scale * fv.div[q];
      const Vec3c xc = map.to_physical(qr.points[q]).cast<Complex>();
      Complex d = trB;
      for (int i = 0; i < 3; ++i) d += 2.0 * (C[i].row(i) * xc)(0);
      want += scale * d;
    }
    worst = std::max(worst, std::abs(got - want));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sixth-order central finite differences for the source-term oracles.

inline Complex fd_partial(const std::function<Complex(const Vec3&)>& f, const Vec3& x,
                          int dir, double h) {
  Vec3 e = Vec3::Zero();
  e[dir] = 1.0;
  return (f(x + 3 * h * e) - 9.0 * f(x + 2 * h * e) + 45.0 * f(x + h * e) -
          45.0 * f(x - h * e) + 9.0 * f(x - 2 * h * e) - f(x - 3 * h * e)) /
         (60.0 * h);
}

inline Vec3c fd_curl(const VecField& F, const Vec3& x, double h) {
  auto comp = [&F](int i) {
    return [&F, i](const Vec3& y) { return F(y)[i]; };
  };
  return Vec3c(fd_partial(comp(2), x, 1, h) - fd_partial(comp(1), x, 2, h),
               fd_partial(comp(0), x, 2, h) - fd_partial(comp(2), x, 0, h),
               fd_partial(comp(1), x, 0, h) - fd_partial(comp(0), x, 1, h));
}

inline Complex fd_div(const VecField& F, const Vec3& x, double h) {
  Complex acc = 0.0;
  for (int i = 0; i < 3; ++i)
    acc += fd_partial([&F, i](const Vec3& y) { return F(y)[i]; }, x, i, h);
  return acc;
}

inline Vec3c fd_curl_curl(const VecField& F, const Vec3& x, double h) {
  VecField inner = [&F, h](const Vec3& y) -> Vec3c { return fd_curl(F, y, h); };
  return fd_curl(inner, x, h);
}

inline Vec3c fd_grad_div(const VecField& F, const Vec3& x, double h) {
  auto div = [&F, h](const Vec3& y) { return fd_div(F, y, h); };
  return Vec3c(fd_partial(div, x, 0, h), fd_partial(div, x, 1, h),
               fd_partial(div, x, 2, h));
}

/// Cross product computed componentwise in the test, independent of ccross.
inline Vec3c ref_cross(const Vec3c& a, const Vec3c& b) {
  Vec3c r;
  r[0] = a[1] * b[2] - a[2] * b[1];
  r[1] = a[2] * b[0] - a[0] * b[2];
  r[2] = a[0] * b[1] - a[1] * b[0];
  return r;
}

}  // namespace nhdfem::testsup
