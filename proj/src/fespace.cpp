// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/fespace.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nhdfem/quadrature.hpp"

namespace nhdfem {

namespace {

// ---------------------------------------------------------------------------
// Reference polynomial fields, represented over the monomial basis of total
// degree <= 2: {1, x, y, z, x2, xy, xz, y2, yz, z2}.
// ---------------------------------------------------------------------------

constexpr int kNumMono = 10;
constexpr int kMonoExp[kNumMono][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                       {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0},
                                       {0, 1, 1}, {0, 0, 2}};

int mono_index(int a, int b, int c) {
  for (int i = 0; i < kNumMono; ++i)
    if (kMonoExp[i][0] == a && kMonoExp[i][1] == b && kMonoExp[i][2] == c) return i;
  throw std::logic_error("mono_index: exponent out of range");
}

using MonoVec = Eigen::Matrix<double, kNumMono, 1>;
using PolyRow = Eigen::Matrix<double, 1, kNumMono>;
using PolyMat = Eigen::Matrix<double, 3, kNumMono>;

MonoVec mono_eval(const Vec3& p) {
  MonoVec m;
  const double x = p[0], y = p[1], z = p[2];
  m << 1.0, x, y, z, x * x, x * y, x * z, y * y, y * z, z * z;
  return m;
}

PolyRow poly_deriv(const PolyRow& p, int axis) {
  PolyRow d = PolyRow::Zero();
  for (int i = 0; i < kNumMono; ++i) {
    if (p[i] == 0.0 || kMonoExp[i][axis] == 0) continue;
    int e[3] = {kMonoExp[i][0], kMonoExp[i][1], kMonoExp[i][2]};
    const double factor = e[axis];
    e[axis] -= 1;
    d[mono_index(e[0], e[1], e[2])] += factor * p[i];
  }
  return d;
}

struct PolyField {
  PolyMat c = PolyMat::Zero();
  Vec3 eval(const Vec3& x) const { return c * mono_eval(x); }
};

PolyField curl_of(const PolyField& f) {
  PolyField r;
  r.c.row(0) = poly_deriv(f.c.row(2), 1) - poly_deriv(f.c.row(1), 2);
  r.c.row(1) = poly_deriv(f.c.row(0), 2) - poly_deriv(f.c.row(2), 0);
  r.c.row(2) = poly_deriv(f.c.row(1), 0) - poly_deriv(f.c.row(0), 1);
  return r;
}

PolyRow div_of(const PolyField& f) {
  return poly_deriv(f.c.row(0), 0) + poly_deriv(f.c.row(1), 1) + poly_deriv(f.c.row(2), 2);
}

struct Frame {
  int ndof = 0;
  std::vector<PolyField> fields;
  std::vector<PolyField> curls;
  std::vector<PolyRow> divs;

  Eigen::Matrix3Xd values_at(const Vec3& x) const {
    Eigen::Matrix3Xd v(3, ndof);
    const MonoVec m = mono_eval(x);
    for (int j = 0; j < ndof; ++j) v.col(j) = fields[j].c * m;
    return v;
  }
  Eigen::Matrix3Xd curls_at(const Vec3& x) const {
    Eigen::Matrix3Xd v(3, ndof);
    const MonoVec m = mono_eval(x);
    for (int j = 0; j < ndof; ++j) v.col(j) = curls[j].c * m;
    return v;
  }
  Eigen::RowVectorXd divs_at(const Vec3& x) const {
    Eigen::RowVectorXd v(ndof);
    const MonoVec m = mono_eval(x);
    for (int j = 0; j < ndof; ++j) v[j] = divs[j] * m;
    return v;
  }
};

// Homogeneous quadratic fields u with x.u = 0 (the curl-only complement):
// projections u - grad(x.u)/3 of the 18 monomial candidates, first 8
// independent ones kept (Gram-Schmidt with a fixed scan order).
std::vector<PolyField> curl_complement_quadratic() {
  std::vector<PolyField> keep;
  std::vector<Eigen::Matrix<double, 30, 1>> ortho;
  for (int m = 4; m < kNumMono && keep.size() < 8; ++m) {
    for (int i = 0; i < 3 && keep.size() < 8; ++i) {
      PolyField u;
      u.c(i, m) = 1.0;
      int e[3] = {kMonoExp[m][0], kMonoExp[m][1], kMonoExp[m][2]};
      e[i] += 1;  // exponents of the cubic x_i * monomial_m
      for (int d = 0; d < 3; ++d) {
        if (e[d] == 0) continue;
        int g[3] = {e[0], e[1], e[2]};
        g[d] -= 1;
        u.c(d, mono_index(g[0], g[1], g[2])) -= e[d] / 3.0;
      }
      Eigen::Matrix<double, 30, 1> v;
      for (int r = 0; r < 3; ++r) v.segment<kNumMono>(r * kNumMono) = u.c.row(r);
      for (const auto& b : ortho) v -= b.dot(v) * b;
      if (v.norm() > 1e-8) {
        ortho.push_back(v.normalized());
        keep.push_back(u);
      }
    }
  }
  if (keep.size() != 8)
    throw std::logic_error("curl_complement_quadratic: expected 8 independent fields");
  return keep;
}

Frame make_frame(FEKind kind, int order) {
  Frame fr;
  auto add = [&](const PolyField& f) { fr.fields.push_back(f); };
  if (kind == FEKind::Nedelec) {
    if (order == 1) {
      for (int i = 0; i < 3; ++i) {
        PolyField f;
        f.c(i, 0) = 1.0;
        add(f);
      }
      // e_i x position: (0,-z,y), (z,0,-x), (-y,x,0)
      {
        PolyField f;
        f.c(1, 3) = -1.0;
        f.c(2, 2) = 1.0;
        add(f);
      }
      {
        PolyField f;
        f.c(0, 3) = 1.0;
        f.c(2, 1) = -1.0;
        add(f);
      }
      {
        PolyField f;
        f.c(0, 2) = -1.0;
        f.c(1, 1) = 1.0;
        add(f);
      }
    } else {
      for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 4; ++m) {
          PolyField f;
          f.c(i, m) = 1.0;
          add(f);
        }
      for (const auto& f : curl_complement_quadratic()) add(f);
    }
  } else {
    if (order == 1) {
      for (int i = 0; i < 3; ++i) {
        PolyField f;
        f.c(i, 0) = 1.0;
        add(f);
      }
      PolyField f;
      f.c(0, 1) = 1.0;
      f.c(1, 2) = 1.0;
      f.c(2, 3) = 1.0;
      add(f);
    } else {
      for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 4; ++m) {
          PolyField f;
          f.c(i, m) = 1.0;
          add(f);
        }
      // x_q * (x, y, z) for q = 1..3
      for (int q = 1; q <= 3; ++q) {
        PolyField f;
        for (int j = 0; j < 3; ++j) {
          int e[3] = {0, 0, 0};
          e[q - 1] += 1;
          e[j] += 1;
          f.c(j, mono_index(e[0], e[1], e[2])) = 1.0;
        }
        add(f);
      }
    }
  }
  fr.ndof = static_cast<int>(fr.fields.size());
  for (const auto& f : fr.fields) {
    fr.curls.push_back(curl_of(f));
    fr.divs.push_back(div_of(f));
  }
  return fr;
}

const Frame& frame_for(FEKind kind, int order) {
  static const Frame n1 = make_frame(FEKind::Nedelec, 1);
  static const Frame n2 = make_frame(FEKind::Nedelec, 2);
  static const Frame rt1 = make_frame(FEKind::RaviartThomas, 1);
  static const Frame rt2 = make_frame(FEKind::RaviartThomas, 2);
  if (kind == FEKind::Nedelec) return order == 1 ? n1 : n2;
  return order == 1 ? rt1 : rt2;
}

// ---------------------------------------------------------------------------
// DOF functional geometry
// ---------------------------------------------------------------------------

struct DofRef {
  enum Kind { Edge, Face, Cell } kind;
  int entity;
  int moment;
};

DofRef dof_ref(const FESpace& sp, int g) {
  const Mesh& m = *sp.mesh;
  if (sp.kind == FEKind::Nedelec) {
    if (sp.order == 1) return {DofRef::Edge, g, 0};
    const int ne = 2 * m.n_edges();
    if (g < ne) return {DofRef::Edge, g / 2, g % 2};
    const int t = g - ne;
    return {DofRef::Face, t / 2, t % 2};
  }
  if (sp.order == 1) return {DofRef::Face, g, 0};
  const int nf = 3 * m.n_faces();
  if (g < nf) return {DofRef::Face, g / 3, g % 3};
  const int t = g - nf;
  return {DofRef::Cell, t / 3, t % 3};
}

Complex cdot(const Vec3c& u, const Vec3& r) {
  return u[0] * r[0] + u[1] * r[1] + u[2] * r[2];
}

}  // namespace

int FESpace::dofs_per_cell() const {
  if (kind == FEKind::Nedelec) return order == 1 ? 6 : 20;
  return order == 1 ? 4 : 15;
}

std::vector<int> FESpace::eliminated_dofs() const {
  std::vector<int> out;
  if (!zero_normal_bc) return out;
  for (int g = 0; g < n_dofs; ++g)
    if (dof_on_boundary[g]) out.push_back(g);
  return out;
}

int FESpace::n_free_dofs() const {
  return n_dofs - static_cast<int>(eliminated_dofs().size());
}

FESpace build_space(FEKind kind, const Mesh& mesh, int order, bool zero_normal_bc) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("build_space: order must be 1 or 2, got " +
                                std::to_string(order));
  if (zero_normal_bc && kind != FEKind::RaviartThomas)
    throw std::invalid_argument("build_space: zero_normal_bc requires Raviart-Thomas");

  FESpace sp;
  sp.kind = kind;
  sp.order = order;
  sp.mesh = &mesh;
  sp.zero_normal_bc = zero_normal_bc;

  const int E = mesh.n_edges(), F = mesh.n_faces(), C = mesh.n_cells();
  if (kind == FEKind::Nedelec)
    sp.n_dofs = order == 1 ? E : 2 * E + 2 * F;
  else
    sp.n_dofs = order == 1 ? F : 3 * F + 3 * C;

  sp.cell_dofs.resize(C);
  for (int c = 0; c < C; ++c) {
    auto& dofs = sp.cell_dofs[c];
    dofs.reserve(sp.dofs_per_cell());
    if (kind == FEKind::Nedelec) {
      for (int le = 0; le < 6; ++le) {
        const int e = mesh.cell_edges[c][le];
        if (order == 1) {
          dofs.push_back(e);
        } else {
          dofs.push_back(2 * e);
          dofs.push_back(2 * e + 1);
        }
      }
      if (order == 2)
        for (int lf = 0; lf < 4; ++lf) {
          const int f = mesh.cell_faces[c][lf];
          dofs.push_back(2 * E + 2 * f);
          dofs.push_back(2 * E + 2 * f + 1);
        }
    } else {
      for (int lf = 0; lf < 4; ++lf) {
        const int f = mesh.cell_faces[c][lf];
        if (order == 1) {
          dofs.push_back(f);
        } else {
          dofs.push_back(3 * f);
          dofs.push_back(3 * f + 1);
          dofs.push_back(3 * f + 2);
        }
      }
      if (order == 2)
        for (int m = 0; m < 3; ++m) dofs.push_back(3 * F + 3 * c + m);
    }
  }
  sp.cell_dof_signs.assign(C, std::vector<int>(sp.dofs_per_cell(), 1));

  sp.dof_on_boundary.assign(sp.n_dofs, 0);
  for (int f = 0; f < F; ++f) {
    if (!mesh.is_boundary_face(f)) continue;
    if (kind == FEKind::Nedelec) {
      const auto& fv = mesh.faces[f];
      // Mark the three edges of the face (ascending pairs are mesh edges).
      const int c = mesh.face_cells[f][0];
      for (int le = 0; le < 6; ++le) {
        const int e = mesh.cell_edges[c][le];
        const auto& ev = mesh.edges[e];
        const bool on_face = (ev[0] == fv[0] || ev[0] == fv[1] || ev[0] == fv[2]) &&
                             (ev[1] == fv[0] || ev[1] == fv[1] || ev[1] == fv[2]);
        if (!on_face) continue;
        if (order == 1) {
          sp.dof_on_boundary[e] = 1;
        } else {
          sp.dof_on_boundary[2 * e] = 1;
          sp.dof_on_boundary[2 * e + 1] = 1;
        }
      }
      if (order == 2) {
        sp.dof_on_boundary[2 * E + 2 * f] = 1;
        sp.dof_on_boundary[2 * E + 2 * f + 1] = 1;
      }
    } else {
      if (order == 1) {
        sp.dof_on_boundary[f] = 1;
      } else {
        sp.dof_on_boundary[3 * f] = 1;
        sp.dof_on_boundary[3 * f + 1] = 1;
        sp.dof_on_boundary[3 * f + 2] = 1;
      }
    }
  }
  return sp;
}

namespace {

// Rows of the local functional-by-frame matrix, in the cell_dofs order.
Eigen::MatrixXd build_V(const FESpace& sp, int cell, const AffineMap& map) {
  const Frame& fr = frame_for(sp.kind, sp.order);
  const Mesh& m = *sp.mesh;
  const int n = fr.ndof;
  const int deg = 2 * sp.order + 2;
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);

  if (sp.kind == FEKind::Nedelec) {
    const QuadRule& qe = segment_rule(deg);
    for (int le = 0; le < 6; ++le) {
      const auto& ev = m.edges[m.cell_edges[cell][le]];
      const Vec3 A = m.vertices[ev[0]];
      const Vec3 T = m.vertices[ev[1]] - A;
      for (int q = 0; q < qe.size(); ++q) {
        const double t = qe.points[q][0], w = qe.weights[q];
        const Vec3 xhat = map.to_reference(A + t * T);
        const Eigen::RowVectorXd row = T.transpose() * (map.JinvT * fr.values_at(xhat));
        if (sp.order == 1) {
          V.row(le) += w * row;
        } else {
          V.row(2 * le) += w * row;
          V.row(2 * le + 1) += w * (2.0 * t - 1.0) * row;
        }
      }
    }
    if (sp.order == 2) {
      const QuadRule& qf = tri_rule(deg);
      for (int lf = 0; lf < 4; ++lf) {
        const auto& fv = m.faces[m.cell_faces[cell][lf]];
        const Vec3 A = m.vertices[fv[0]];
        const Vec3 T1 = m.vertices[fv[1]] - A;
        const Vec3 T2 = m.vertices[fv[2]] - A;
        for (int q = 0; q < qf.size(); ++q) {
          const double s = qf.points[q][0], t = qf.points[q][1], w = qf.weights[q];
          const Vec3 xhat = map.to_reference(A + s * T1 + t * T2);
          const Eigen::Matrix3Xd Phi = map.JinvT * fr.values_at(xhat);
          V.row(12 + 2 * lf) += w * (T1.transpose() * Phi);
          V.row(12 + 2 * lf + 1) += w * (T2.transpose() * Phi);
        }
      }
    }
  } else {
    const QuadRule& qf = tri_rule(deg);
    for (int lf = 0; lf < 4; ++lf) {
      const auto& fv = m.faces[m.cell_faces[cell][lf]];
      const Vec3 A = m.vertices[fv[0]];
      const Vec3 T1 = m.vertices[fv[1]] - A;
      const Vec3 T2 = m.vertices[fv[2]] - A;
      const Vec3 N = T1.cross(T2);
      for (int q = 0; q < qf.size(); ++q) {
        const double s = qf.points[q][0], t = qf.points[q][1], w = qf.weights[q];
        const Vec3 xhat = map.to_reference(A + s * T1 + t * T2);
        const Eigen::RowVectorXd row =
            N.transpose() * ((map.J * fr.values_at(xhat)) / map.det);
        if (sp.order == 1) {
          V.row(lf) += w * row;
        } else {
          V.row(3 * lf) += w * row;
          V.row(3 * lf + 1) += w * s * row;
          V.row(3 * lf + 2) += w * t * row;
        }
      }
    }
    if (sp.order == 2) {
      const QuadRule& qv = tet_rule(deg);
      for (int q = 0; q < qv.size(); ++q) {
        const Eigen::Matrix3Xd Phi = (map.J * fr.values_at(qv.points[q])) / map.det;
        for (int i = 0; i < 3; ++i) V.row(12 + i) += qv.weights[q] * Phi.row(i);
      }
    }
  }
  return V;
}

Eigen::MatrixXd dual_coefficients(const FESpace& sp, int cell, const AffineMap& map) {
  const Eigen::MatrixXd V = build_V(sp, cell, map);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
  return lu.inverse();
}

}  // namespace

CellBasis eval_basis(const FESpace& space, int cell, const std::vector<Vec3>& ref_points) {
  if (cell < 0 || cell >= space.mesh->n_cells())
    throw std::invalid_argument("eval_basis: cell index out of range");
  const AffineMap map = cell_affine_map(*space.mesh, cell);
  const Eigen::MatrixXd C = dual_coefficients(space, cell, map);
  const Frame& fr = frame_for(space.kind, space.order);

  CellBasis out;
  out.cell = cell;
  out.dofs = space.cell_dofs[cell];
  out.value.reserve(ref_points.size());
  for (const Vec3& p : ref_points) {
    if (space.kind == FEKind::Nedelec) {
      out.value.push_back((map.JinvT * fr.values_at(p)) * C);
      out.curl.push_back(((map.J * fr.curls_at(p)) / map.det) * C);
    } else {
      out.value.push_back(((map.J * fr.values_at(p)) / map.det) * C);
      out.div.push_back(((fr.divs_at(p) / map.det) * C).transpose());
    }
  }
  return out;
}

FieldValues eval_field(const FEField& field, int cell, const std::vector<Vec3>& ref_points) {
  const FESpace& sp = *field.space;
  const CellBasis basis = eval_basis(sp, cell, ref_points);
  ComplexVector local(basis.dofs.size());
  for (size_t i = 0; i < basis.dofs.size(); ++i) local[i] = field.coeffs[basis.dofs[i]];

  FieldValues out;
  for (size_t p = 0; p < ref_points.size(); ++p) {
    out.value.push_back(basis.value[p].cast<Complex>() * local);
    if (sp.kind == FEKind::Nedelec)
      out.curl.push_back(basis.curl[p].cast<Complex>() * local);
    else
      out.div.push_back((basis.div[p].cast<Complex>().transpose() * local)(0));
  }
  return out;
}

namespace fedetail {

Complex eval_dof_functional(const FESpace& space, int global_dof, const VecField& f) {
  const Mesh& m = *space.mesh;
  const DofRef d = dof_ref(space, global_dof);
  const int deg = 2 * space.order + 2;
  Complex acc = 0.0;

  if (d.kind == DofRef::Edge) {
    const auto& ev = m.edges[d.entity];
    const Vec3 A = m.vertices[ev[0]];
    const Vec3 T = m.vertices[ev[1]] - A;
    const QuadRule& qr = segment_rule(deg);
    for (int q = 0; q < qr.size(); ++q) {
      const double t = qr.points[q][0], w = qr.weights[q];
      const Complex weight = d.moment == 0 ? 1.0 : 2.0 * t - 1.0;
      acc += w * weight * cdot(f(A + t * T), T);
    }
    return acc;
  }
  if (d.kind == DofRef::Face) {
    const auto& fv = m.faces[d.entity];
    const Vec3 A = m.vertices[fv[0]];
    const Vec3 T1 = m.vertices[fv[1]] - A;
    const Vec3 T2 = m.vertices[fv[2]] - A;
    const QuadRule& qr = tri_rule(deg);
    if (space.kind == FEKind::Nedelec) {
      const Vec3 tk = d.moment == 0 ? T1 : T2;
      for (int q = 0; q < qr.size(); ++q) {
        const double s = qr.points[q][0], t = qr.points[q][1];
        acc += qr.weights[q] * cdot(f(A + s * T1 + t * T2), tk);
      }
    } else {
      const Vec3 N = T1.cross(T2);
      for (int q = 0; q < qr.size(); ++q) {
        const double s = qr.points[q][0], t = qr.points[q][1];
        const double weight = d.moment == 0 ? 1.0 : (d.moment == 1 ? s : t);
        acc += qr.weights[q] * weight * cdot(f(A + s * T1 + t * T2), N);
      }
    }
    return acc;
  }
  const AffineMap map = cell_affine_map(m, d.entity);
  const QuadRule& qr = tet_rule(deg);
  for (int q = 0; q < qr.size(); ++q)
    acc += qr.weights[q] * f(map.to_physical(qr.points[q]))[d.moment];
  return acc;
}

}  // namespace fedetail

FEField interpolate(const FESpace& space, const VecField& f) {
  FEField out;
  out.space = &space;
  out.coeffs = ComplexVector(space.n_dofs);
  for (int g = 0; g < space.n_dofs; ++g)
    out.coeffs[g] = fedetail::eval_dof_functional(space, g, f);
  return out;
}

FaceTrace boundary_tangential_trace(const FESpace& space, int face,
                                    const std::vector<Vec3>& face_ref_points) {
  const Mesh& m = *space.mesh;
  if (space.kind != FEKind::Nedelec)
    throw std::invalid_argument("boundary_tangential_trace: Nedelec space required");
  if (face < 0 || face >= m.n_faces() || !m.is_boundary_face(face))
    throw std::invalid_argument("boundary_tangential_trace: not a boundary face");

  const auto& fv = m.faces[face];
  const Vec3 A = m.vertices[fv[0]];
  const Vec3 T1 = m.vertices[fv[1]] - A;
  const Vec3 T2 = m.vertices[fv[2]] - A;

  FaceTrace out;
  out.cell = m.face_cells[face][0];
  out.normal = m.face_normal(face);
  const AffineMap map = cell_affine_map(m, out.cell);

  std::vector<Vec3> cell_ref;
  cell_ref.reserve(face_ref_points.size());
  for (const Vec3& st : face_ref_points) {
    const Vec3 x = A + st[0] * T1 + st[1] * T2;
    out.physical_points.push_back(x);
    cell_ref.push_back(map.to_reference(x));
  }

  CellBasis basis = eval_basis(space, out.cell, cell_ref);
  out.dofs = std::move(basis.dofs);
  for (auto& v : basis.value) {
    Eigen::Matrix3Xd tang = v - out.normal * (out.normal.transpose() * v);
    out.tangential.push_back(std::move(tang));
  }
  return out;
}

}  // namespace nhdfem
