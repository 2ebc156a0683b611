// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nhdfem/quadrature.hpp"

namespace nhdfem {

namespace {

struct FaceFrame {
  Vec3 A, T1, T2;
  double jac;  // |T1 x T2|, twice the area
};

FaceFrame face_frame(const Mesh& mesh, int f) {
  const auto& fv = mesh.faces[f];
  FaceFrame fr;
  fr.A = mesh.vertices[fv[0]];
  fr.T1 = mesh.vertices[fv[1]] - fr.A;
  fr.T2 = mesh.vertices[fv[2]] - fr.A;
  fr.jac = fr.T1.cross(fr.T2).norm();
  return fr;
}

// Values of a field at the face quadrature points, evaluated from the given
// incident cell.
FieldValues field_on_face(const FEField& field, int cell, const FaceFrame& fr,
                          const QuadRule& qr) {
  const AffineMap map = cell_affine_map(*field.space->mesh, cell);
  std::vector<Vec3> ref;
  ref.reserve(qr.size());
  for (int q = 0; q < qr.size(); ++q) {
    const Vec3 x = fr.A + qr.points[q][0] * fr.T1 + qr.points[q][1] * fr.T2;
    ref.push_back(map.to_reference(x));
  }
  return eval_field(field, cell, ref);
}

// Integrand of the sesquilinear pairing (a, b): a . conj(b).
Complex herm(const Vec3c& a, const Vec3c& b) {
  return b.dot(a);  // Eigen conjugates the first dot argument
}

ErrorNorms finish_norms(double l2sq, double derivsq) {
  ErrorNorms n;
  n.l2 = std::sqrt(l2sq);
  n.deriv = std::sqrt(derivsq);
  n.combined_sum = n.l2 + n.deriv;
  n.combined_rss = std::sqrt(l2sq + derivsq);
  return n;
}

}  // namespace

ErrorNorms error_hcurl(const FEField& field, const VecField& exact,
                       const VecField& exact_curl) {
  const FESpace& sp = *field.space;
  if (sp.kind != FEKind::Nedelec)
    throw std::invalid_argument("error_hcurl: Nedelec field required");
  const Mesh& mesh = *sp.mesh;
  const QuadRule& qr = tet_rule(2 * sp.order + 2);
  double l2sq = 0.0, curlsq = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const FieldValues fv = eval_field(field, c, qr.points);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3 x = map.to_physical(qr.points[q]);
      const double scale = qr.weights[q] * map.det;
      l2sq += scale * (fv.value[q] - exact(x)).squaredNorm();
      curlsq += scale * (fv.curl[q] - exact_curl(x)).squaredNorm();
    }
  }
  return finish_norms(l2sq, curlsq);
}

ErrorNorms error_hdiv(const FEField& field, const VecField& exact,
                      const std::function<Complex(const Vec3&)>& exact_div) {
  const FESpace& sp = *field.space;
  if (sp.kind != FEKind::RaviartThomas)
    throw std::invalid_argument("error_hdiv: RT field required");
  const Mesh& mesh = *sp.mesh;
  const QuadRule& qr = tet_rule(2 * sp.order + 2);
  double l2sq = 0.0, divsq = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const AffineMap map = cell_affine_map(mesh, c);
    const FieldValues fv = eval_field(field, c, qr.points);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3 x = map.to_physical(qr.points[q]);
      const double scale = qr.weights[q] * map.det;
      l2sq += scale * (fv.value[q] - exact(x)).squaredNorm();
      divsq += scale * std::norm(fv.div[q] - exact_div(x));
    }
  }
  return finish_norms(l2sq, divsq);
}

std::vector<double> convergence_orders(const std::vector<double>& errors,
                                       const std::vector<double>& h_values) {
  if (errors.size() != h_values.size() || errors.size() < 2)
    throw std::invalid_argument("convergence_orders: need equal lengths >= 2");
  for (double e : errors)
    if (!(e > 0)) throw std::invalid_argument("convergence_orders: errors must be positive");
  for (size_t i = 1; i < h_values.size(); ++i)
    if (!(h_values[i] < h_values[i - 1]))
      throw std::invalid_argument("convergence_orders: h must be strictly decreasing");

  std::vector<double> orders(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i < errors.size(); ++i)
    orders[i] = std::log(errors[i - 1] / errors[i]) / std::log(h_values[i - 1] / h_values[i]);
  return orders;
}

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "level,h,ndofs_E,ndofs_J,err_E,order_E,err_J,order_J\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%d,%d,%.12e,", r.level, r.h, r.ndofs_E,
                  r.ndofs_J, r.err_E);
    out << buf;
    if (std::isnan(r.order_E))
      out << ",";
    else {
      std::snprintf(buf, sizeof buf, "%.6f,", r.order_E);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12e,", r.err_J);
    out << buf;
    if (std::isnan(r.order_J))
      out << "\n";
    else {
      std::snprintf(buf, sizeof buf, "%.6f\n", r.order_J);
      out << buf;
    }
  }
}

double extinction_cross_section(const FEField& E_h, const IncidentWave& wave,
                                int surface_marker, int inside_marker, double diameter,
                                const PhysicalParams& params) {
  const FESpace& sp = *E_h.space;
  if (sp.kind != FEKind::Nedelec)
    throw std::invalid_argument("extinction_cross_section: Nedelec field required");
  if (!(diameter > 0))
    throw std::invalid_argument("extinction_cross_section: diameter must be > 0");
  if (wave.amplitude == 0.0)
    throw std::invalid_argument("extinction_cross_section: zero-amplitude wave");
  const Mesh& mesh = *sp.mesh;

  struct SurfFace {
    int face;
    int outside_cell;
    Vec3 normal;  // unit, away from the inside region
  };
  std::vector<SurfFace> surf;
  double total_area = 0.0;
  Vec3 closure = Vec3::Zero();
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.face_marker[f] != surface_marker) continue;
    SurfFace sf;
    sf.face = f;
    const int c0 = mesh.face_cells[f][0], c1 = mesh.face_cells[f][1];
    if (c1 < 0) {
      sf.outside_cell = c0;
      sf.normal = mesh.face_normal(f);  // outward boundary normal
    } else {
      const int m0 = mesh.cell_region_marker[c0], m1 = mesh.cell_region_marker[c1];
      int inside;
      if (m0 == inside_marker && m1 != inside_marker) {
        inside = c0;
        sf.outside_cell = c1;
      } else if (m1 == inside_marker && m0 != inside_marker) {
        inside = c1;
        sf.outside_cell = c0;
      } else {
        throw InvalidSurfaceError(
            "extinction_cross_section: marked face does not separate the inside region");
      }
      Vec3 nref = mesh.face_normal(f);
      Vec3 to_inside = Vec3::Zero();
      const auto& cv = mesh.cells[inside];
      for (int k = 0; k < 4; ++k) to_inside += 0.25 * mesh.vertices[cv[k]];
      to_inside -= mesh.face_centroid(f);
      sf.normal = to_inside.dot(nref) > 0 ? Vec3(-nref) : nref;
    }
    const double area = mesh.face_area(f);
    total_area += area;
    closure += area * sf.normal;
    surf.push_back(sf);
  }
  if (surf.empty())
    throw InvalidSurfaceError("extinction_cross_section: no faces carry the surface marker");
  if (closure.cwiseAbs().maxCoeff() > 1e-10 * total_area)
    throw InvalidSurfaceError("extinction_cross_section: surface is not closed");

  const QuadRule& qr = tri_rule(2 * sp.order + 2);
  double integral = 0.0;
  for (const SurfFace& sf : surf) {
    const FaceFrame fr = face_frame(mesh, sf.face);
    const FieldValues ev = field_on_face(E_h, sf.outside_cell, fr, qr);
    const double mu_out = params.mu(mesh.cell_region_marker[sf.outside_cell]);
    const Complex curl_to_h = 1.0 / (I * wave.omega * mu_out);
    const Vec3c n = sf.normal.cast<Complex>();
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3 x = fr.A + qr.points[q][0] * fr.T1 + qr.points[q][1] * fr.T2;
      const Vec3c e_inc = wave.E(x);
      const Vec3c h_inc = wave.H(x);
      const Vec3c e_s = ev.value[q] - e_inc;
      const Vec3c h_s = curl_to_h * ev.curl[q] - h_inc;
      const Vec3c poynting =
          ccross(e_inc, h_s.conjugate()) + ccross(e_s, h_inc.conjugate());
      integral += qr.weights[q] * fr.jac * herm(poynting, n).real();
    }
  }
  const double e0sq = wave.amplitude * wave.amplitude;
  return -integral / (diameter * e0sq);
}

void export_vtk(const Mesh& mesh,
                const std::vector<std::pair<std::string, const FEField*>>& fields,
                std::ostream& out) {
  for (const auto& [name, f] : fields)
    if (f->space->mesh != &mesh)
      throw std::invalid_argument("export_vtk: field '" + name + "' lives on another mesh");

  char buf[256];
  out << "# vtk DataFile Version 3.0\n";
  out << "nhdfem fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  }
  out << "CELLS " << mesh.n_cells() << " " << 5 * static_cast<long>(mesh.n_cells()) << "\n";
  for (const auto& c : mesh.cells)
    out << "4 " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int c = 0; c < mesh.n_cells(); ++c) out << "10\n";
  if (fields.empty()) return;

  const std::vector<Vec3> centroid = {Vec3(0.25, 0.25, 0.25)};
  out << "CELL_DATA " << mesh.n_cells() << "\n";
  for (const auto& [name, f] : fields) {
    std::vector<Vec3c> vals(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) vals[c] = eval_field(*f, c, centroid).value[0];
    auto write_array = [&](const std::string& suffix, auto&& component) {
      out << "VECTORS " << name << suffix << " double\n";
      for (int c = 0; c < mesh.n_cells(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", component(vals[c][0]),
                      component(vals[c][1]), component(vals[c][2]));
        out << buf;
      }
    };
    write_array("_re", [](const Complex& z) { return z.real(); });
    write_array("_im", [](const Complex& z) { return z.imag(); });
    write_array("_mag", [](const Complex& z) { return std::abs(z); });
  }
}

BlockResiduals galerkin_residual(const SystemBlocks& blocks, const ComplexVector& x) {
  if (x.size() != blocks.n_E + blocks.n_J)
    throw std::invalid_argument("galerkin_residual: solution size mismatch");
  const ComplexVector xE = x.segment(blocks.offset_E, blocks.n_E);
  const ComplexVector xJ = x.segment(blocks.offset_J, blocks.n_J);

  const ComplexVector rE = matvec(blocks.A_EE, xE) + matvec(blocks.A_EJ, xJ) - blocks.b_E;
  const ComplexVector rJ = matvec(blocks.A_JE, xE) + matvec(blocks.A_JJ, xJ) - blocks.b_J;

  const double scale_E = blocks.A_EE.norm_inf() * xE.norm() +
                         blocks.A_EJ.norm_inf() * xJ.norm() + blocks.b_E.norm();
  const double scale_J = blocks.A_JE.norm_inf() * xE.norm() +
                         blocks.A_JJ.norm_inf() * xJ.norm() + blocks.b_J.norm();
  BlockResiduals res;
  res.r_E = rE.norm() / (scale_E > 0 ? scale_E : 1.0);
  res.r_J = rJ.norm() / (scale_J > 0 ? scale_J : 1.0);
  return res;
}

PowerBalanceReport power_balance(const FEField& E, const FEField& J, const Submesh& metal,
                                 const PhysicalParams& params, const VecField& f1,
                                 const VecField& f2, const BoundaryField& g,
                                 int boundary_marker) {
  const FESpace& esp = *E.space;
  const FESpace& jsp = *J.space;
  if (esp.kind != FEKind::Nedelec || jsp.kind != FEKind::RaviartThomas)
    throw std::invalid_argument("power_balance: expected Nedelec E and RT J");
  if (jsp.mesh != &metal.mesh)
    throw std::invalid_argument("power_balance: J does not live on the submesh");
  const Mesh& mesh = *esp.mesh;
  const double w = params.omega;

  // Boundary terms: |E_T|^2 and Im <g, E_T> over marked boundary faces.
  double et_sq = 0.0, im_g_et = 0.0;
  {
    const QuadRule& qr = tri_rule(2 * esp.order + 2);
    for (int f = 0; f < mesh.n_faces(); ++f) {
      if (!mesh.is_boundary_face(f) || mesh.face_marker[f] != boundary_marker) continue;
      const FaceFrame fr = face_frame(mesh, f);
      const FaceTrace trace = boundary_tangential_trace(esp, f, qr.points);
      ComplexVector local(trace.dofs.size());
      for (size_t i = 0; i < trace.dofs.size(); ++i) local[i] = E.coeffs[trace.dofs[i]];
      for (int q = 0; q < qr.size(); ++q) {
        const Vec3c et = trace.tangential[q].cast<Complex>() * local;
        const double scale = qr.weights[q] * fr.jac;
        et_sq += scale * et.squaredNorm();
        if (g) {
          const Vec3c gv = g(trace.physical_points[q], trace.normal);
          im_g_et += scale * herm(gv, et).imag();
        }
      }
    }
  }

  // Volume terms over the metal: Re(J, E), |J|^2, Im(f2, J).
  double re_j_e = 0.0, j_sq = 0.0, im_f2_j = 0.0;
  {
    const QuadRule& qr = tet_rule(esp.order + jsp.order + 2);
    for (int sc = 0; sc < metal.mesh.n_cells(); ++sc) {
      const int pc = metal.parent_cell[sc];
      const AffineMap map = cell_affine_map(metal.mesh, sc);
      const FieldValues jv = eval_field(J, sc, qr.points);
      const FieldValues evv = eval_field(E, pc, qr.points);
      for (int q = 0; q < qr.size(); ++q) {
        const double scale = qr.weights[q] * map.det;
        // (J, E) = integral of J . conj(E)
        re_j_e += scale * herm(jv.value[q], evv.value[q]).real();
        j_sq += scale * jv.value[q].squaredNorm();
        if (f2) {
          const Vec3 x = map.to_physical(qr.points[q]);
          im_f2_j += scale * herm(f2(x), jv.value[q]).imag();
        }
      }
    }
  }

  // Im(f1, E) over the whole domain.
  double im_f1_e = 0.0;
  if (f1) {
    const QuadRule& qr = tet_rule(2 * esp.order + 2);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const AffineMap map = cell_affine_map(mesh, c);
      const FieldValues evv = eval_field(E, c, qr.points);
      for (int q = 0; q < qr.size(); ++q) {
        const Vec3 x = map.to_physical(qr.points[q]);
        im_f1_e += qr.weights[q] * map.det * herm(f1(x), evv.value[q]).imag();
      }
    }
  }

  PowerBalanceReport rep;
  const double te[4] = {-w * et_sq, -w * re_j_e, -im_f1_e, -im_g_et};
  rep.e_residual = std::abs(te[0] + te[1] + te[2] + te[3]);
  rep.e_scale = std::abs(te[0]) + std::abs(te[1]) + std::abs(te[2]) + std::abs(te[3]);
  const double tj[3] = {-w * params.gamma * j_sq,
                        w * params.omega_p * params.omega_p * params.eps0 * re_j_e, im_f2_j};
  rep.j_residual = std::abs(tj[0] + tj[1] + tj[2]);
  rep.j_scale = std::abs(tj[0]) + std::abs(tj[1]) + std::abs(tj[2]);
  return rep;
}

double boundary_normal_flux_l2(const FEField& J) {
  const FESpace& sp = *J.space;
  const Mesh& mesh = *sp.mesh;
  const QuadRule& qr = tri_rule(2 * sp.order + 2);
  double acc = 0.0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f)) continue;
    const FaceFrame fr = face_frame(mesh, f);
    const Vec3c n = mesh.face_normal(f).cast<Complex>();
    const FieldValues jv = field_on_face(J, mesh.face_cells[f][0], fr, qr);
    for (int q = 0; q < qr.size(); ++q)
      acc += qr.weights[q] * fr.jac * std::norm(herm(jv.value[q], n));
  }
  return std::sqrt(acc);
}

}  // namespace nhdfem
