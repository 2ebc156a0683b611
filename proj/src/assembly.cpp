// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/assembly.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "nhdfem/quadrature.hpp"

namespace nhdfem {

namespace {

// Runs fn(begin, end, chunk) over contiguous cell ranges, one per thread.
// Chunk boundaries depend only on n and the thread count; each chunk's output
// is produced independently, so merged results are deterministic.
template <class Fn>
void parallel_chunks(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int base = n / threads, extra = n % threads;
  int begin = 0;
  for (int t = 0; t < threads; ++t) {
    const int len = base + (t < extra ? 1 : 0);
    const int end = begin + len;
    pool.emplace_back([&fn, &errors, begin, end, t]() {
      try {
        fn(begin, end, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Checks that submesh cell sc and parent cell pc are the same physical
// tetrahedron (extract_submesh preserves relative vertex order, so the
// canonical vertex tuples must match positionally).
bool same_cell_geometry(const Mesh& sub, int sc, const Mesh& parent, int pc) {
  for (int k = 0; k < 4; ++k) {
    const Vec3& a = sub.vertices[sub.cells[sc][k]];
    const Vec3& b = parent.vertices[parent.cells[pc][k]];
    if (a != b) return false;
  }
  return true;
}

}  // namespace

int assembly_thread_count(bool serial) {
  if (serial) return 1;
  if (const char* env = std::getenv("NHDFEM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<Triplet> assemble_volume_form(const FESpace& space, VolumeForm kind,
                                          const RegionCoeff& coeff,
                                          const AssemblyOptions& opt) {
  const bool needs_nedelec = kind == VolumeForm::CurlCurl || kind == VolumeForm::MassE;
  if (needs_nedelec != (space.kind == FEKind::Nedelec))
    throw std::invalid_argument("assemble_volume_form: form does not match the space kind");

  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tet_rule(2 * space.order + 1);
  const std::vector<Vec3>& pts = qr.points;
  const int nloc = space.dofs_per_cell();
  const int threads = assembly_thread_count(opt.serial);

  std::vector<std::vector<Triplet>> buffers(std::max(1, std::min(threads, mesh.n_cells())));
  parallel_chunks(mesh.n_cells(), threads, [&](int begin, int end, int chunk) {
    auto& buf = buffers[chunk];
    buf.reserve(static_cast<size_t>(end - begin) * nloc * nloc);
    for (int c = begin; c < end; ++c) {
      const AffineMap map = cell_affine_map(mesh, c);
      const CellBasis basis = eval_basis(space, c, pts);
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nloc, nloc);
      for (int q = 0; q < qr.size(); ++q) {
        const double scale = qr.weights[q] * map.det;
        switch (kind) {
          case VolumeForm::CurlCurl:
            local.noalias() += scale * (basis.curl[q].transpose() * basis.curl[q]);
            break;
          case VolumeForm::MassE:
          case VolumeForm::MassJ:
            local.noalias() += scale * (basis.value[q].transpose() * basis.value[q]);
            break;
          case VolumeForm::DivDiv:
            local.noalias() += scale * (basis.div[q] * basis.div[q].transpose());
            break;
        }
      }
      const Complex cc = coeff(mesh.cell_region_marker[c]);
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j)
          buf.push_back({basis.dofs[i], basis.dofs[j], cc * local(i, j)});
    }
  });

  std::vector<Triplet> out;
  for (auto& b : buffers) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<Triplet> assemble_boundary_form(const FESpace& space, int boundary_marker,
                                            Complex weight) {
  if (space.kind != FEKind::Nedelec)
    throw std::invalid_argument("assemble_boundary_form: Nedelec space required");
  const Mesh& mesh = *space.mesh;
  const QuadRule& qr = tri_rule(2 * space.order + 2);
  std::vector<Triplet> out;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f) || mesh.face_marker[f] != boundary_marker) continue;
    const auto& fv = mesh.faces[f];
    const Vec3 A = mesh.vertices[fv[0]];
    const Vec3 T1 = mesh.vertices[fv[1]] - A;
    const Vec3 T2 = mesh.vertices[fv[2]] - A;
    const double jac = T1.cross(T2).norm();

    const FaceTrace trace = boundary_tangential_trace(space, f, qr.points);
    const int nloc = static_cast<int>(trace.dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nloc, nloc);
    for (int q = 0; q < qr.size(); ++q)
      local.noalias() +=
          (qr.weights[q] * jac) * (trace.tangential[q].transpose() * trace.tangential[q]);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        out.push_back({trace.dofs[i], trace.dofs[j], weight * local(i, j)});
  }
  return out;
}

std::vector<Triplet> assemble_coupling_form(CouplingDirection dir, const FESpace& e_space,
                                            const FESpace& j_space, const Submesh& metal,
                                            Complex weight, const AssemblyOptions& opt) {
  if (e_space.kind != FEKind::Nedelec || j_space.kind != FEKind::RaviartThomas)
    throw std::invalid_argument("assemble_coupling_form: expected Nedelec and RT spaces");
  if (j_space.mesh != &metal.mesh)
    throw std::invalid_argument("assemble_coupling_form: J space does not live on the submesh");
  const Mesh& parent = *e_space.mesh;
  if (static_cast<int>(metal.parent_cell.size()) != metal.mesh.n_cells())
    throw std::invalid_argument("assemble_coupling_form: inconsistent submesh");
  for (int pc : metal.parent_cell)
    if (pc < 0 || pc >= parent.n_cells())
      throw std::invalid_argument("assemble_coupling_form: submesh does not match the mesh");

  const int deg = e_space.order + j_space.order + 1;
  const QuadRule& qr = tet_rule(deg);
  const std::vector<Vec3>& pts = qr.points;
  const int ne = e_space.dofs_per_cell(), nj = j_space.dofs_per_cell();
  const int threads = assembly_thread_count(opt.serial);

  std::vector<std::vector<Triplet>> buffers(
      std::max(1, std::min(threads, metal.mesh.n_cells())));
  parallel_chunks(metal.mesh.n_cells(), threads, [&](int begin, int end, int chunk) {
    auto& buf = buffers[chunk];
    for (int sc = begin; sc < end; ++sc) {
      const int pc = metal.parent_cell[sc];
      if (!same_cell_geometry(metal.mesh, sc, parent, pc))
        throw std::invalid_argument(
            "assemble_coupling_form: submesh cell geometry does not match its parent");
      const AffineMap map = cell_affine_map(metal.mesh, sc);
      const CellBasis eb = eval_basis(e_space, pc, pts);
      const CellBasis jb = eval_basis(j_space, sc, pts);
      // mixed(i, j) = integral of phiJ_j . phiE_i over the cell
      Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(ne, nj);
      for (int q = 0; q < qr.size(); ++q)
        mixed.noalias() +=
            (qr.weights[q] * map.det) * (eb.value[q].transpose() * jb.value[q]);
      if (dir == CouplingDirection::JToE) {
        for (int i = 0; i < ne; ++i)
          for (int j = 0; j < nj; ++j)
            buf.push_back({eb.dofs[i], jb.dofs[j], weight * mixed(i, j)});
      } else {
        for (int i = 0; i < nj; ++i)
          for (int j = 0; j < ne; ++j)
            buf.push_back({jb.dofs[i], eb.dofs[j], weight * mixed(j, i)});
      }
    }
  });

  std::vector<Triplet> out;
  for (auto& b : buffers) out.insert(out.end(), b.begin(), b.end());
  return out;
}

ComplexVector assemble_rhs_volume(const FESpace& space, const VecField& f,
                                  const AssemblyOptions& opt) {
  const Mesh& mesh = *space.mesh;
  ComplexVector b = ComplexVector::Zero(space.n_dofs);
  if (!f) return b;
  const QuadRule& qr = tet_rule(2 * space.order + 2);
  const std::vector<Vec3>& pts = qr.points;
  const int nloc = space.dofs_per_cell();
  const int threads = assembly_thread_count(opt.serial);

  std::vector<ComplexVector> partial(std::max(1, std::min(threads, mesh.n_cells())),
                                     ComplexVector::Zero(space.n_dofs));
  parallel_chunks(mesh.n_cells(), threads, [&](int begin, int end, int chunk) {
    ComplexVector& acc = partial[chunk];
    for (int c = begin; c < end; ++c) {
      const AffineMap map = cell_affine_map(mesh, c);
      const CellBasis basis = eval_basis(space, c, pts);
      ComplexVector local = ComplexVector::Zero(nloc);
      for (int q = 0; q < qr.size(); ++q) {
        const Vec3c fv = f(map.to_physical(pts[q]));
        local += (qr.weights[q] * map.det) * (basis.value[q].transpose().cast<Complex>() * fv);
      }
      for (int i = 0; i < nloc; ++i) acc[basis.dofs[i]] += local[i];
    }
  });
  for (const auto& acc : partial) b += acc;
  return b;
}

ComplexVector assemble_rhs_boundary(const FESpace& space, int boundary_marker,
                                    const BoundaryField& g) {
  if (space.kind != FEKind::Nedelec)
    throw std::invalid_argument("assemble_rhs_boundary: Nedelec space required");
  const Mesh& mesh = *space.mesh;
  ComplexVector b = ComplexVector::Zero(space.n_dofs);
  if (!g) return b;
  const QuadRule& qr = tri_rule(2 * space.order + 2);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.is_boundary_face(f) || mesh.face_marker[f] != boundary_marker) continue;
    const auto& fv = mesh.faces[f];
    const Vec3 A = mesh.vertices[fv[0]];
    const Vec3 T1 = mesh.vertices[fv[1]] - A;
    const Vec3 T2 = mesh.vertices[fv[2]] - A;
    const double jac = T1.cross(T2).norm();

    const FaceTrace trace = boundary_tangential_trace(space, f, qr.points);
    for (int q = 0; q < qr.size(); ++q) {
      const Vec3c gv = g(trace.physical_points[q], trace.normal);
      const Eigen::VectorXcd contrib =
          (qr.weights[q] * jac) * (trace.tangential[q].transpose().cast<Complex>() * gv);
      for (size_t i = 0; i < trace.dofs.size(); ++i) b[trace.dofs[i]] += contrib[i];
    }
  }
  return b;
}

void apply_essential_bc(std::vector<Triplet>& triplets, ComplexVector& rhs,
                        const std::vector<int>& dofs) {
  const int n = static_cast<int>(rhs.size());
  std::vector<uint8_t> drop(n, 0);
  for (int d : dofs) {
    if (d < 0 || d >= n)
      throw std::invalid_argument("apply_essential_bc: DOF index out of range");
    drop[d] = 1;
  }
  if (dofs.empty()) return;
  auto kept = std::remove_if(triplets.begin(), triplets.end(), [&](const Triplet& t) {
    return drop[t.row] || drop[t.col];
  });
  triplets.erase(kept, triplets.end());
  for (int d = 0; d < n; ++d) {
    if (!drop[d]) continue;
    triplets.push_back({d, d, Complex(1.0, 0.0)});
    rhs[d] = 0.0;
  }
}

CoupledSystem build_coupled_system(const PhysicalParams& params, const FESpace& e_space,
                                   const FESpace& j_space, const Submesh& metal,
                                   const VecField& f1, const VecField& f2,
                                   const BoundaryField& g, int boundary_marker,
                                   const AssemblyOptions& opt) {
  params.check();
  const double w = params.omega;
  const Complex ww = w * Complex(w, params.gamma);  // omega (omega + i gamma)

  const RegionCoeff inv_mu = [&params](int m) { return Complex(1.0 / params.mu(m), 0.0); };
  const RegionCoeff minus_w2_eps = [&params, w](int m) {
    return Complex(-w * w * params.eps(m), 0.0);
  };
  const RegionCoeff beta2 = [&params](int) {
    return Complex(params.beta * params.beta, 0.0);
  };
  const RegionCoeff minus_ww = [ww](int) { return -ww; };

  CoupledSystem sys;
  SystemBlocks& blk = sys.blocks;
  blk.n_E = e_space.n_dofs;
  blk.n_J = j_space.n_dofs;
  blk.offset_E = 0;
  blk.offset_J = blk.n_E;
  blk.eliminated = j_space.eliminated_dofs();

  // E block rows
  std::vector<Triplet> t_EE = assemble_volume_form(e_space, VolumeForm::CurlCurl, inv_mu, opt);
  {
    auto mass = assemble_volume_form(e_space, VolumeForm::MassE, minus_w2_eps, opt);
    t_EE.insert(t_EE.end(), mass.begin(), mass.end());
    auto bdry = assemble_boundary_form(e_space, boundary_marker, Complex(0.0, -w));
    t_EE.insert(t_EE.end(), bdry.begin(), bdry.end());
  }
  std::vector<Triplet> t_EJ =
      assemble_coupling_form(CouplingDirection::JToE, e_space, j_space, metal,
                             Complex(0.0, -w), opt);

  // J block rows
  std::vector<Triplet> t_JJ = assemble_volume_form(j_space, VolumeForm::DivDiv, beta2, opt);
  {
    auto mass = assemble_volume_form(j_space, VolumeForm::MassJ, minus_ww, opt);
    t_JJ.insert(t_JJ.end(), mass.begin(), mass.end());
  }
  std::vector<Triplet> t_JE =
      assemble_coupling_form(CouplingDirection::EToJ, e_space, j_space, metal,
                             Complex(0.0, w * params.omega_p * params.omega_p * params.eps0),
                             opt);

  blk.b_E = assemble_rhs_volume(e_space, f1, opt);
  blk.b_E += assemble_rhs_boundary(e_space, boundary_marker, g);
  blk.b_J = -assemble_rhs_volume(j_space, f2, opt);

  // Eliminate the zero-normal-flux DOFs block-wise: identity rows/columns in
  // A_JJ, zeroed coupling rows/columns, zero RHS.
  {
    std::vector<uint8_t> drop(blk.n_J, 0);
    for (int d : blk.eliminated) drop[d] = 1;
    auto drop_rows = [&drop](std::vector<Triplet>& ts) {
      ts.erase(std::remove_if(ts.begin(), ts.end(),
                              [&](const Triplet& t) { return drop[t.row]; }),
               ts.end());
    };
    auto drop_cols = [&drop](std::vector<Triplet>& ts) {
      ts.erase(std::remove_if(ts.begin(), ts.end(),
                              [&](const Triplet& t) { return drop[t.col]; }),
               ts.end());
    };
    if (!blk.eliminated.empty()) {
      drop_rows(t_JJ);
      drop_cols(t_JJ);
      drop_rows(t_JE);
      drop_cols(t_EJ);
      for (int d : blk.eliminated) {
        t_JJ.push_back({d, d, Complex(1.0, 0.0)});
        blk.b_J[d] = 0.0;
      }
    }
  }

  blk.A_EE = csr_from_triplets(blk.n_E, blk.n_E, t_EE);
  blk.A_EJ = csr_from_triplets(blk.n_E, blk.n_J, t_EJ);
  blk.A_JE = csr_from_triplets(blk.n_J, blk.n_E, t_JE);
  blk.A_JJ = csr_from_triplets(blk.n_J, blk.n_J, t_JJ);

  std::vector<Triplet> mono;
  mono.reserve(t_EE.size() + t_EJ.size() + t_JE.size() + t_JJ.size());
  for (const auto& t : t_EE) mono.push_back(t);
  for (const auto& t : t_EJ) mono.push_back({t.row, blk.offset_J + t.col, t.val});
  for (const auto& t : t_JE) mono.push_back({blk.offset_J + t.row, t.col, t.val});
  for (const auto& t : t_JJ) mono.push_back({blk.offset_J + t.row, blk.offset_J + t.col, t.val});

  const int n = blk.n_E + blk.n_J;
  sys.A = csr_from_triplets(n, n, std::move(mono));
  sys.b = ComplexVector(n);
  sys.b.head(blk.n_E) = blk.b_E;
  sys.b.tail(blk.n_J) = blk.b_J;
  return sys;
}

}  // namespace nhdfem
