// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "nhdfem/fespace.hpp"
#include "nhdfem/linsolve.hpp"
#include "nhdfem/model.hpp"

namespace nhdfem {

/// All sesquilinear forms use (a, b) = integral of a . conj(b): the TEST
/// function is conjugated. Matrix entry (i, j) tests trial basis j against
/// test basis i.

enum class VolumeForm { CurlCurl, MassE, DivDiv, MassJ };
enum class CouplingDirection { JToE, EToJ };

/// Per-region complex coefficient, looked up by cell region marker.
using RegionCoeff = std::function<Complex(int marker)>;

struct AssemblyOptions {
  bool serial = false;  ///< force a single-threaded cell loop
};

/// Thread count for assembly cell loops: 1 when serial, else the
/// NHDFEM_THREADS environment variable or the hardware concurrency.
int assembly_thread_count(bool serial);

/// Volume forms over all cells of the space's mesh (quadrature degree 2r+1):
///   CurlCurl: coeff (curl phi_j, curl phi_i)   [Nedelec]
///   MassE:    coeff (phi_j, phi_i)             [Nedelec]
///   DivDiv:   coeff (div phi_j, div phi_i)     [RT]
///   MassJ:    coeff (phi_j, phi_i)             [RT]
/// Throws std::invalid_argument when the form does not match the space kind.
std::vector<Triplet> assemble_volume_form(const FESpace& space, VolumeForm kind,
                                          const RegionCoeff& coeff,
                                          const AssemblyOptions& opt = {});

/// weight * surface integral of phi_{j,T} . conj(phi_{i,T}) over the boundary
/// faces carrying the marker. A marker with no faces yields an empty list.
std::vector<Triplet> assemble_boundary_form(const FESpace& space, int boundary_marker,
                                            Complex weight);

/// Rectangular coupling over the metal submesh cells. JToE: rows are Nedelec
/// test DOFs, columns RT trial DOFs, entries weight * (phiJ_j, phiE_i) on the
/// shared physical cell; EToJ transposes the roles. Throws
/// std::invalid_argument when the spaces do not live on metal.mesh and its
/// parent.
std::vector<Triplet> assemble_coupling_form(CouplingDirection dir, const FESpace& e_space,
                                            const FESpace& j_space, const Submesh& metal,
                                            Complex weight,
                                            const AssemblyOptions& opt = {});

/// Volume load: b_i = integral of f . conj(phi_i), quadrature degree 2r+2.
ComplexVector assemble_rhs_volume(const FESpace& space, const VecField& f,
                                  const AssemblyOptions& opt = {});

/// Boundary load over marked boundary faces:
/// b_i = surface integral of g(x, n) . conj(phi_{i,T}), degree 2r+2.
ComplexVector assemble_rhs_boundary(const FESpace& space, int boundary_marker,
                                    const BoundaryField& g);

/// Symmetric elimination on a square triplet system: rows and columns of the
/// given DOFs are dropped, a unit diagonal is inserted, and their RHS entries
/// are zeroed (prescribed values are zero, so no RHS adjustment is needed).
void apply_essential_bc(std::vector<Triplet>& triplets, ComplexVector& rhs,
                        const std::vector<int>& dofs);

/// The assembled blocks of the coupled system, with the essential zero-flux
/// condition already eliminated (identity rows/columns, zero RHS).
struct SystemBlocks {
  int n_E = 0;
  int n_J = 0;
  int offset_E = 0;  ///< E DOFs first in the monolithic numbering
  int offset_J = 0;
  ComplexCSRMatrix A_EE, A_EJ, A_JE, A_JJ;
  ComplexVector b_E, b_J;
  std::vector<int> eliminated;  ///< block-local J DOFs with prescribed zero
};

struct CoupledSystem {
  SystemBlocks blocks;
  ComplexCSRMatrix A;  ///< monolithic (n_E + n_J) square matrix
  ComplexVector b;
};

/// Assembles the full coupled system with all unknowns moved left:
///   [ curlcurl(1/mu) - omega^2 mass(eps) - i omega boundary ] E
///     - i omega (J extended by zero, u)                         = (f1, u) + <g, u_T>
///   [ beta^2 divdiv - omega (omega + i gamma) mass ] J
///     + i omega omega_p^2 eps0 (E, v)_s                         = -(f2, v)_s
/// Empty std::function sources are treated as zero.
CoupledSystem build_coupled_system(const PhysicalParams& params, const FESpace& e_space,
                                   const FESpace& j_space, const Submesh& metal,
                                   const VecField& f1, const VecField& f2,
                                   const BoundaryField& g, int boundary_marker,
                                   const AssemblyOptions& opt = {});

}  // namespace nhdfem
