// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "nhdfem/assembly.hpp"
#include "nhdfem/config.hpp"
#include "nhdfem/linsolve.hpp"
#include "nhdfem/postprocess.hpp"

namespace nhdfem {

/// A linear solve did not reach its tolerance (or failed outright).
class SolverFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An output file or directory could not be written.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One solved instance of the coupled problem. The struct owns its mesh and
/// spaces; fields point into the struct, so it is heap-allocated and pinned.
struct CoupledSolve {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<Submesh> metal;
  FESpace e_space;
  FESpace j_space;
  CoupledSystem system;
  FEField E;
  FEField J;
  SolveReport report;

  CoupledSolve() = default;
  CoupledSolve(const CoupledSolve&) = delete;
  CoupledSolve& operator=(const CoupledSolve&) = delete;
};

/// Assembles and solves the coupled system on the given mesh (ownership is
/// taken). Sources may be empty (zero). Throws SolverFailure when the solver
/// does not converge.
std::unique_ptr<CoupledSolve> solve_coupled(std::unique_ptr<Mesh> mesh, int order,
                                            const PhysicalParams& params, const VecField& f1,
                                            const VecField& f2, const BoundaryField& g,
                                            int metal_marker, int boundary_marker,
                                            const SolverConfig& solver,
                                            const AssemblyOptions& opt = {});

/// Builds the mesh described by [mesh] (box / msh / ball).
Mesh mesh_from_config(const MeshConfig& mesh);

/// Manufactured-solution refinement study; writes <dir>/convergence.csv.
/// Requires problem = manufactured and unit parameters.
ConvergenceTable run_convergence_study(const RunConfig& config, std::ostream& log,
                                       const AssemblyOptions& opt = {});

/// Plane-wave sweep over physics.omega_list; writes <dir>/sigma_ext.csv with
/// columns omega_over_omega_p,sigma_ext (frequency left raw when omega_p = 0)
/// and VTK snapshots for frequencies listed in output.vtk_omegas.
void run_scattering(const RunConfig& config, std::ostream& log,
                    const AssemblyOptions& opt = {});

/// Permittivity scan over the (omega, k) grid; writes <dir>/dispersion.csv
/// with columns omega,k,re_eps,im_eps,pole (pole rows carry nan values).
void run_dispersion(const RunConfig& config, std::ostream& log);

/// Prints mesh statistics (entity counts, h, volume, markers).
void run_mesh_info(const RunConfig& config, std::ostream& out);

}  // namespace nhdfem
