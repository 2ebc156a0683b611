// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nhdfem/assembly.hpp"
#include "nhdfem/fespace.hpp"
#include "nhdfem/model.hpp"

namespace nhdfem {

/// Error norms of a discrete field against an exact solution. combined_sum
/// adds the two pieces (the table-comparable convention of this solver's
/// reference results); combined_rss is the root-sum-square variant.
struct ErrorNorms {
  double l2 = 0.0;
  double deriv = 0.0;  ///< curl (Nedelec) or div (RT) seminorm error
  double combined_sum = 0.0;
  double combined_rss = 0.0;
};

/// Cellwise quadrature (degree 2r+2) of |E_h - E|^2 and |curl E_h - curl E|^2.
ErrorNorms error_hcurl(const FEField& field, const VecField& exact,
                       const VecField& exact_curl);

/// Cellwise quadrature (degree 2r+2) of |J_h - J|^2 and |div J_h - div J|^2.
ErrorNorms error_hdiv(const FEField& field, const VecField& exact,
                      const std::function<Complex(const Vec3&)>& exact_div);

/// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); entry 0 is NaN (undefined).
/// Requires equal lengths >= 2, positive errors, strictly decreasing h.
std::vector<double> convergence_orders(const std::vector<double>& errors,
                                       const std::vector<double>& h_values);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  int ndofs_E = 0;
  int ndofs_J = 0;
  double err_E = 0.0;
  double order_E = 0.0;  ///< NaN on the first row
  double err_J = 0.0;
  double order_J = 0.0;  ///< NaN on the first row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

/// CSV with columns exactly: level,h,ndofs_E,ndofs_J,err_E,order_E,err_J,order_J.
/// NaN orders are written as empty cells.
void write_convergence_csv(const ConvergenceTable& table, std::ostream& out);

/// Extinction cross section
///   sigma = -1/(D |E0|^2) * surface integral of
///           Re[E_inc x conj(H_s) + E_s x conj(H_inc)] . n dS
/// over the faces carrying surface_marker, where H_h = curl E_h / (i omega mu),
/// E_s = E_h - E_inc, H_s = H_h - H_inc. Normals point away from cells with
/// region inside_marker; discrete fields are evaluated on the outside cell.
/// diameter is the true scatterer diameter (not measured from the mesh).
/// Throws InvalidSurfaceError when the marked faces fail the closed-surface
/// check (the flux of constant fields must vanish).
double extinction_cross_section(const FEField& E_h, const IncidentWave& wave,
                                int surface_marker, int inside_marker, double diameter,
                                const PhysicalParams& params);

/// Legacy ASCII VTK unstructured-grid export. Each field contributes three
/// per-cell vector arrays evaluated at cell centroids: <name>_re, <name>_im,
/// and <name>_mag (componentwise magnitudes). Field spaces must live on the
/// given mesh.
void export_vtk(const Mesh& mesh,
                const std::vector<std::pair<std::string, const FEField*>>& fields,
                std::ostream& out);

/// Relative per-block defects of the solved monolithic vector x:
///   r_E = |A_EE x_E + A_EJ x_J - b_E| / (|A_EE| |x_E| + |A_EJ| |x_J| + |b_E|)
/// and analogously r_J (norms: vector 2-norm, matrix inf-norm).
struct BlockResiduals {
  double r_E = 0.0;
  double r_J = 0.0;
};

BlockResiduals galerkin_residual(const SystemBlocks& blocks, const ComplexVector& x);

/// Imaginary parts of the discrete variational equations tested with the
/// solution itself, integrated independently of the assembled matrices
/// (quadrature degree 2r+2):
///   E: -omega |E_T|^2 - omega Re(J, E)_s - Im(f1, E) - Im<g, E_T> = 0
///   J: -omega gamma |J|^2 + omega omega_p^2 eps0 Re(E, J)_s + Im(f2, J)_s = 0
/// residuals are the absolute defects, scales the sums of term magnitudes.
struct PowerBalanceReport {
  double e_residual = 0.0;
  double e_scale = 0.0;
  double j_residual = 0.0;
  double j_scale = 0.0;
};

PowerBalanceReport power_balance(const FEField& E, const FEField& J, const Submesh& metal,
                                 const PhysicalParams& params, const VecField& f1,
                                 const VecField& f2, const BoundaryField& g,
                                 int boundary_marker);

/// sqrt of the surface integral of |J . n|^2 over the boundary of J's mesh.
double boundary_normal_flux_l2(const FEField& J);

}  // namespace nhdfem
