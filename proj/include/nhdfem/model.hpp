// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "nhdfem/fespace.hpp"
#include "nhdfem/types.hpp"

namespace nhdfem {

/// Parameters of the coupled field/current model, in one consistent unit
/// system. Region markers map to piecewise-constant material coefficients:
/// marker 1 is the metal, marker 2 the host medium.
struct PhysicalParams {
  double omega = 1.0;    ///< angular frequency, > 0
  double omega_p = 1.0;  ///< plasma frequency, >= 0
  double gamma = 1.0;    ///< damping, >= 0
  double beta = 1.0;     ///< nonlocality parameter, >= 0
  double eps0 = 1.0;     ///< vacuum permittivity scale
  double eps_inf = 1.0;  ///< background permittivity (dispersion utility)
  double mu1 = 1.0;      ///< permeability, region 1
  double mu2 = 1.0;      ///< permeability, region 2
  double eps1 = 1.0;     ///< permittivity, region 1
  double eps2 = 1.0;     ///< permittivity, region 2

  double mu(int marker) const;
  double eps(int marker) const;
  /// Throws std::invalid_argument when an invariant fails.
  void check() const;
};

/// Boundary source evaluator: (point on boundary, outward unit normal).
using BoundaryField = std::function<Vec3c(const Vec3&, const Vec3&)>;

/// Spatially dispersive relative permittivity
///   eps(omega, k) = eps_inf - omega_p^2 / (omega (omega + i gamma) - beta^2 k^2).
/// Throws PoleError when the denominator magnitude is below 1e-30.
Complex nonlocal_permittivity(const PhysicalParams& params, double k);

/// Closed-form verification case on the unit cube with unit parameters:
/// exact fields, matching volume sources f1/f2, and boundary data g.
struct ManufacturedCase {
  PhysicalParams params;
  VecField E;
  VecField J;
  VecField curl_E;
  std::function<Complex(const Vec3&)> div_J;
  VecField f1;
  VecField f2;
  BoundaryField g;
};

/// The hard-coded unit-cube case: E = (e^{-iz}, 0, 0),
/// J = (sin pi x, sin pi y, i sin pi z). Requires
/// omega = omega_p = gamma = beta = eps0 = mu1 = eps1 = 1; rejects others.
ManufacturedCase manufactured_case_unit_cube(const PhysicalParams& params);

/// Time-harmonic plane wave A p e^{i k d.x} with wavenumber k = omega
/// sqrt(mu eps) of the host medium, under the e^{-i omega t} convention.
struct IncidentWave {
  double amplitude = 1.0;
  double omega = 1.0;
  double mu = 1.0;
  double eps = 1.0;
  Vec3 direction = Vec3(0, 1, 0);
  Vec3 polarization = Vec3(1, 0, 0);
  VecField E;
  VecField H;  ///< H = (1/(i omega mu)) curl E
};

/// Builds the wave from params (host medium mu2/eps2, frequency params.omega).
/// direction and polarization must be unit length and orthogonal.
IncidentWave make_plane_wave(const PhysicalParams& params, double amplitude,
                             const Vec3& direction, const Vec3& polarization);

/// Absorbing-boundary source of the wave: g(x, n) = i omega (H - n x E) x n.
BoundaryField plane_wave_source(const IncidentWave& wave);

}  // namespace nhdfem
