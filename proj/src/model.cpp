// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nhdfem {

double PhysicalParams::mu(int marker) const {
  if (marker == 1) return mu1;
  if (marker == 2) return mu2;
  throw std::invalid_argument("PhysicalParams::mu: unknown region marker " +
                              std::to_string(marker));
}

double PhysicalParams::eps(int marker) const {
  if (marker == 1) return eps1;
  if (marker == 2) return eps2;
  throw std::invalid_argument("PhysicalParams::eps: unknown region marker " +
                              std::to_string(marker));
}

void PhysicalParams::check() const {
  if (!(omega > 0)) throw std::invalid_argument("PhysicalParams: omega must be > 0");
  if (omega_p < 0) throw std::invalid_argument("PhysicalParams: omega_p must be >= 0");
  if (gamma < 0) throw std::invalid_argument("PhysicalParams: gamma must be >= 0");
  if (beta < 0) throw std::invalid_argument("PhysicalParams: beta must be >= 0");
  if (!(mu1 > 0 && mu2 > 0 && eps1 > 0 && eps2 > 0))
    throw std::invalid_argument("PhysicalParams: mu and eps must be > 0");
}

Complex nonlocal_permittivity(const PhysicalParams& params, double k) {
  const Complex denom =
      params.omega * Complex(params.omega, params.gamma) - params.beta * params.beta * k * k;
  if (std::abs(denom) < 1e-30)
    throw PoleError("nonlocal_permittivity: pole at omega=" + std::to_string(params.omega) +
                    ", k=" + std::to_string(k));
  return params.eps_inf - params.omega_p * params.omega_p / denom;
}

ManufacturedCase manufactured_case_unit_cube(const PhysicalParams& params) {
  for (double v : {params.omega, params.omega_p, params.gamma, params.beta, params.eps0,
                   params.mu1, params.eps1}) {
    if (v != 1.0)
      throw std::invalid_argument(
          "manufactured_case_unit_cube: all parameters must equal 1");
  }

  const double pi = M_PI;
  ManufacturedCase mc;
  mc.params = params;

  mc.E = [](const Vec3& x) -> Vec3c {
    return Vec3c(std::exp(-I * x[2]), 0.0, 0.0);
  };
  mc.curl_E = [](const Vec3& x) -> Vec3c {
    return Vec3c(0.0, -I * std::exp(-I * x[2]), 0.0);
  };
  mc.J = [pi](const Vec3& x) -> Vec3c {
    return Vec3c(std::sin(pi * x[0]), std::sin(pi * x[1]), I * std::sin(pi * x[2]));
  };
  mc.div_J = [pi](const Vec3& x) -> Complex {
    return pi * (std::cos(pi * x[0]) + std::cos(pi * x[1]) + I * std::cos(pi * x[2]));
  };
  // curl curl E = E and omega = eps = 1, so those terms cancel: f1 = -i J.
  mc.f1 = [J = mc.J](const Vec3& x) -> Vec3c { return -I * J(x); };
  // grad div J = -pi^2 J, omega(omega+i gamma) = 1+i: f2 = (1+i-pi^2) J - i E.
  mc.f2 = [J = mc.J, E = mc.E, pi](const Vec3& x) -> Vec3c {
    return (1.0 + I - pi * pi) * J(x) - I * E(x);
  };
  mc.g = [curlE = mc.curl_E, E = mc.E](const Vec3& x, const Vec3& n) -> Vec3c {
    const Vec3c c = curlE(x);
    const Vec3c e = E(x);
    const Vec3c nc = n.cast<Complex>();
    return ccross(c, nc) - I * ccross(ccross(nc, e), nc);
  };
  return mc;
}

IncidentWave make_plane_wave(const PhysicalParams& params, double amplitude,
                             const Vec3& direction, const Vec3& polarization) {
  params.check();
  if (std::abs(direction.norm() - 1.0) > 1e-12 || std::abs(polarization.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("make_plane_wave: direction and polarization must be unit");
  if (std::abs(direction.dot(polarization)) > 1e-12)
    throw std::invalid_argument("make_plane_wave: direction and polarization must be orthogonal");

  IncidentWave w;
  w.amplitude = amplitude;
  w.omega = params.omega;
  w.mu = params.mu2;
  w.eps = params.eps2;
  w.direction = direction;
  w.polarization = polarization;

  const double k = w.omega * std::sqrt(w.mu * w.eps);
  const double impedance_inv = std::sqrt(w.eps / w.mu);
  const Vec3 dp = direction.cross(polarization);
  w.E = [amplitude, k, d = direction, p = polarization](const Vec3& x) -> Vec3c {
    return (amplitude * std::exp(I * k * d.dot(x))) * p.cast<Complex>();
  };
  w.H = [amplitude, k, impedance_inv, d = direction, dp](const Vec3& x) -> Vec3c {
    return (amplitude * impedance_inv * std::exp(I * k * d.dot(x))) * dp.cast<Complex>();
  };
  return w;
}

BoundaryField plane_wave_source(const IncidentWave& wave) {
  return [E = wave.E, H = wave.H, omega = wave.omega](const Vec3& x, const Vec3& n) -> Vec3c {
    const Vec3c nc = n.cast<Complex>();
    return I * omega * ccross(H(x) - ccross(nc, E(x)), nc);
  };
}

}  // namespace nhdfem
