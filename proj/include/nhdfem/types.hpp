// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhdfem {

using Real = double;
using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex I{0.0, 1.0};

/// Algebraic cross product of complex 3-vectors. Eigen's cross() conjugates
/// every component when the scalar type is complex, so it cannot be used for
/// field algebra.
inline Vec3c ccross(const Vec3c& a, const Vec3c& b) {
  return Vec3c(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]);
}

/// Thrown by mesh/file readers; carries the 1-based line number of the
/// offending input line (0 if not line-addressable).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

/// Direct factorization failed: the matrix is structurally or numerically
/// singular.
class SingularMatrixError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cell whose Jacobian determinant is below the degeneracy threshold.
class DegenerateCellError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The dispersion denominator vanished (undamped resonance).
class PoleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A face set that should enclose a volume fails the closed-surface check.
class InvalidSurfaceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nhdfem
