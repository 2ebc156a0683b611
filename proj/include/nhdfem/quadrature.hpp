// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nhdfem/types.hpp"

namespace nhdfem {

/// Quadrature rule on a reference element. Points live on the reference
/// tetrahedron conv{0,e1,e2,e3}, the reference triangle conv{0,e1,e2} (z = 0),
/// or the segment [0,1] (y = z = 0). Weights include the reference measure,
/// i.e. they sum to 1/6, 1/2, or 1 respectively.
struct QuadRule {
  std::vector<Vec3> points;
  std::vector<Real> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Smallest stored tetrahedron rule exact for polynomials of total degree
/// >= `degree`. Supported requests: 0 <= degree <= 6. All stored rules have
/// positive weights and interior points.
const QuadRule& tet_rule(int degree);

/// Triangle counterpart of tet_rule, same guarantees, 0 <= degree <= 6.
const QuadRule& tri_rule(int degree);

/// Gauss-Legendre rule on [0,1] exact for polynomials of degree >= `degree`
/// (uses ceil((degree+1)/2) points). Any degree >= 0.
const QuadRule& segment_rule(int degree);

}  // namespace nhdfem
