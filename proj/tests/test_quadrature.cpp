// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "nhdfem/quadrature.hpp"

using namespace nhdfem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// integral of x^a y^b z^c over the reference tetrahedron
double tet_monomial(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

// integral of x^a y^b over the reference triangle
double tri_monomial(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double integrate(const QuadRule& qr, int a, int b, int c) {
  double acc = 0.0;
  for (int q = 0; q < qr.size(); ++q)
    acc += qr.weights[q] * std::pow(qr.points[q][0], a) * std::pow(qr.points[q][1], b) *
           std::pow(qr.points[q][2], c);
  return acc;
}

}  // namespace

TEST_CASE("tetrahedron rules integrate monomials exactly up to their degree") {
  for (int degree = 0; degree <= 6; ++degree) {
    const QuadRule& qr = tet_rule(degree);
    CHECK(qr.exact_degree >= degree);
    for (int a = 0; a + 0 <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c)
          CHECK(integrate(qr, a, b, c) == doctest::Approx(tet_monomial(a, b, c)).epsilon(1e-13));
  }
}

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
  for (int degree = 0; degree <= 6; ++degree) {
    const QuadRule& qr = tri_rule(degree);
    CHECK(qr.exact_degree >= degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        CHECK(integrate(qr, a, b, 0) == doctest::Approx(tri_monomial(a, b)).epsilon(1e-13));
  }
}

TEST_CASE("segment rules integrate monomials exactly up to their degree") {
  for (int degree = 0; degree <= 13; ++degree) {
    const QuadRule& qr = segment_rule(degree);
    for (int a = 0; a <= degree; ++a)
      CHECK(integrate(qr, a, 0, 0) == doctest::Approx(1.0 / (a + 1)).epsilon(1e-13));
  }
}

TEST_CASE("weights are positive and sum to the reference measure") {
  for (int degree = 0; degree <= 6; ++degree) {
    double tet_sum = 0.0, tri_sum = 0.0, seg_sum = 0.0;
    for (double w : tet_rule(degree).weights) {
      CHECK(w > 0.0);
      tet_sum += w;
    }
    for (double w : tri_rule(degree).weights) {
      CHECK(w > 0.0);
      tri_sum += w;
    }
    for (double w : segment_rule(degree).weights) {
      CHECK(w > 0.0);
      seg_sum += w;
    }
    CHECK(tet_sum == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(tri_sum == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(seg_sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("points lie strictly inside the reference elements") {
  for (int degree = 0; degree <= 6; ++degree) {
    for (const Vec3& p : tet_rule(degree).points) {
      CHECK(p.minCoeff() > 0.0);
      CHECK(p.sum() < 1.0);
    }
    for (const Vec3& p : tri_rule(degree).points) {
      CHECK(p[0] > 0.0);
      CHECK(p[1] > 0.0);
      CHECK(p[0] + p[1] < 1.0);
      CHECK(p[2] == 0.0);
    }
    for (const Vec3& p : segment_rule(degree).points) {
      CHECK(p[0] > 0.0);
      CHECK(p[0] < 1.0);
      CHECK(p[1] == 0.0);
      CHECK(p[2] == 0.0);
    }
  }
}
