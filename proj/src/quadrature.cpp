// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nhdfem {

namespace {

QuadRule make_rule(int exact_degree, std::vector<Vec3> pts, std::vector<Real> wts) {
  QuadRule r;
  r.exact_degree = exact_degree;
  r.points = std::move(pts);
  r.weights = std::move(wts);
  return r;
}

// Tetrahedron, degree 1: centroid.
const QuadRule tet_d1 = make_rule(1, {Vec3(0.25, 0.25, 0.25)}, {1.0 / 6.0});

// Tetrahedron, degree 2: symmetric 4-point rule, a = (5 - sqrt(5))/20.
const QuadRule tet_d2 = [] {
  const Real a = 0.138196601125010515180;
  const Real b = 0.585410196624968454461;
  std::vector<Vec3> p = {{a, a, a}, {b, a, a}, {a, b, a}, {a, a, b}};
  return make_rule(2, std::move(p), std::vector<Real>(4, 1.0 / 24.0));
}();

// Tetrahedron, degree 5: Keast 14-point rule.
const QuadRule tet_d5 = [] {
  std::vector<Vec3> p = {
      {0.31088591926330061, 0.31088591926330061, 0.31088591926330061},
      {0.0673422422100981706, 0.31088591926330061, 0.31088591926330061},
      {0.31088591926330061, 0.0673422422100981706, 0.31088591926330061},
      {0.31088591926330061, 0.31088591926330061, 0.0673422422100981706},
      {0.0927352503108912264, 0.0927352503108912264, 0.721794249067326321},
      {0.0927352503108912264, 0.721794249067326321, 0.0927352503108912264},
      {0.721794249067326321, 0.0927352503108912264, 0.0927352503108912264},
      {0.0927352503108912264, 0.0927352503108912264, 0.0927352503108912264},
      {0.0455037041256496495, 0.454496295874350351, 0.454496295874350351},
      {0.454496295874350351, 0.0455037041256496495, 0.454496295874350351},
      {0.454496295874350351, 0.454496295874350351, 0.0455037041256496495},
      {0.0455037041256496495, 0.0455037041256496495, 0.454496295874350351},
      {0.0455037041256496495, 0.454496295874350351, 0.0455037041256496495},
      {0.454496295874350351, 0.0455037041256496495, 0.0455037041256496495},
  };
  std::vector<Real> w = {
      0.0187813209530026418, 0.0187813209530026418, 0.0187813209530026418,
      0.0187813209530026418, 0.0122488405193936583, 0.0122488405193936583,
      0.0122488405193936583, 0.0122488405193936583, 0.00709100346284691107,
      0.00709100346284691107, 0.00709100346284691107, 0.00709100346284691107,
      0.00709100346284691107, 0.00709100346284691107,
  };
  return make_rule(5, std::move(p), std::move(w));
}();

// Tetrahedron, degree 6: Keast 24-point rule.
const QuadRule tet_d6 = [] {
  std::vector<Vec3> p = {
      {0.214602871259152029, 0.214602871259152029, 0.356191386222543912},
      {0.214602871259152029, 0.356191386222543912, 0.214602871259152029},
      {0.356191386222543912, 0.214602871259152029, 0.214602871259152029},
      {0.214602871259152029, 0.214602871259152029, 0.214602871259152029},
      {0.0406739585346113531, 0.0406739585346113531, 0.877978124396165941},
      {0.0406739585346113531, 0.877978124396165941, 0.0406739585346113531},
      {0.877978124396165941, 0.0406739585346113531, 0.0406739585346113531},
      {0.0406739585346113531, 0.0406739585346113531, 0.0406739585346113531},
      {0.32233789014227551, 0.32233789014227551, 0.32233789014227551},
      {0.032986329573173469, 0.32233789014227551, 0.32233789014227551},
      {0.32233789014227551, 0.032986329573173469, 0.32233789014227551},
      {0.32233789014227551, 0.32233789014227551, 0.032986329573173469},
      {0.0636610018750175253, 0.269672331458315808, 0.603005664791649141},
      {0.0636610018750175253, 0.603005664791649141, 0.269672331458315808},
      {0.269672331458315808, 0.0636610018750175253, 0.603005664791649141},
      {0.269672331458315808, 0.603005664791649141, 0.0636610018750175253},
      {0.603005664791649141, 0.0636610018750175253, 0.269672331458315808},
      {0.603005664791649141, 0.269672331458315808, 0.0636610018750175253},
      {0.0636610018750175253, 0.0636610018750175253, 0.603005664791649141},
      {0.0636610018750175253, 0.603005664791649141, 0.0636610018750175253},
      {0.603005664791649141, 0.0636610018750175253, 0.0636610018750175253},
      {0.0636610018750175253, 0.0636610018750175253, 0.269672331458315808},
      {0.0636610018750175253, 0.269672331458315808, 0.0636610018750175253},
      {0.269672331458315808, 0.0636610018750175253, 0.0636610018750175253},
  };
  std::vector<Real> w = {
      0.00665379170969458202, 0.00665379170969458202, 0.00665379170969458202,
      0.00665379170969458202, 0.00167953517588677382, 0.00167953517588677382,
      0.00167953517588677382, 0.00167953517588677382, 0.00922619692394245368,
      0.00922619692394245368, 0.00922619692394245368, 0.00922619692394245368,
      0.00803571428571428571, 0.00803571428571428571, 0.00803571428571428571,
      0.00803571428571428571, 0.00803571428571428571, 0.00803571428571428571,
      0.00803571428571428571, 0.00803571428571428571, 0.00803571428571428571,
      0.00803571428571428571, 0.00803571428571428571, 0.00803571428571428571,
  };
  return make_rule(6, std::move(p), std::move(w));
}();

// Triangle, degree 1: centroid.
const QuadRule tri_d1 =
    make_rule(1, {Vec3(1.0 / 3.0, 1.0 / 3.0, 0.0)}, {0.5});

// Triangle, degree 2: 3-point midpoint-of-median rule, a = 1/6.
const QuadRule tri_d2 = [] {
  const Real a = 1.0 / 6.0;
  const Real b = 2.0 / 3.0;
  std::vector<Vec3> p = {{a, a, 0.0}, {b, a, 0.0}, {a, b, 0.0}};
  return make_rule(2, std::move(p), std::vector<Real>(3, 1.0 / 6.0));
}();

// Triangle, degree 4: Dunavant 6-point rule.
const QuadRule tri_d4 = [] {
  std::vector<Vec3> p = {
      {0.445948490915964886, 0.445948490915964886, 0.0},
      {0.108103018168070227, 0.445948490915964886, 0.0},
      {0.445948490915964886, 0.108103018168070227, 0.0},
      {0.0915762135097707435, 0.816847572980458513, 0.0},
      {0.816847572980458513, 0.0915762135097707435, 0.0},
      {0.0915762135097707435, 0.0915762135097707435, 0.0},
  };
  std::vector<Real> w = {
      0.111690794839005733,  0.111690794839005733,  0.111690794839005733,
      0.0549758718276609338, 0.0549758718276609338, 0.0549758718276609338,
  };
  return make_rule(4, std::move(p), std::move(w));
}();

// Triangle, degree 5: classical 7-point rule, a = (6 -+ sqrt(15))/21.
const QuadRule tri_d5 = [] {
  const Real s15 = std::sqrt(15.0);
  const Real a1 = (6.0 - s15) / 21.0;
  const Real b1 = 1.0 - 2.0 * a1;
  const Real w1 = (155.0 - s15) / 2400.0;
  const Real a2 = (6.0 + s15) / 21.0;
  const Real b2 = 1.0 - 2.0 * a2;
  const Real w2 = (155.0 + s15) / 2400.0;
  std::vector<Vec3> p = {
      {1.0 / 3.0, 1.0 / 3.0, 0.0}, {a1, a1, 0.0}, {b1, a1, 0.0}, {a1, b1, 0.0},
      {a2, a2, 0.0},               {b2, a2, 0.0}, {a2, b2, 0.0},
  };
  std::vector<Real> w = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
  return make_rule(5, std::move(p), std::move(w));
}();

// Triangle, degree 6: Dunavant 12-point rule.
const QuadRule tri_d6 = [] {
  std::vector<Vec3> p = {
      {0.0630890144915022283, 0.873821971016995543, 0.0},
      {0.873821971016995543, 0.0630890144915022283, 0.0},
      {0.0630890144915022283, 0.0630890144915022283, 0.0},
      {0.249286745170910421, 0.501426509658179157, 0.0},
      {0.501426509658179157, 0.249286745170910421, 0.0},
      {0.249286745170910421, 0.249286745170910421, 0.0},
      {0.310352451033784405, 0.636502499121398647, 0.0},
      {0.636502499121398647, 0.310352451033784405, 0.0},
      {0.0531450498448169474, 0.636502499121398647, 0.0},
      {0.636502499121398647, 0.0531450498448169474, 0.0},
      {0.0531450498448169474, 0.310352451033784405, 0.0},
      {0.310352451033784405, 0.0531450498448169474, 0.0},
  };
  std::vector<Real> w = {
      0.0254224531851034085, 0.0254224531851034085, 0.0254224531851034085,
      0.058393137863189683,  0.058393137863189683,  0.058393137863189683,
      0.0414255378091867876, 0.0414255378091867876, 0.0414255378091867876,
      0.0414255378091867876, 0.0414255378091867876, 0.0414255378091867876,
  };
  return make_rule(6, std::move(p), std::move(w));
}();

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n, then
// mapped to [0,1].
QuadRule gauss_legendre_unit(int n) {
  QuadRule r;
  r.exact_degree = 2 * n - 1;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.points[i] = Vec3(0.5 * (1.0 + x), 0.0, 0.0);
    r.weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

}  // namespace

const QuadRule& tet_rule(int degree) {
  if (degree < 0 || degree > 6)
    throw std::invalid_argument("tet_rule: degree must be in [0,6], got " +
                                std::to_string(degree));
  if (degree <= 1) return tet_d1;
  if (degree == 2) return tet_d2;
  if (degree <= 5) return tet_d5;
  return tet_d6;
}

const QuadRule& tri_rule(int degree) {
  if (degree < 0 || degree > 6)
    throw std::invalid_argument("tri_rule: degree must be in [0,6], got " +
                                std::to_string(degree));
  if (degree <= 1) return tri_d1;
  if (degree == 2) return tri_d2;
  if (degree <= 4) return tri_d4;
  if (degree == 5) return tri_d5;
  return tri_d6;
}

const QuadRule& segment_rule(int degree) {
  if (degree < 0)
    throw std::invalid_argument("segment_rule: degree must be >= 0");
  const int n = (degree + 2) / 2;
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre_unit(n)).first;
  return it->second;
}

}  // namespace nhdfem
