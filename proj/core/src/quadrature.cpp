// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/quadrature.hpp"

namespace ampere {

namespace {

QuadratureRule make_degree1() {
  QuadratureRule r;
  r.points = {{0.25, 0.25, 0.25, 0.25}};
  r.weights = {1.0};
  r.degree = 1;
  return r;
}

QuadratureRule make_degree2() {
  // Symmetric 4-point rule with vertices at (a,b,b,b).
  const double a = 0.5854101966249685;  // (5 + 3*sqrt(5))/20
  const double b = 0.1381966011250105;  // (5 - sqrt(5))/20
  QuadratureRule r;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> p = {b, b, b, b};
    p[i] = a;
    r.points.push_back(p);
    r.weights.push_back(0.25);
  }
  r.degree = 2;
  return r;
}

QuadratureRule make_degree5() {
  // 15-point degree-5 rule: centroid + two 4-orbits + one 6-orbit.
  QuadratureRule r;
  r.points.push_back({0.25, 0.25, 0.25, 0.25});
  r.weights.push_back(0.1817020685825351);
  struct Orbit4 {
    double apex, w;
  };
  const Orbit4 orb4[] = {{0.0, 0.0361607142857143},
                         {0.7272727272727273, 0.0698714945161738}};
  for (const auto& o : orb4) {
    const double rest = (1.0 - o.apex) / 3.0;
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> p = {rest, rest, rest, rest};
      p[i] = o.apex;
      r.points.push_back(p);
      r.weights.push_back(o.w);
    }
  }
  const double d = 0.0665501535736643;
  const double c = 0.5 - d;
  const double w6 = 0.0656948493683187;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      std::array<double, 4> p = {d, d, d, d};
      p[i] = c;
      p[j] = c;
      r.points.push_back(p);
      r.weights.push_back(w6);
    }
  }
  r.degree = 5;
  return r;
}

QuadratureRule make_degree11() {
  // Conical product of 7-point Gauss-Legendre rules through the Duffy map
  //   x = u, y = v(1-u), z = w(1-u)(1-v), Jacobian (1-u)^2 (1-v).
  // Weights are renormalized to sum to exactly 1.
  const double gx[7] = {-0.9491079123427585, -0.7415311855993945,
                        -0.4058451513773972, 0.0,
                        0.4058451513773972,  0.7415311855993945,
                        0.9491079123427585};
  const double gw[7] = {0.1294849661688697, 0.2797053914892766,
                        0.3818300505051189, 0.4179591836734694,
                        0.3818300505051189, 0.2797053914892766,
                        0.1294849661688697};
  double u[7], w[7];
  for (int i = 0; i < 7; ++i) {
    u[i] = 0.5 * (gx[i] + 1.0);
    w[i] = 0.5 * gw[i];
  }
  QuadratureRule r;
  double total = 0.0;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      for (int k = 0; k < 7; ++k) {
        const double x = u[i];
        const double y = u[j] * (1.0 - u[i]);
        const double z = u[k] * (1.0 - u[i]) * (1.0 - u[j]);
        const double wt =
            w[i] * w[j] * w[k] * (1.0 - u[i]) * (1.0 - u[i]) * (1.0 - u[j]);
        r.points.push_back({1.0 - x - y - z, x, y, z});
        r.weights.push_back(wt);
        total += wt;
      }
    }
  }
  for (double& wt : r.weights) wt /= total;
  r.degree = 11;
  return r;
}

TriangleRule make_triangle4() {
  // Two 3-orbits (degree 4, 6 points).
  struct Orbit {
    double a, w;
  };
  const Orbit orbits[] = {{0.445948490915965, 0.223381589678011},
                          {0.091576213509771, 0.109951743655322}};
  TriangleRule r;
  for (const auto& o : orbits) {
    const double b = 1.0 - 2.0 * o.a;
    r.points.push_back({b, o.a, o.a});
    r.points.push_back({o.a, b, o.a});
    r.points.push_back({o.a, o.a, b});
    for (int i = 0; i < 3; ++i) r.weights.push_back(o.w);
  }
  r.degree = 4;
  return r;
}

SegmentRule make_gauss4() {
  const double x1 = 0.3399810435848563;
  const double x2 = 0.8611363115940526;
  const double w1 = 0.6521451548625461;
  const double w2 = 0.3478548451374538;
  SegmentRule r;
  r.points = {(1.0 - x2) / 2.0, (1.0 - x1) / 2.0, (1.0 + x1) / 2.0,
              (1.0 + x2) / 2.0};
  r.weights = {w2 / 2.0, w1 / 2.0, w1 / 2.0, w2 / 2.0};
  r.degree = 7;
  return r;
}

}  // namespace

const QuadratureRule& tet_rule_degree1() {
  static const QuadratureRule r = make_degree1();
  return r;
}

const QuadratureRule& tet_rule_degree2() {
  static const QuadratureRule r = make_degree2();
  return r;
}

const QuadratureRule& tet_rule_degree5() {
  static const QuadratureRule r = make_degree5();
  return r;
}

const QuadratureRule& tet_rule_degree11() {
  static const QuadratureRule r = make_degree11();
  return r;
}

const TriangleRule& triangle_rule_degree4() {
  static const TriangleRule r = make_triangle4();
  return r;
}

const SegmentRule& segment_rule_gauss4() {
  static const SegmentRule r = make_gauss4();
  return r;
}

}  // namespace ampere
