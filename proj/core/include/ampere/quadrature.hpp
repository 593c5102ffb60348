// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_QUADRATURE_HPP
#define AMPERE_QUADRATURE_HPP

#include <array>
#include <vector>

namespace ampere {

/// Quadrature rule on the reference tetrahedron in barycentric coordinates.
/// Weights are normalized to sum to 1, so that for a physical tetrahedron T
///   integral_T f = |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<std::array<double, 4>> points;  ///< barycentric coordinates
  std::vector<double> weights;                ///< sum to 1
  int degree = 0;                             ///< exact for polynomials up to this degree
};

/// One-point (centroid) rule, exact for degree 1.
const QuadratureRule& tet_rule_degree1();

/// Four-point rule, exact for degree 2.
const QuadratureRule& tet_rule_degree2();

/// Fifteen-point rule, exact for degree 5. Used for all integrals involving
/// the trigonometric problem data.
const QuadratureRule& tet_rule_degree5();

/// Conical-product rule (7 Gauss points per axis, 343 points), exact for
/// degree 11. Reserved for oracle cross-checks of lower-order rules.
const QuadratureRule& tet_rule_degree11();

/// Quadrature on the reference triangle (barycentric, weights sum to 1).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Six-point rule, exact for degree 4. Used for face-flux interpolation.
const TriangleRule& triangle_rule_degree4();

/// Gauss-Legendre points/weights on [0,1], exact for degree 2n-1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;  ///< sum to 1
  int degree = 0;
};

/// Four-point Gauss rule on [0,1], exact for degree 7. Used for edge-moment
/// interpolation.
const SegmentRule& segment_rule_gauss4();

}  // namespace ampere

#endif  // AMPERE_QUADRATURE_HPP
