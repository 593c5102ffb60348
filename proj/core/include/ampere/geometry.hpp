// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_GEOMETRY_HPP
#define AMPERE_GEOMETRY_HPP

#include <Eigen/Dense>

namespace ampere {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box, used for the computational domain and the control region.
struct Box {
  Vec3 lo;
  Vec3 hi;

  /// Strict interior test (points on the boundary are outside).
  bool contains(const Vec3& x) const {
    return x[0] > lo[0] && x[0] < hi[0] && x[1] > lo[1] && x[1] < hi[1] &&
           x[2] > lo[2] && x[2] < hi[2];
  }

  double diameter() const { return (hi - lo).norm(); }

  bool valid() const { return lo[0] < hi[0] && lo[1] < hi[1] && lo[2] < hi[2]; }
};

}  // namespace ampere

#endif  // AMPERE_GEOMETRY_HPP
