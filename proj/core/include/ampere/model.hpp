// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_MODEL_HPP
#define AMPERE_MODEL_HPP

#include <functional>

#include "ampere/geometry.hpp"

namespace ampere {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Continuous problem description: geometry, material data, target data, and
/// (when available) the exact optimal triple used for error measurement.
struct ProblemData {
  Box domain;
  Box control;                     // control subdomain (strictly inside)
  double kappa = 1.0;              // control cost weight
  ScalarField mu;                  // magnetic permeability (cellwise sampled)
  VectorField j_d;                 // desired current, acts on the control box
  VectorField H_d;                 // desired magnetic field
  VectorField J;                   // fixed external current
  /// rot H_d where H_d is rot-conforming; empty when unavailable. Enables
  /// the alternative first majorant term that avoids interpolating H_d.
  VectorField rot_H_d;

  bool has_exact = false;          // exact optimal triple known?
  VectorField E_exact;             // optimal state
  VectorField H_exact;             // optimal magnetic field
  VectorField j_exact;             // optimal control (on the control box)
};

/// Benchmark configuration on (-0.5,1)^3 with control box (0,0.5)^3, a
/// permeability jump (mu = 10 where x0 < 0 and x1 < 0, else 1) and a
/// trigonometric optimal triple that vanishes on the column
/// (0,0.5) x (0,0.5) x (-0.5,1) containing the control box.
ProblemData benchmark_problem(double kappa = 1.0);

/// The smooth field whose restriction outside the column is the optimal
/// state of the benchmark (used by cross-checks of the data construction).
Vec3 benchmark_E_smooth(const Vec3& x);

/// rot of the benchmark magnetic field (analytic).
Vec3 benchmark_rot_H(const Vec3& x);

/// Is x strictly inside the column (0,0.5) x (0,0.5) x (-0.5,1)?
bool benchmark_in_column(const Vec3& x);

/// Max-norm residuals of the differential identities tying the benchmark
/// data together, measured by central finite differences at random interior
/// points away from the material/data interfaces:
///   rot E         = mu * H        (smooth state),
///   rot H         = zeta j + J    (state equation data),
///   rot E_optimal = mu * (H - H_d) (cut-off state).
struct IdentityResiduals {
  double rot_E_vs_mu_H = 0.0;
  double rot_H_vs_current = 0.0;
  double rot_E_opt_vs_mu_H_minus_Hd = 0.0;
  double max() const;
};

IdentityResiduals verify_benchmark_identities(int samples = 500,
                                              double step = 1e-5,
                                              unsigned seed = 7);

}  // namespace ampere

#endif  // AMPERE_MODEL_HPP
