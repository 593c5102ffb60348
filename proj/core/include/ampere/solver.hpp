// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_SOLVER_HPP
#define AMPERE_SOLVER_HPP

#include <vector>

#include "ampere/assembly.hpp"
#include "ampere/mesh.hpp"
#include "ampere/model.hpp"
#include "ampere/sparse.hpp"
#include "ampere/spaces.hpp"

namespace ampere {

/// Generic cellwise-evaluable vector field: callers receive the cell, the
/// barycentric coordinates, and the physical point.
using CellVectorField =
    std::function<Vec3(int cell, const std::array<double, 4>& bary,
                       const Vec3& x)>;

/// All dof maps of one mesh plus the control submesh they live on.
struct DiscreteSpaces {
  Submesh sub;
  DofMap edge;         ///< zero-trace edge space on the full mesh (state)
  DofMap edge_free;    ///< free-trace edge space on the full mesh (aux/data)
  DofMap nodal;        ///< zero-trace P1 on the full mesh (multiplier u)
  DofMap omega_nodal;  ///< P1 on the control submesh (multiplier v)
  DofMap omega_edge;   ///< free edge space on the control submesh (control)
  DofMap omega_face;   ///< zero-normal-trace RT space on the control submesh
};

DiscreteSpaces build_spaces(const Mesh& mesh);

/// Symmetric block system
///   [ A  B^T  C^T ] (E)   (f)
///   [ B   0    0  ] (u) = (0)
///   [ C   0    D  ] (v)   (0)
/// with A the curl-curl form plus the kappa^-1-weighted control-domain mass,
/// B the full-domain gradient coupling, C the kappa^-1-weighted
/// control-domain gradient coupling, and D the kappa^-1-weighted nodal
/// stiffness on the control domain.
struct KktSystem {
  int n_E = 0;
  int n_u = 0;
  int n_v = 0;
  int pinned = -1;  ///< globally pinned row after gauge fixing, else -1
  SparseMatrix matrix;
  std::vector<double> rhs;
  /// Positive composite diagonal used to precondition the indefinite solve:
  /// |diag A| on the E block, the unit nodal-stiffness diagonal on the
  /// (structurally zero-diagonal) u block, |diag D| on the v block.
  std::vector<double> precond;

  int size() const { return n_E + n_u + n_v; }
};

KktSystem assemble_kkt(const Mesh& mesh, const DiscreteSpaces& spaces,
                       const ProblemData& data);

/// Removes the constant kernel of the v multiplier by pinning one v dof to
/// zero (row/column cleared, unit diagonal). grad v is unaffected by the
/// choice of pinned dof.
void gauge_fix_v(KktSystem& system, int local_v_dof = 0);

/// Discrete magnetic field mu^-1 rot E_h + interpolated H_d: a cellwise
/// constant part plus an edge field.
struct MagneticField {
  std::vector<Vec3> curl_part;     ///< per cell: mu^-1 rot E_h
  std::vector<double> hd_entity;   ///< all-edge coefficients of H_d
};

Vec3 eval_magnetic(const Mesh& mesh, const MagneticField& field, int cell,
                   const std::array<double, 4>& bary);

/// Solution of the optimality system together with the recovered control and
/// magnetic field. All coefficient vectors are per-entity (constrained
/// entities hold zero).
struct OptimalitySolution {
  std::vector<double> E;    ///< all edges of the full mesh
  std::vector<double> u;    ///< all vertices of the full mesh
  std::vector<double> v;    ///< all vertices of the control submesh
  std::vector<double> j;    ///< all edges of the control submesh (recovered)
  std::vector<double> j_d;  ///< all edges of the control submesh (data)
  MagneticField H;
  SolveReport report;
};

/// Solves the gauge-fixed system iteratively and recovers
///   j_h = j_dh - kappa^-1 (E_h|omega + grad v_h),
///   H_h = mu^-1 rot E_h + H_dh.
OptimalitySolution solve_optimality(const Mesh& mesh,
                                    const DiscreteSpaces& spaces,
                                    const ProblemData& data,
                                    const KktSystem& system, double tol,
                                    int max_iterations);

/// Projects the discrete-gradient component out of an edge-space load:
/// the result vanishes on all gradient test functions (used to probe the
/// vanishing of the u multiplier). Solves the nodal Poisson problem
/// (grad q, grad p) = f(grad p) by conjugate gradients.
std::vector<double> remove_gradient_component(const Mesh& mesh,
                                              const DiscreteSpaces& spaces,
                                              const std::vector<double>& load,
                                              double tol = 1e-12);

/// Exact-error measurement in the combined norm
///   total^2 = |H - H_h|_mu^2 + kappa |j - j_h|_omega^2
/// by degree-5 cellwise quadrature against ProblemData's exact fields.
struct ErrorBreakdown {
  double err_H = 0.0;
  double err_j = 0.0;
  double total = 0.0;
  std::vector<double> cell_H2;  ///< per full-mesh cell, mu-weighted squares
  std::vector<double> cell_j2;  ///< per submesh cell squares
};

ErrorBreakdown triple_norm_error(const Mesh& mesh,
                                 const DiscreteSpaces& spaces,
                                 const CellVectorField& H_h,
                                 const CellVectorField& j_h_omega,
                                 const ProblemData& data);

ErrorBreakdown triple_norm_error(const Mesh& mesh,
                                 const DiscreteSpaces& spaces,
                                 const OptimalitySolution& sol,
                                 const ProblemData& data);

}  // namespace ampere

#endif  // AMPERE_SOLVER_HPP
