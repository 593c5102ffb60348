// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_ASSEMBLY_HPP
#define AMPERE_ASSEMBLY_HPP

#include <functional>
#include <vector>

#include "ampere/mesh.hpp"
#include "ampere/quadrature.hpp"
#include "ampere/sparse.hpp"
#include "ampere/spaces.hpp"

namespace ampere {

// ---------------------------------------------------------------------------
// Cellwise basis evaluation (sorted-vertex conventions; see DofMap).
// `entity_values` arguments are per-entity coefficient vectors as produced by
// expand_to_entities.
// ---------------------------------------------------------------------------

/// Whitney edge function of local edge k at barycentric point `bary`.
Vec3 edge_basis_value(const Mesh& mesh, int cell, int k,
                      const std::array<double, 4>& bary);

/// Curl of Whitney edge function k on `cell` (constant).
Vec3 edge_basis_curl(const Mesh& mesh, int cell, int k);

/// Edge field value at a barycentric point.
Vec3 eval_edge_field(const Mesh& mesh, int cell,
                     const std::array<double, 4>& bary,
                     const std::vector<double>& entity_values);

/// Cellwise-constant curl of an edge field.
Vec3 eval_edge_curl(const Mesh& mesh, int cell,
                    const std::vector<double>& entity_values);

/// Raviart-Thomas basis data of one cell: value coefficients against the
/// barycentric functions (phi_k = sum_m lambda_m coeff[k][m]) and the
/// cellwise-constant divergence, for the OUTWARD-flux-normalized basis.
/// Combine with DofMap::cell_signs to express globally oriented dofs.
struct RtCellBasis {
  std::array<std::array<Vec3, 4>, 4> coeff;
  std::array<double, 4> div;
};

RtCellBasis rt_cell_basis(const Mesh& mesh, int cell);

/// RT field value at a barycentric point (global orientation via dofmap signs).
Vec3 eval_rt_field(const Mesh& mesh, const DofMap& dofmap, int cell,
                   const std::array<double, 4>& bary,
                   const std::vector<double>& entity_values);

/// Cellwise-constant divergence of an RT field.
double eval_rt_div(const Mesh& mesh, const DofMap& dofmap, int cell,
                   const std::vector<double>& entity_values);

/// P1 field value / constant gradient on a cell (values indexed by vertex).
double eval_nodal_field(const Mesh& mesh, int cell,
                        const std::array<double, 4>& bary,
                        const std::vector<double>& vertex_values);
Vec3 eval_nodal_gradient(const Mesh& mesh, int cell,
                         const std::vector<double>& vertex_values);

// ---------------------------------------------------------------------------
// Bilinear forms of the optimality system and the estimator. All matrices are
// assembled over free dofs only. `coefficient` arguments are cellwise values
// evaluated per cell index.
// ---------------------------------------------------------------------------

using CellCoefficient = std::function<double(int cell)>;

/// K_ab = integral coeff * rot w_a . rot w_b  (one-point rule; integrand is
/// cellwise constant). Symmetric positive semidefinite; gradients lie in the
/// kernel.
SparseMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& edge_map,
                                const CellCoefficient& coefficient);

/// M_ab = integral weight * w_a . w_b over cells with restrict_to_subdomain
/// (or all cells when false); degree-2 rule, exact for the quadratic
/// integrand.
SparseMatrix assemble_vector_mass(const Mesh& mesh, const DofMap& edge_map,
                                  const CellCoefficient& weight,
                                  bool restrict_to_subdomain = false);

/// B_na = integral w_a . grad p_n; rows nodal, columns edge.
SparseMatrix assemble_mixed_b(const Mesh& mesh, const DofMap& edge_map,
                              const DofMap& nodal_map);

/// C_va = scale * integral_omega (zeta* w_a) . grad q_v: rows are submesh
/// nodal dofs, columns parent-mesh edge dofs (coupled through the submesh
/// edge-parent map).
SparseMatrix assemble_mixed_c(const Submesh& sub, const DofMap& parent_edge_map,
                              const DofMap& omega_nodal_map, double scale);

/// D_vw = scale * integral grad q_v . grad q_w (one-point rule).
SparseMatrix assemble_nodal_stiffness(const Mesh& mesh, const DofMap& nodal_map,
                                      double scale);

/// Load f(w_a) = integral (zeta j_d + J) . w_a - H_d . rot w_a with the
/// degree-5 rule; j_d is only evaluated on control-subdomain cells.
std::vector<double> assemble_load(const Mesh& mesh, const DofMap& edge_map,
                                  const std::function<Vec3(const Vec3&)>& j_d,
                                  const std::function<Vec3(const Vec3&)>& J,
                                  const std::function<Vec3(const Vec3&)>& H_d);

/// RT mass matrix, degree-2 rule (exact).
SparseMatrix assemble_rt_mass(const Mesh& mesh, const DofMap& face_map,
                              const CellCoefficient& weight);

/// Div-div matrix (divergences cellwise constant, one-point rule).
SparseMatrix assemble_div_div(const Mesh& mesh, const DofMap& face_map,
                              const CellCoefficient& weight);

}  // namespace ampere

#endif  // AMPERE_ASSEMBLY_HPP
