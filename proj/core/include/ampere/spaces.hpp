// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_SPACES_HPP
#define AMPERE_SPACES_HPP

#include <functional>
#include <string>
#include <vector>

#include "ampere/mesh.hpp"

namespace ampere {

/// The five finite-element spaces of the discrete optimality system and the
/// estimator:
///  - EdgeZeroTrace:      lowest-order Nedelec edge space on the full mesh
///                        with vanishing tangential trace (dofs on interior
///                        edges only);
///  - EdgeFree:           the same space without the trace constraint;
///  - NodalZeroTrace:     P1 on the full mesh, zero on the boundary;
///  - NodalOmega:         P1 on the control submesh, unconstrained;
///  - FaceZeroTraceOmega: lowest-order Raviart-Thomas on the control submesh
///                        with vanishing normal trace (interior faces only).
enum class SpaceKind {
  EdgeZeroTrace,
  EdgeFree,
  NodalZeroTrace,
  NodalOmega,
  FaceZeroTraceOmega,
};

std::string to_string(SpaceKind kind);

/// Entity type a space attaches its dofs to.
enum class EntityKind { Vertex, Edge, Face };

EntityKind entity_kind(SpaceKind kind);

/// Degree-of-freedom map for one space on one mesh. Global edge dofs are
/// oriented from the smaller to the larger global vertex index; since cell
/// dof tables are built on ascending-sorted cell vertices, every cell-local
/// edge sign is +1. Face dofs are oriented along the global face normal
/// (right-handed around the sorted vertex triple); the per-cell sign is +1
/// when that normal points out of the cell.
struct DofMap {
  SpaceKind kind;
  int n_entities = 0;  ///< total entities of the carrier type
  int n_free = 0;      ///< unconstrained dofs

  /// entity -> free dof index, or -1 for constrained entities.
  std::vector<int> entity_to_dof;
  /// free dof index -> entity.
  std::vector<int> dof_to_entity;

  /// cell -> local dof -> global entity.
  std::vector<std::vector<int>> cell_entities;
  /// cell -> local dof -> orientation sign (+1/-1).
  std::vector<std::vector<double>> cell_signs;

  int local_size() const { return cell_entities.empty() ? 0 : static_cast<int>(cell_entities[0].size()); }
};

/// Builds the dof map of `kind` on `mesh`. For the two omega spaces the mesh
/// must be the control submesh.
DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

/// Coefficient vector bound to a space (length = DofMap::n_free).
struct FeField {
  SpaceKind kind;
  std::vector<double> coeff;
};

/// Per-entity coefficients with zeros at constrained entities; the form in
/// which fields are evaluated cellwise.
std::vector<double> expand_to_entities(const DofMap& dofmap, const FeField& field);

/// Inverse of expand_to_entities (drops constrained entities).
FeField compress_from_entities(const DofMap& dofmap, const std::vector<double>& values);

/// Canonical edge-moment interpolation: dof = oriented line integral of the
/// tangential component along each free edge (4-point Gauss). Reproduces
/// fields of the form a + b x x exactly.
FeField interpolate_edge(const Mesh& mesh, const DofMap& dofmap,
                         const std::function<Vec3(const Vec3&)>& field);

/// Canonical face-flux interpolation: dof = oriented flux through each free
/// face (degree-4 triangle quadrature). Reproduces fields a + b x exactly.
FeField interpolate_face(const Mesh& mesh, const DofMap& dofmap,
                         const std::function<Vec3(const Vec3&)>& field);

/// P1 vertex interpolation.
FeField interpolate_nodal(const Mesh& mesh, const DofMap& dofmap,
                          const std::function<double(const Vec3&)>& field);

/// Restriction of an edge field on the parent mesh to the control submesh
/// (EdgeFree on the submesh). Constrained parent entities contribute zero.
FeField restrict_edge(const Submesh& sub, const DofMap& parent_map,
                      const DofMap& sub_map, const FeField& field);

/// Extension by zero of a submesh edge field into a parent-mesh edge space.
/// restrict(extend(f)) == f always; extend(restrict(g)) == g when g is
/// supported on the submesh edges.
FeField extend_edge_by_zero(const Submesh& sub, const DofMap& parent_map,
                            const DofMap& sub_map, const FeField& field);

/// Edge coefficients of the gradient of a nodal field: for edge (a,b) with
/// a < b the dof is p(b) - p(a). The result lives in the edge space whose
/// constraint pattern matches the nodal one.
FeField gradient_edge_coefficients(const Mesh& mesh, const DofMap& nodal_map,
                                   const DofMap& edge_map, const FeField& p);

}  // namespace ampere

#endif  // AMPERE_SPACES_HPP
