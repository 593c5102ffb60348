// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/spaces.hpp"

#include <stdexcept>

#include "ampere/quadrature.hpp"

namespace ampere {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::EdgeZeroTrace: return "EdgeZeroTrace";
    case SpaceKind::EdgeFree: return "EdgeFree";
    case SpaceKind::NodalZeroTrace: return "NodalZeroTrace";
    case SpaceKind::NodalOmega: return "NodalOmega";
    case SpaceKind::FaceZeroTraceOmega: return "FaceZeroTraceOmega";
  }
  return "?";
}

EntityKind entity_kind(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::EdgeZeroTrace:
    case SpaceKind::EdgeFree: return EntityKind::Edge;
    case SpaceKind::NodalZeroTrace:
    case SpaceKind::NodalOmega: return EntityKind::Vertex;
    case SpaceKind::FaceZeroTraceOmega: return EntityKind::Face;
  }
  return EntityKind::Vertex;
}

namespace {

/// Sign of the global face normal (right-handed around the sorted triple)
/// against the outward direction of cell c at local face k.
double face_sign(const Mesh& mesh, int c, int k) {
  const auto& vv = mesh.sorted_cells[c];
  const Vec3& a = mesh.vertices[vv[kLocalFaces[k][0]]];
  const Vec3& b = mesh.vertices[vv[kLocalFaces[k][1]]];
  const Vec3& d = mesh.vertices[vv[kLocalFaces[k][2]]];
  const Vec3& opp = mesh.vertices[vv[k]];  // local face k is opposite vertex k
  const Vec3 n = (b - a).cross(d - a);
  const Vec3 centroid = (a + b + d) / 3.0;
  return n.dot(centroid - opp) > 0.0 ? 1.0 : -1.0;
}

}  // namespace

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind) {
  DofMap map;
  map.kind = kind;
  const EntityKind ent = entity_kind(kind);

  std::vector<std::uint8_t> constrained;
  switch (kind) {
    case SpaceKind::EdgeZeroTrace:
      constrained.assign(mesh.edge_on_boundary.begin(), mesh.edge_on_boundary.end());
      break;
    case SpaceKind::EdgeFree:
      constrained.assign(mesh.n_edges(), 0);
      break;
    case SpaceKind::NodalZeroTrace:
      constrained.assign(mesh.vertex_on_boundary.begin(), mesh.vertex_on_boundary.end());
      break;
    case SpaceKind::NodalOmega:
      constrained.assign(mesh.n_vertices(), 0);
      break;
    case SpaceKind::FaceZeroTraceOmega:
      constrained.assign(mesh.face_on_boundary.begin(), mesh.face_on_boundary.end());
      break;
  }

  map.n_entities = static_cast<int>(constrained.size());
  map.entity_to_dof.assign(map.n_entities, -1);
  for (int e = 0; e < map.n_entities; ++e) {
    if (!constrained[e]) {
      map.entity_to_dof[e] = map.n_free++;
      map.dof_to_entity.push_back(e);
    }
  }

  const int nc = mesh.n_cells();
  map.cell_entities.resize(nc);
  map.cell_signs.resize(nc);
  for (int c = 0; c < nc; ++c) {
    switch (ent) {
      case EntityKind::Vertex: {
        map.cell_entities[c].assign(mesh.sorted_cells[c].begin(),
                                    mesh.sorted_cells[c].end());
        map.cell_signs[c].assign(4, 1.0);
        break;
      }
      case EntityKind::Edge: {
        map.cell_entities[c].assign(mesh.cell_edges[c].begin(),
                                    mesh.cell_edges[c].end());
        map.cell_signs[c].assign(6, 1.0);
        break;
      }
      case EntityKind::Face: {
        map.cell_entities[c].assign(mesh.cell_faces[c].begin(),
                                    mesh.cell_faces[c].end());
        map.cell_signs[c].resize(4);
        for (int k = 0; k < 4; ++k) map.cell_signs[c][k] = face_sign(mesh, c, k);
        break;
      }
    }
  }
  return map;
}

std::vector<double> expand_to_entities(const DofMap& dofmap, const FeField& field) {
  if (field.kind != dofmap.kind) throw std::invalid_argument("space mismatch");
  if (static_cast<int>(field.coeff.size()) != dofmap.n_free)
    throw std::invalid_argument("coefficient count mismatch");
  std::vector<double> values(dofmap.n_entities, 0.0);
  for (int d = 0; d < dofmap.n_free; ++d)
    values[dofmap.dof_to_entity[d]] = field.coeff[d];
  return values;
}

FeField compress_from_entities(const DofMap& dofmap, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != dofmap.n_entities)
    throw std::invalid_argument("entity count mismatch");
  FeField f;
  f.kind = dofmap.kind;
  f.coeff.resize(dofmap.n_free);
  for (int d = 0; d < dofmap.n_free; ++d)
    f.coeff[d] = values[dofmap.dof_to_entity[d]];
  return f;
}

FeField interpolate_edge(const Mesh& mesh, const DofMap& dofmap,
                         const std::function<Vec3(const Vec3&)>& field) {
  if (entity_kind(dofmap.kind) != EntityKind::Edge)
    throw std::invalid_argument("edge space required");
  const SegmentRule& rule = segment_rule_gauss4();
  FeField f;
  f.kind = dofmap.kind;
  f.coeff.resize(dofmap.n_free);
  for (int d = 0; d < dofmap.n_free; ++d) {
    const auto& e = mesh.edges[dofmap.dof_to_entity[d]];
    const Vec3& a = mesh.vertices[e[0]];
    const Vec3& b = mesh.vertices[e[1]];
    const Vec3 t = b - a;
    double dof = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      dof += rule.weights[q] * field(a + rule.points[q] * t).dot(t);
    f.coeff[d] = dof;
  }
  return f;
}

FeField interpolate_face(const Mesh& mesh, const DofMap& dofmap,
                         const std::function<Vec3(const Vec3&)>& field) {
  if (entity_kind(dofmap.kind) != EntityKind::Face)
    throw std::invalid_argument("face space required");
  const TriangleRule& rule = triangle_rule_degree4();
  FeField f;
  f.kind = dofmap.kind;
  f.coeff.resize(dofmap.n_free);
  for (int d = 0; d < dofmap.n_free; ++d) {
    const auto& t = mesh.faces[dofmap.dof_to_entity[d]];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    // Unnormalized global normal scaled by twice the face area: flux of u
    // equals sum_q w_q u(x_q) . n / 2 with n = (b-a) x (c-a).
    const Vec3 n = (b - a).cross(c - a);
    double dof = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& p = rule.points[q];
      const Vec3 x = p[0] * a + p[1] * b + p[2] * c;
      dof += rule.weights[q] * field(x).dot(n);
    }
    f.coeff[d] = 0.5 * dof;
  }
  return f;
}

FeField interpolate_nodal(const Mesh& mesh, const DofMap& dofmap,
                          const std::function<double(const Vec3&)>& field) {
  if (entity_kind(dofmap.kind) != EntityKind::Vertex)
    throw std::invalid_argument("nodal space required");
  FeField f;
  f.kind = dofmap.kind;
  f.coeff.resize(dofmap.n_free);
  for (int d = 0; d < dofmap.n_free; ++d)
    f.coeff[d] = field(mesh.vertices[dofmap.dof_to_entity[d]]);
  return f;
}

FeField restrict_edge(const Submesh& sub, const DofMap& parent_map,
                      const DofMap& sub_map, const FeField& field) {
  if (entity_kind(parent_map.kind) != EntityKind::Edge ||
      entity_kind(sub_map.kind) != EntityKind::Edge)
    throw std::invalid_argument("edge spaces required");
  const std::vector<double> parent_values = expand_to_entities(parent_map, field);
  std::vector<double> values(sub_map.n_entities, 0.0);
  for (int e = 0; e < sub_map.n_entities; ++e)
    values[e] = parent_values[sub.edge_parent[e]];
  return compress_from_entities(sub_map, values);
}

FeField extend_edge_by_zero(const Submesh& sub, const DofMap& parent_map,
                            const DofMap& sub_map, const FeField& field) {
  if (entity_kind(parent_map.kind) != EntityKind::Edge ||
      entity_kind(sub_map.kind) != EntityKind::Edge)
    throw std::invalid_argument("edge spaces required");
  const std::vector<double> sub_values = expand_to_entities(sub_map, field);
  std::vector<double> values(parent_map.n_entities, 0.0);
  for (int e = 0; e < sub_map.n_entities; ++e)
    values[sub.edge_parent[e]] = sub_values[e];
  return compress_from_entities(parent_map, values);
}

FeField gradient_edge_coefficients(const Mesh& mesh, const DofMap& nodal_map,
                                   const DofMap& edge_map, const FeField& p) {
  const std::vector<double> v = expand_to_entities(nodal_map, p);
  std::vector<double> g(edge_map.n_entities, 0.0);
  for (int e = 0; e < edge_map.n_entities; ++e)
    g[e] = v[mesh.edges[e][1]] - v[mesh.edges[e][0]];
  return compress_from_entities(edge_map, g);
}

}  // namespace ampere
