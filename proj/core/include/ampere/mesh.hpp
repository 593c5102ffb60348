// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_MESH_HPP
#define AMPERE_MESH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ampere/geometry.hpp"

namespace ampere {

/// Local edges of a tetrahedron in sorted-vertex numbering. With cell
/// vertices sorted ascending by global index, every local edge (i,j) has
/// i < j globally, so all edge orientation signs are +1.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local faces; face k is opposite local vertex k.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// One tetrahedron. `v` keeps the newest-vertex-bisection ordering
/// (refinement edge = (v[0], v[tag])); all degree-of-freedom and orientation
/// logic uses the sorted copy stored in Mesh::sorted_cells.
struct Cell {
  std::array<int, 4> v;
  int tag = 3;         ///< bisection tag in {1,2,3}
  int subdomain = 0;   ///< 1 if the cell lies inside the control region
  double mu = 1.0;     ///< cellwise-constant permeability
  double eps = 1.0;    ///< cellwise-constant permittivity
  int parent = -1;     ///< index of the containing cell in the input mesh of
                       ///< the refinement call that created this cell
};

/// Conforming tetrahedral mesh with deduplicated edge/face tables,
/// boundary flags, and cached cellwise geometry (barycentric gradients,
/// volumes). Immutable after construction; refinement returns a new mesh.
class Mesh {
 public:
  std::vector<Vec3> vertices;
  std::vector<Cell> cells;

  /// Ascending-sorted global vertex indices per cell; basis for all
  /// orientation conventions.
  std::vector<std::array<int, 4>> sorted_cells;

  /// Global edge table: vertex pairs (a,b) with a < b, deduplicated,
  /// numbered in first-encounter order over cells.
  std::vector<std::array<int, 2>> edges;
  /// Global face table: sorted vertex triples, first-encounter order.
  std::vector<std::array<int, 3>> faces;

  std::vector<std::array<int, 6>> cell_edges;
  std::vector<std::array<int, 4>> cell_faces;

  std::vector<std::uint8_t> vertex_on_boundary;
  std::vector<std::uint8_t> edge_on_boundary;
  std::vector<std::uint8_t> face_on_boundary;

  /// Gradient of barycentric coordinate i on cell c (constant per cell).
  std::vector<std::array<Vec3, 4>> grad_lambda;
  /// Affine offsets: lambda_i(x) = lambda0[c][i] + grad_lambda[c][i] . x.
  std::vector<std::array<double, 4>> lambda0;
  std::vector<double> volume;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  /// Refinement edge of cell c as a sorted global vertex pair.
  std::array<int, 2> refinement_edge(int c) const;

  /// Physical coordinates of a barycentric point of cell c.
  Vec3 point(int c, const std::array<double, 4>& bary) const;

  /// Barycentric coordinates of x with respect to cell c.
  std::array<double, 4> barycentric(int c, const Vec3& x) const;

  double total_volume() const;

  /// Builds entity tables, boundary flags, and geometry caches from
  /// `vertices` and `cells`. Called by the factory functions.
  void finalize();
};

/// Set of cell indices selected for refinement (valid, duplicate-free).
using MarkedSet = std::vector<int>;

/// Builds the structured mesh of an axis-aligned box: n^3 grid cells, each
/// split into 6 Kuhn tetrahedra sharing the cube diagonal, which is the
/// longest edge of every cell on a cubic grid and becomes the initial
/// refinement edge (compatible tagging, so conforming closure terminates).
///
/// `control` must be resolved by the grid: each of its faces has to lie on a
/// grid plane (throws std::invalid_argument otherwise, as for n == 0).
/// Cells are tagged inside/outside `control`, and `mu` is sampled at cell
/// centroids.
Mesh build_structured_cube(const Box& domain, int n, const Box& control,
                           const std::function<double(const Vec3&)>& mu);

/// Bisects every marked cell at its refinement edge and restores conformity
/// by recursive closure. Subdomain tags and material values are inherited;
/// Cell::parent of each result cell points into `mesh.cells`.
Mesh bisect(const Mesh& mesh, const MarkedSet& marked);

/// Three all-cell bisection sweeps: halves every original cell's diameter
/// and multiplies the cell count by 8. Cell::parent refers to `mesh`.
Mesh uniform_refine(const Mesh& mesh);

/// Face-incidence conformity audit: every face belongs to exactly two cells
/// or is a boundary face. Returns true when conforming.
bool check_conforming(const Mesh& mesh);

/// Extracted submesh of the cells tagged inside the control region, sharing
/// parent vertex coordinates. The parent maps are strictly increasing, so
/// sorted-vertex orientation conventions agree between the two meshes.
struct Submesh {
  Mesh mesh;
  std::vector<int> vertex_parent;  ///< submesh vertex -> parent vertex
  std::vector<int> cell_parent;    ///< submesh cell -> parent cell
  std::vector<int> edge_parent;    ///< submesh edge -> parent edge
  std::vector<int> face_parent;    ///< submesh face -> parent face
};

Submesh extract_control_submesh(const Mesh& mesh);

}  // namespace ampere

#endif  // AMPERE_MESH_HPP
