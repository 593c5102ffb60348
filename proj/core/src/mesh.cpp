// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ampere {

namespace {

inline std::int64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

std::array<int, 2> Mesh::refinement_edge(int c) const {
  const Cell& cell = cells[c];
  int a = cell.v[0];
  int b = cell.v[cell.tag];
  if (a > b) std::swap(a, b);
  return {a, b};
}

Vec3 Mesh::point(int c, const std::array<double, 4>& bary) const {
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < 4; ++i) x += bary[i] * vertices[sorted_cells[c][i]];
  return x;
}

std::array<double, 4> Mesh::barycentric(int c, const Vec3& x) const {
  std::array<double, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = lambda0[c][i] + grad_lambda[c][i].dot(x);
  return b;
}

double Mesh::total_volume() const {
  return std::accumulate(volume.begin(), volume.end(), 0.0);
}

void Mesh::finalize() {
  const int nc = n_cells();
  sorted_cells.resize(nc);
  for (int c = 0; c < nc; ++c) {
    sorted_cells[c] = cells[c].v;
    std::sort(sorted_cells[c].begin(), sorted_cells[c].end());
  }

  // Edge and face tables in first-encounter order.
  edges.clear();
  faces.clear();
  cell_edges.resize(nc);
  cell_faces.resize(nc);
  std::unordered_map<std::int64_t, int> edge_id;
  edge_id.reserve(static_cast<std::size_t>(nc) * 3);
  std::map<std::array<int, 3>, int> face_id;
  for (int c = 0; c < nc; ++c) {
    const auto& vv = sorted_cells[c];
    for (int k = 0; k < 6; ++k) {
      const int a = vv[kLocalEdges[k][0]];
      const int b = vv[kLocalEdges[k][1]];
      auto [it, inserted] = edge_id.try_emplace(edge_key(a, b), n_edges());
      if (inserted) edges.push_back({a, b});
      cell_edges[c][k] = it->second;
    }
    for (int k = 0; k < 4; ++k) {
      const std::array<int, 3> f = {vv[kLocalFaces[k][0]], vv[kLocalFaces[k][1]],
                                    vv[kLocalFaces[k][2]]};
      auto [it, inserted] = face_id.try_emplace(f, n_faces());
      if (inserted) faces.push_back(f);
      cell_faces[c][k] = it->second;
    }
  }

  // Boundary flags from face incidence counts.
  std::vector<int> face_count(n_faces(), 0);
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < 4; ++k) ++face_count[cell_faces[c][k]];
  face_on_boundary.assign(n_faces(), 0);
  vertex_on_boundary.assign(n_vertices(), 0);
  edge_on_boundary.assign(n_edges(), 0);
  std::set<std::int64_t> boundary_edges;
  for (int f = 0; f < n_faces(); ++f) {
    if (face_count[f] != 1) continue;
    face_on_boundary[f] = 1;
    const auto& t = faces[f];
    for (int i = 0; i < 3; ++i) vertex_on_boundary[t[i]] = 1;
    boundary_edges.insert(edge_key(t[0], t[1]));
    boundary_edges.insert(edge_key(t[0], t[2]));
    boundary_edges.insert(edge_key(t[1], t[2]));
  }
  for (int e = 0; e < n_edges(); ++e)
    if (boundary_edges.count(edge_key(edges[e][0], edges[e][1])))
      edge_on_boundary[e] = 1;

  // Geometry caches from the sorted vertex order.
  grad_lambda.resize(nc);
  lambda0.resize(nc);
  volume.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& vv = sorted_cells[c];
    Eigen::Matrix4d B;
    for (int i = 0; i < 4; ++i) {
      B(i, 0) = 1.0;
      B.block<1, 3>(i, 1) = vertices[vv[i]].transpose();
    }
    const double det = B.determinant();
    volume[c] = std::abs(det) / 6.0;
    if (!(volume[c] > 0.0)) throw std::runtime_error("degenerate cell");
    const Eigen::Matrix4d C = B.inverse();
    for (int i = 0; i < 4; ++i) {
      lambda0[c][i] = C(0, i);
      grad_lambda[c][i] = C.block<3, 1>(1, i);
    }
  }
}

Mesh build_structured_cube(const Box& domain, int n, const Box& control,
                           const std::function<double(const Vec3&)>& mu) {
  if (n <= 0) throw std::invalid_argument("subdivision count must be positive");
  if (!domain.valid() || !control.valid())
    throw std::invalid_argument("invalid box");
  const Vec3 h = (domain.hi - domain.lo) / n;
  for (int d = 0; d < 3; ++d) {
    for (double plane : {control.lo[d], control.hi[d]}) {
      const double r = (plane - domain.lo[d]) / h[d];
      if (std::abs(r - std::round(r)) > 1e-9)
        throw std::invalid_argument(
            "control box face does not lie on the structured grid");
    }
  }

  Mesh mesh;
  const int m = n + 1;
  auto vid = [m](int i, int j, int k) { return i + m * (j + m * k); };
  mesh.vertices.resize(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        mesh.vertices[vid(i, j, k)] =
            domain.lo + Vec3(i * h[0], j * h[1], k * h[2]);

  // The 6 permutations of (0,1,2) in lexicographic order; each gives one
  // Kuhn tetrahedron walking from a cube corner to the opposite corner.
  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  mesh.cells.reserve(static_cast<std::size_t>(n) * n * n * 6);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& p : perms) {
          std::array<int, 3> a = {i, j, k};
          Cell cell;
          cell.v[0] = vid(a[0], a[1], a[2]);
          a[p[2]] += 1;
          cell.v[1] = vid(a[0], a[1], a[2]);
          a[p[1]] += 1;
          cell.v[2] = vid(a[0], a[1], a[2]);
          a[p[0]] += 1;
          cell.v[3] = vid(a[0], a[1], a[2]);
          cell.tag = 3;  // refinement edge = cube diagonal (v[0], v[3])
          cell.parent = static_cast<int>(mesh.cells.size());
          mesh.cells.push_back(cell);
        }
      }
    }
  }

  mesh.finalize();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec3 centroid = Vec3::Zero();
    for (int i = 0; i < 4; ++i)
      centroid += 0.25 * mesh.vertices[mesh.cells[c].v[i]];
    mesh.cells[c].subdomain = control.contains(centroid) ? 1 : 0;
    mesh.cells[c].mu = mu(centroid);
  }
  return mesh;
}

namespace {

/// Working state of one bisection call. Cells are appended as they are
/// created; `alive` marks leaves of the in-progress forest.
struct BisectState {
  std::vector<Vec3> vertices;
  std::vector<Cell> cells;   // Cell::parent = index into the input mesh
  std::vector<char> alive;
  std::unordered_map<std::int64_t, std::vector<int>> edge_cells;
  std::unordered_map<std::int64_t, int> midpoint;

  void register_cell(int c) {
    const auto& v = cells[c].v;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        edge_cells[edge_key(v[i], v[j])].push_back(c);
  }

  std::int64_t refinement_edge(int c) const {
    return edge_key(cells[c].v[0], cells[c].v[cells[c].tag]);
  }

  /// Maubach bisection of cell c at the midpoint vertex mid.
  void split(int c, int mid) {
    const Cell& cell = cells[c];
    const int d = cell.tag;
    Cell c1 = cell;  // replace v[d] by the midpoint
    c1.v[d] = mid;
    Cell c2 = cell;  // drop v[0], shift v[1..d] down, midpoint at slot d
    for (int i = 0; i + 1 <= d; ++i) c2.v[i] = cell.v[i + 1];
    c2.v[d] = mid;
    const int nd = (d == 1) ? 3 : d - 1;
    c1.tag = nd;
    c2.tag = nd;
    alive[c] = 0;
    const int i1 = static_cast<int>(cells.size());
    cells.push_back(c1);
    alive.push_back(1);
    register_cell(i1);
    const int i2 = static_cast<int>(cells.size());
    cells.push_back(c2);
    alive.push_back(1);
    register_cell(i2);
  }

  /// Bisects cell c, recursively refining the patch of its refinement edge
  /// first so that all sharers split at the common midpoint (conforming
  /// closure). Terminates because tags are compatible on the initial mesh.
  void bisect_cell(int c, int depth) {
    if (depth > 1000) throw std::runtime_error("bisection closure runaway");
    if (!alive[c]) return;
    const std::int64_t e = refinement_edge(c);
    std::vector<int> patch;
    for (;;) {
      patch.clear();
      for (int x : edge_cells[e])
        if (alive[x]) patch.push_back(x);
      std::sort(patch.begin(), patch.end());
      patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
      bool all_match = true;
      for (int x : patch) {
        if (refinement_edge(x) != e) {
          all_match = false;
          bisect_cell(x, depth + 1);
        }
      }
      if (all_match) break;
    }
    auto [it, inserted] = midpoint.try_emplace(e, static_cast<int>(vertices.size()));
    if (inserted) {
      const int a = static_cast<int>(static_cast<std::uint64_t>(e) >> 32);
      const int b = static_cast<int>(e & 0xffffffff);
      vertices.push_back(0.5 * (vertices[a] + vertices[b]));
    }
    for (int x : patch)
      if (alive[x]) split(x, it->second);
  }
};

}  // namespace

Mesh bisect(const Mesh& mesh, const MarkedSet& marked) {
  for (int c : marked)
    if (c < 0 || c >= mesh.n_cells())
      throw std::invalid_argument("marked cell index out of range");

  BisectState st;
  st.vertices = mesh.vertices;
  st.cells.reserve(mesh.cells.size() * 2);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Cell cell = mesh.cells[c];
    cell.parent = c;
    st.cells.push_back(cell);
    st.alive.push_back(1);
    st.register_cell(c);
  }

  MarkedSet order = marked;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (int c : order) st.bisect_cell(c, 0);

  Mesh out;
  out.vertices = std::move(st.vertices);
  for (std::size_t c = 0; c < st.cells.size(); ++c)
    if (st.alive[c]) out.cells.push_back(st.cells[c]);
  out.finalize();
  return out;
}

Mesh uniform_refine(const Mesh& mesh) {
  Mesh current = mesh;
  // Keep genealogy rooted at `mesh` across the three sweeps.
  for (int sweep = 0; sweep < 3; ++sweep) {
    MarkedSet all(current.n_cells());
    std::iota(all.begin(), all.end(), 0);
    Mesh next = bisect(current, all);
    if (sweep > 0)
      for (Cell& cell : next.cells) cell.parent = current.cells[cell.parent].parent;
    current = std::move(next);
  }
  return current;
}

bool check_conforming(const Mesh& mesh) {
  std::map<std::array<int, 3>, int> count;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& vv = mesh.sorted_cells[c];
    for (const auto& lf : kLocalFaces) {
      std::array<int, 3> f = {vv[lf[0]], vv[lf[1]], vv[lf[2]]};
      ++count[f];
    }
  }
  for (const auto& [face, n] : count)
    if (n > 2) return false;
  return true;
}

Submesh extract_control_submesh(const Mesh& mesh) {
  Submesh sub;
  std::vector<int> vmap(mesh.n_vertices(), -1);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].subdomain == 1) sub.cell_parent.push_back(c);

  // Order-preserving vertex renumbering keeps sorted-vertex orientation
  // conventions identical on both meshes.
  for (int c : sub.cell_parent)
    for (int i = 0; i < 4; ++i) vmap[mesh.cells[c].v[i]] = 1;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (vmap[v] == 1) {
      vmap[v] = static_cast<int>(sub.vertex_parent.size());
      sub.vertex_parent.push_back(v);
    } else {
      vmap[v] = -1;
    }
  }

  sub.mesh.vertices.reserve(sub.vertex_parent.size());
  for (int v : sub.vertex_parent) sub.mesh.vertices.push_back(mesh.vertices[v]);
  for (int c : sub.cell_parent) {
    Cell cell = mesh.cells[c];
    for (int i = 0; i < 4; ++i) cell.v[i] = vmap[cell.v[i]];
    cell.parent = c;
    sub.mesh.cells.push_back(cell);
  }
  sub.mesh.finalize();

  std::unordered_map<std::int64_t, int> parent_edge;
  parent_edge.reserve(mesh.edges.size());
  for (int e = 0; e < mesh.n_edges(); ++e)
    parent_edge[edge_key(mesh.edges[e][0], mesh.edges[e][1])] = e;
  sub.edge_parent.resize(sub.mesh.n_edges());
  for (int e = 0; e < sub.mesh.n_edges(); ++e) {
    const int a = sub.vertex_parent[sub.mesh.edges[e][0]];
    const int b = sub.vertex_parent[sub.mesh.edges[e][1]];
    sub.edge_parent[e] = parent_edge.at(edge_key(a, b));
  }

  std::map<std::array<int, 3>, int> parent_face;
  for (int f = 0; f < mesh.n_faces(); ++f) parent_face[mesh.faces[f]] = f;
  sub.face_parent.resize(sub.mesh.n_faces());
  for (int f = 0; f < sub.mesh.n_faces(); ++f) {
    std::array<int, 3> t = sub.mesh.faces[f];
    for (int i = 0; i < 3; ++i) t[i] = sub.vertex_parent[t[i]];
    sub.face_parent[f] = parent_face.at(t);
  }
  return sub;
}

}  // namespace ampere
