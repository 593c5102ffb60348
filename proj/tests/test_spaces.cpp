// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "ampere/assembly.hpp"
#include "ampere/model.hpp"
#include "ampere/solver.hpp"
#include "ampere/spaces.hpp"
#include "doctest.h"

using namespace ampere;

namespace {

Mesh benchmark_mesh(int n) {
  ProblemData data = benchmark_problem();
  return build_structured_cube(data.domain, n, data.control, data.mu);
}

// Oriented edge moment computed directly from the documented convention:
// line integral of the tangential component from the smaller to the larger
// global vertex index.
std::vector<double> manual_edge_dofs(const Mesh& mesh,
                                     const std::function<Vec3(const Vec3&)>& f) {
  const auto& rule = segment_rule_gauss4();
  std::vector<double> dofs(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    Vec3 a = mesh.vertices[mesh.edges[e][0]];
    Vec3 b = mesh.vertices[mesh.edges[e][1]];
    double moment = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Vec3 x = a + rule.points[q] * (b - a);
      moment += rule.weights[q] * f(x).dot(b - a);
    }
    dofs[e] = moment;
  }
  return dofs;
}

// Oriented face flux with the documented convention: normal right-handed
// around the ascending-sorted vertex triple (a,b,c), i.e. (b-a) x (c-a).
std::vector<double> manual_face_dofs(const Mesh& mesh,
                                     const std::function<Vec3(const Vec3&)>& f) {
  const auto& rule = triangle_rule_degree4();
  std::vector<double> dofs(mesh.n_faces());
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    Vec3 a = mesh.vertices[mesh.faces[fi][0]];
    Vec3 b = mesh.vertices[mesh.faces[fi][1]];
    Vec3 c = mesh.vertices[mesh.faces[fi][2]];
    Vec3 normal = 0.5 * (b - a).cross(c - a);  // area-weighted
    double flux = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& p = rule.points[q];
      Vec3 x = p[0] * a + p[1] * b + p[2] * c;
      flux += rule.weights[q] * f(x).dot(normal);
    }
    dofs[fi] = flux;
  }
  return dofs;
}

}  // namespace

TEST_CASE("dof counts separate constrained and free entities") {
  Mesh mesh = benchmark_mesh(6);
  DiscreteSpaces spaces = build_spaces(mesh);
  CHECK(spaces.edge.n_free == 1206);
  CHECK(spaces.edge.n_entities == 1854);
  CHECK(spaces.edge_free.n_free == 1854);
  CHECK(spaces.nodal.n_free == 125);
  CHECK(spaces.omega_nodal.n_free == 27);
  CHECK(spaces.omega_edge.n_free == spaces.sub.mesh.n_edges());

  int free_faces = 0;
  for (int f = 0; f < spaces.sub.mesh.n_faces(); ++f)
    if (!spaces.sub.mesh.face_on_boundary[f]) ++free_faces;
  CHECK(spaces.omega_face.n_free == free_faces);

  for (const DofMap* map : {&spaces.edge, &spaces.edge_free, &spaces.nodal}) {
    for (int d = 0; d < map->n_free; ++d)
      CHECK(map->entity_to_dof[map->dof_to_entity[d]] == d);
    for (const auto& signs : map->cell_signs)
      for (double s : signs) CHECK(s == 1.0);  // ascending-sorted edges
  }
  for (const auto& signs : spaces.omega_face.cell_signs)
    for (double s : signs) CHECK(std::abs(s) == 1.0);
}

TEST_CASE("edge interpolation reproduces a + b x x fields exactly") {
  Mesh mesh = benchmark_mesh(3);
  DofMap edge_free = build_dofmap(mesh, SpaceKind::EdgeFree);
  const Vec3 a(0.3, -0.2, 0.5), b(0.1, 0.7, -0.4);
  auto f = [&](const Vec3& x) { return Vec3(a + b.cross(x)); };

  FeField field = interpolate_edge(mesh, edge_free, f);
  std::vector<double> entity = expand_to_entities(edge_free, field);
  std::vector<double> manual = manual_edge_dofs(mesh, f);
  for (int e = 0; e < mesh.n_edges(); ++e)
    CHECK(std::abs(entity[e] - manual[e]) <= 1e-13);

  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double l0 = unif(gen), l1 = unif(gen) * (1 - l0);
    double l2 = unif(gen) * (1 - l0 - l1);
    std::array<double, 4> bary = {l0, l1, l2, 1 - l0 - l1 - l2};
    Vec3 x = mesh.point(c, bary);
    CHECK((eval_edge_field(mesh, c, bary, entity) - f(x)).norm() <= 1e-12);
    // curl(a + b x x) = 2b, reproduced exactly by the Whitney curls.
    CHECK((eval_edge_curl(mesh, c, entity) - 2 * b).norm() <= 1e-12);
  }
}

TEST_CASE("face interpolation reproduces a + b x fields exactly") {
  Mesh mesh = benchmark_mesh(3);
  Submesh sub = extract_control_submesh(mesh);
  DofMap face = build_dofmap(sub.mesh, SpaceKind::FaceZeroTraceOmega);
  const Vec3 a(0.4, -0.1, 0.25);
  const double beta = 0.37;
  auto f = [&](const Vec3& x) { return Vec3(a + beta * x); };

  // Entity dofs computed straight from the orientation convention; the
  // basis functions must reproduce the field from them on every cell.
  std::vector<double> entity = manual_face_dofs(sub.mesh, f);
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  for (int c = 0; c < sub.mesh.n_cells(); ++c) {
    double l0 = unif(gen), l1 = unif(gen) * (1 - l0);
    double l2 = unif(gen) * (1 - l0 - l1);
    std::array<double, 4> bary = {l0, l1, l2, 1 - l0 - l1 - l2};
    Vec3 x = sub.mesh.point(c, bary);
    CHECK((eval_rt_field(sub.mesh, face, c, bary, entity) - f(x)).norm() <=
          1e-12);
    CHECK(eval_rt_div(sub.mesh, face, c, entity) ==
          doctest::Approx(3 * beta).epsilon(1e-12));
  }

  // The canonical interpolation agrees with the manual dofs on free faces.
  FeField field = interpolate_face(sub.mesh, face, f);
  for (int d = 0; d < face.n_free; ++d)
    CHECK(std::abs(field.coeff[d] - entity[face.dof_to_entity[d]]) <= 1e-13);
}

TEST_CASE("expand and compress are inverse on the free part") {
  Mesh mesh = benchmark_mesh(3);
  DofMap edge = build_dofmap(mesh, SpaceKind::EdgeZeroTrace);
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  FeField f{SpaceKind::EdgeZeroTrace, std::vector<double>(edge.n_free)};
  for (double& c : f.coeff) c = unif(gen);
  std::vector<double> entity = expand_to_entities(edge, f);
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (edge.entity_to_dof[e] < 0) CHECK(entity[e] == 0.0);
  FeField back = compress_from_entities(edge, entity);
  for (int d = 0; d < edge.n_free; ++d) CHECK(back.coeff[d] == f.coeff[d]);
}

TEST_CASE("restriction and zero-extension between mesh and submesh") {
  Mesh mesh = benchmark_mesh(6);
  Submesh sub = extract_control_submesh(mesh);
  DofMap parent = build_dofmap(mesh, SpaceKind::EdgeZeroTrace);
  DofMap child = build_dofmap(sub.mesh, SpaceKind::EdgeFree);

  std::mt19937 gen(19);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  FeField g{SpaceKind::EdgeFree, std::vector<double>(child.n_free)};
  for (double& c : g.coeff) c = unif(gen);

  FeField r = restrict_edge(sub, parent, child, extend_edge_by_zero(sub, parent, child, g));
  for (int d = 0; d < child.n_free; ++d)
    CHECK(r.coeff[d] == doctest::Approx(g.coeff[d]).epsilon(1e-15));
}

TEST_CASE("discrete gradients are curl-free edge fields") {
  Mesh mesh = benchmark_mesh(3);
  DofMap nodal = build_dofmap(mesh, SpaceKind::NodalZeroTrace);
  DofMap edge = build_dofmap(mesh, SpaceKind::EdgeZeroTrace);

  std::mt19937 gen(23);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  FeField p{SpaceKind::NodalZeroTrace, std::vector<double>(nodal.n_free)};
  for (double& c : p.coeff) c = unif(gen);

  FeField g = gradient_edge_coefficients(mesh, nodal, edge, p);
  std::vector<double> g_entity = expand_to_entities(edge, g);
  std::vector<double> p_entity = expand_to_entities(nodal, p);

  // Edge dofs are endpoint differences of the potential.
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (edge.entity_to_dof[e] >= 0)
      CHECK(g_entity[e] == doctest::Approx(p_entity[mesh.edges[e][1]] -
                                           p_entity[mesh.edges[e][0]])
                               .epsilon(1e-14));

  const std::array<double, 4> bary = {0.31, 0.17, 0.29, 0.23};
  double max_curl = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    max_curl = std::max(max_curl, eval_edge_curl(mesh, c, g_entity).norm());
    Vec3 gh = eval_edge_field(mesh, c, bary, g_entity);
    Vec3 gp = eval_nodal_gradient(mesh, c, p_entity);
    CHECK((gh - gp).norm() <= 1e-12);
  }
  CHECK(max_curl <= 1e-12);
}
