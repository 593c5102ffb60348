// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace ampere {
namespace {

// Adds M (optionally transposed) into the builder at a block offset.
void add_block(TripletBuilder& builder, const SparseMatrix& m, int row_offset,
               int col_offset, bool transpose = false) {
  for (int r = 0; r < m.rows; ++r) {
    for (int p = m.rowptr[r]; p < m.rowptr[r + 1]; ++p) {
      const int c = m.colind[p];
      if (transpose) {
        builder.add(col_offset + c, row_offset + r, m.val[p]);
      } else {
        builder.add(row_offset + r, col_offset + c, m.val[p]);
      }
    }
  }
}

}  // namespace

DiscreteSpaces build_spaces(const Mesh& mesh) {
  DiscreteSpaces spaces;
  spaces.sub = extract_control_submesh(mesh);
  spaces.edge = build_dofmap(mesh, SpaceKind::EdgeZeroTrace);
  spaces.edge_free = build_dofmap(mesh, SpaceKind::EdgeFree);
  spaces.nodal = build_dofmap(mesh, SpaceKind::NodalZeroTrace);
  spaces.omega_nodal = build_dofmap(spaces.sub.mesh, SpaceKind::NodalOmega);
  spaces.omega_edge = build_dofmap(spaces.sub.mesh, SpaceKind::EdgeFree);
  spaces.omega_face =
      build_dofmap(spaces.sub.mesh, SpaceKind::FaceZeroTraceOmega);
  return spaces;
}

KktSystem assemble_kkt(const Mesh& mesh, const DiscreteSpaces& spaces,
                       const ProblemData& data) {
  if (data.kappa <= 0.0) {
    throw std::invalid_argument("kappa must be positive");
  }
  KktSystem sys;
  sys.n_E = spaces.edge.n_free;
  sys.n_u = spaces.nodal.n_free;
  sys.n_v = spaces.omega_nodal.n_free;
  const int n = sys.size();
  const double inv_kappa = 1.0 / data.kappa;

  const SparseMatrix curl_curl = assemble_curl_curl(
      mesh, spaces.edge, [&mesh](int c) { return 1.0 / mesh.cells[c].mu; });
  const SparseMatrix control_mass = assemble_vector_mass(
      mesh, spaces.edge, [inv_kappa](int) { return inv_kappa; },
      /*restrict_to_subdomain=*/true);
  const SparseMatrix b = assemble_mixed_b(mesh, spaces.edge, spaces.nodal);
  const SparseMatrix c =
      assemble_mixed_c(spaces.sub, spaces.edge, spaces.omega_nodal, inv_kappa);
  const SparseMatrix d =
      assemble_nodal_stiffness(spaces.sub.mesh, spaces.omega_nodal, inv_kappa);

  TripletBuilder builder(n, n);
  add_block(builder, curl_curl, 0, 0);
  add_block(builder, control_mass, 0, 0);
  add_block(builder, b, sys.n_E, 0);
  add_block(builder, b, sys.n_E, 0, /*transpose=*/true);
  add_block(builder, c, sys.n_E + sys.n_u, 0);
  add_block(builder, c, sys.n_E + sys.n_u, 0, /*transpose=*/true);
  add_block(builder, d, sys.n_E + sys.n_u, sys.n_E + sys.n_u);
  sys.matrix = builder.compress();

  sys.rhs.assign(n, 0.0);
  const std::vector<double> f =
      assemble_load(mesh, spaces.edge, data.j_d, data.J, data.H_d);
  std::copy(f.begin(), f.end(), sys.rhs.begin());

  // Composite positive diagonal: the u block has no stored diagonal, so the
  // unit-weight nodal stiffness stands in for it.
  const std::vector<double> diag = sys.matrix.diagonal();
  const std::vector<double> u_diag =
      assemble_nodal_stiffness(mesh, spaces.nodal, 1.0).diagonal();
  sys.precond.assign(n, 1.0);
  for (int i = 0; i < sys.n_E; ++i) sys.precond[i] = std::abs(diag[i]);
  for (int i = 0; i < sys.n_u; ++i) sys.precond[sys.n_E + i] = u_diag[i];
  for (int i = 0; i < sys.n_v; ++i) {
    sys.precond[sys.n_E + sys.n_u + i] =
        std::abs(diag[sys.n_E + sys.n_u + i]);
  }
  return sys;
}

void gauge_fix_v(KktSystem& system, int local_v_dof) {
  if (local_v_dof < 0 || local_v_dof >= system.n_v) {
    throw std::invalid_argument("pinned v dof out of range");
  }
  const int pin = system.n_E + system.n_u + local_v_dof;
  const SparseMatrix& m = system.matrix;
  TripletBuilder builder(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    if (r == pin) continue;
    for (int p = m.rowptr[r]; p < m.rowptr[r + 1]; ++p) {
      if (m.colind[p] == pin) continue;
      builder.add(r, m.colind[p], m.val[p]);
    }
  }
  builder.add(pin, pin, 1.0);
  system.matrix = builder.compress();
  system.rhs[pin] = 0.0;
  system.precond[pin] = 1.0;
  system.pinned = pin;
}

Vec3 eval_magnetic(const Mesh& mesh, const MagneticField& field, int cell,
                   const std::array<double, 4>& bary) {
  return field.curl_part[cell] +
         eval_edge_field(mesh, cell, bary, field.hd_entity);
}

OptimalitySolution solve_optimality(const Mesh& mesh,
                                    const DiscreteSpaces& spaces,
                                    const ProblemData& data,
                                    const KktSystem& system, double tol,
                                    int max_iterations) {
  if (system.pinned < 0) {
    throw std::invalid_argument("system must be gauge-fixed before solving");
  }
  std::vector<double> x(system.size(), 0.0);
  OptimalitySolution sol;
  sol.report =
      minres(system.matrix, system.rhs, x, tol, max_iterations, system.precond);

  FeField e_field{SpaceKind::EdgeZeroTrace,
                  std::vector<double>(x.begin(), x.begin() + system.n_E)};
  FeField u_field{SpaceKind::NodalZeroTrace,
                  std::vector<double>(x.begin() + system.n_E,
                                      x.begin() + system.n_E + system.n_u)};
  FeField v_field{SpaceKind::NodalOmega,
                  std::vector<double>(x.begin() + system.n_E + system.n_u,
                                      x.end())};
  sol.E = expand_to_entities(spaces.edge, e_field);
  sol.u = expand_to_entities(spaces.nodal, u_field);
  sol.v = expand_to_entities(spaces.omega_nodal, v_field);

  const FeField jd_field =
      interpolate_edge(spaces.sub.mesh, spaces.omega_edge, data.j_d);
  sol.j_d = expand_to_entities(spaces.omega_edge, jd_field);

  const FeField e_restricted =
      restrict_edge(spaces.sub, spaces.edge, spaces.omega_edge, e_field);
  const FeField grad_v = gradient_edge_coefficients(
      spaces.sub.mesh, spaces.omega_nodal, spaces.omega_edge, v_field);
  sol.j.resize(sol.j_d.size());
  for (std::size_t e = 0; e < sol.j.size(); ++e) {
    sol.j[e] =
        sol.j_d[e] - (e_restricted.coeff[e] + grad_v.coeff[e]) / data.kappa;
  }

  const FeField hd_field =
      interpolate_edge(mesh, spaces.edge_free, data.H_d);
  sol.H.hd_entity = expand_to_entities(spaces.edge_free, hd_field);
  sol.H.curl_part.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    sol.H.curl_part[c] = eval_edge_curl(mesh, c, sol.E) / mesh.cells[c].mu;
  }
  return sol;
}

std::vector<double> remove_gradient_component(const Mesh& mesh,
                                              const DiscreteSpaces& spaces,
                                              const std::vector<double>& load,
                                              double tol) {
  // q solves (grad q, grad p) = f(grad p); then f - M (grad q) annihilates
  // every discrete gradient because (grad q, grad p)_M equals the nodal
  // stiffness exactly for edge fields of gradient form.
  const SparseMatrix stiffness =
      assemble_nodal_stiffness(mesh, spaces.nodal, 1.0);
  // G^T f: for nodal dof p, sum over edges (a,b) of coeff (+/- f_edge).
  std::vector<double> gt_f(spaces.nodal.n_free, 0.0);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const int row = spaces.edge.entity_to_dof[e];
    if (row < 0) continue;
    const auto [a, b] = mesh.edges[e];
    const int pa = spaces.nodal.entity_to_dof[a];
    const int pb = spaces.nodal.entity_to_dof[b];
    if (pb >= 0) gt_f[pb] += load[row];
    if (pa >= 0) gt_f[pa] -= load[row];
  }
  std::vector<double> q(spaces.nodal.n_free, 0.0);
  const SolveReport report =
      cg(stiffness, gt_f, q, tol, 20 * spaces.nodal.n_free,
         stiffness.diagonal());
  if (!report.converged) {
    throw std::runtime_error("gradient projection solve did not converge");
  }
  const FeField grad_q = gradient_edge_coefficients(
      mesh, spaces.nodal, spaces.edge, FeField{SpaceKind::NodalZeroTrace, q});
  const SparseMatrix mass = assemble_vector_mass(
      mesh, spaces.edge, [](int) { return 1.0; });
  const std::vector<double> correction = mass.multiply(grad_q.coeff);
  std::vector<double> result = load;
  for (std::size_t i = 0; i < result.size(); ++i) result[i] -= correction[i];
  return result;
}

ErrorBreakdown triple_norm_error(const Mesh& mesh,
                                 const DiscreteSpaces& spaces,
                                 const CellVectorField& H_h,
                                 const CellVectorField& j_h_omega,
                                 const ProblemData& data) {
  const QuadratureRule& rule = tet_rule_degree5();
  ErrorBreakdown out;
  out.cell_H2.assign(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 diff = data.H_exact(x) - H_h(c, rule.points[q], x);
      acc += rule.weights[q] * diff.squaredNorm();
    }
    out.cell_H2[c] = acc * mesh.volume[c] * mesh.cells[c].mu;
  }
  const Mesh& om = spaces.sub.mesh;
  out.cell_j2.assign(om.n_cells(), 0.0);
  for (int c = 0; c < om.n_cells(); ++c) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = om.point(c, rule.points[q]);
      const Vec3 diff = data.j_exact(x) - j_h_omega(c, rule.points[q], x);
      acc += rule.weights[q] * diff.squaredNorm();
    }
    out.cell_j2[c] = acc * om.volume[c];
  }
  double h2 = 0.0, j2 = 0.0;
  for (double t : out.cell_H2) h2 += t;
  for (double t : out.cell_j2) j2 += t;
  out.err_H = std::sqrt(h2);
  out.err_j = std::sqrt(j2);
  out.total = std::sqrt(h2 + data.kappa * j2);
  return out;
}

ErrorBreakdown triple_norm_error(const Mesh& mesh,
                                 const DiscreteSpaces& spaces,
                                 const OptimalitySolution& sol,
                                 const ProblemData& data) {
  const Mesh& om = spaces.sub.mesh;
  const auto H_h = [&mesh, &sol](int c, const std::array<double, 4>& bary,
                                 const Vec3&) {
    return eval_magnetic(mesh, sol.H, c, bary);
  };
  const auto j_h = [&om, &sol](int c, const std::array<double, 4>& bary,
                               const Vec3&) {
    return eval_edge_field(om, c, bary, sol.j);
  };
  return triple_norm_error(mesh, spaces, H_h, j_h, data);
}

}  // namespace ampere
