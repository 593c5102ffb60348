// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace ampere {
namespace {

constexpr double kPi = 3.14159265358979323846;

EstimatorConstants resolve_constants(const Mesh& mesh, const ProblemData& data,
                                     const EstimatorOptions& options) {
  if (options.constants) return *options.constants;
  double mu_max = 0.0;
  for (const Cell& cell : mesh.cells) mu_max = std::max(mu_max, cell.mu);
  return EstimatorConstants::for_boxes(data.domain, data.control, mu_max);
}

// The two fields entering the first bound part: G is matched by Psi in the
// mu-weighted norm, S by rot Psi. In the default form G carries the
// interpolated H_d; in the conforming-H_d variant the data stays analytic
// and moves into S.
struct EffectiveFields {
  CellVectorField G;
  CellVectorField S;
};

EffectiveFields make_effective_fields(const Mesh& mesh,
                                      const DiscreteSpaces& spaces,
                                      const OptimalitySolution& sol,
                                      const ProblemData& data,
                                      bool hd_conforming_variant) {
  // parent cell -> control-mesh cell (or -1); barycentric coordinates agree
  // because the submesh vertex renumbering preserves order.
  auto parent_to_sub = std::make_shared<std::vector<int>>(mesh.n_cells(), -1);
  for (int sc = 0; sc < spaces.sub.mesh.n_cells(); ++sc) {
    (*parent_to_sub)[spaces.sub.cell_parent[sc]] = sc;
  }
  const Mesh* om = &spaces.sub.mesh;
  [[maybe_unused]] const Mesh* m = &mesh;
  const OptimalitySolution* s = &sol;

  EffectiveFields fields;
  auto control_current = [om, s, parent_to_sub](
                             int c, const std::array<double, 4>& bary) {
    const int sc = (*parent_to_sub)[c];
    return sc < 0 ? Vec3(Vec3::Zero())
                  : Vec3(eval_edge_field(*om, sc, bary, s->j));
  };
  if (hd_conforming_variant) {
    if (!data.rot_H_d) {
      throw std::invalid_argument(
          "conforming-H_d variant requires ProblemData::rot_H_d");
    }
    const VectorField rot_hd = data.rot_H_d;
    const VectorField J = data.J;
    fields.G = [s](int c, const std::array<double, 4>&, const Vec3&) {
      return s->H.curl_part[c];
    };
    fields.S = [J, rot_hd, control_current](
                   int c, const std::array<double, 4>& bary, const Vec3& x) {
      return Vec3(control_current(c, bary) + J(x) - rot_hd(x));
    };
  } else {
    const VectorField J = data.J;
    fields.G = [m, s](int c, const std::array<double, 4>& bary, const Vec3&) {
      return eval_magnetic(*m, s->H, c, bary);
    };
    fields.S = [J, control_current](int c, const std::array<double, 4>& bary,
                                    const Vec3& x) {
      return Vec3(control_current(c, bary) + J(x));
    };
  }
  return fields;
}

// zeta* E_h + grad v_h as a control-mesh cell field.
CellVectorField make_control_target(const DiscreteSpaces& spaces,
                                    const OptimalitySolution& sol) {
  const Mesh* om = &spaces.sub.mesh;
  auto restricted = std::make_shared<std::vector<double>>(om->n_edges());
  for (int e = 0; e < om->n_edges(); ++e) {
    (*restricted)[e] = sol.E[spaces.sub.edge_parent[e]];
  }
  auto grad_v = std::make_shared<std::vector<Vec3>>(om->n_cells());
  for (int sc = 0; sc < om->n_cells(); ++sc) {
    (*grad_v)[sc] = eval_nodal_gradient(*om, sc, sol.v);
  }
  return [om, restricted, grad_v](int c, const std::array<double, 4>& bary,
                                  const Vec3&) {
    return Vec3(eval_edge_field(*om, c, bary, *restricted) + (*grad_v)[c]);
  };
}

}  // namespace

EstimatorConstants EstimatorConstants::for_boxes(const Box& domain,
                                                 const Box& control,
                                                 double mu_max,
                                                 double eps_max) {
  if (mu_max <= 0.0 || eps_max <= 0.0) {
    throw std::invalid_argument("material bounds must be positive");
  }
  EstimatorConstants c;
  c.d_domain = domain.diameter();
  c.d_omega = control.diameter();
  c.c_poincare_domain = c.d_domain / kPi;
  c.c_poincare_omega = c.d_omega / kPi;
  c.c_maxwell = eps_max * mu_max * c.c_poincare_domain;
  return c;
}

AuxField optimize_aux_curl(const Mesh& mesh, const DofMap& edge_free,
                           const CellVectorField& G, const CellVectorField& S,
                           const EstimatorConstants& constants, double tol,
                           int max_iterations) {
  const double c2 = constants.c_maxwell * constants.c_maxwell;
  const SparseMatrix curl_curl =
      assemble_curl_curl(mesh, edge_free, [c2](int) { return c2; });
  const SparseMatrix mass = assemble_vector_mass(
      mesh, edge_free, [&mesh](int c) { return mesh.cells[c].mu; });
  TripletBuilder builder(edge_free.n_free, edge_free.n_free);
  for (int r = 0; r < curl_curl.rows; ++r) {
    for (int p = curl_curl.rowptr[r]; p < curl_curl.rowptr[r + 1]; ++p) {
      builder.add(r, curl_curl.colind[p], curl_curl.val[p]);
    }
    for (int p = mass.rowptr[r]; p < mass.rowptr[r + 1]; ++p) {
      builder.add(r, mass.colind[p], mass.val[p]);
    }
  }
  const SparseMatrix sys = builder.compress();

  const QuadratureRule& rule = tet_rule_degree5();
  std::vector<double> rhs(edge_free.n_free, 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double mu = mesh.cells[c].mu;
    const double volume = mesh.volume[c];
    std::array<double, 6> local{};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 g = G(c, rule.points[q], x);
      const Vec3 s = S(c, rule.points[q], x);
      const double w = rule.weights[q] * volume;
      for (int k = 0; k < 6; ++k) {
        local[k] += w * (mu * g.dot(edge_basis_value(mesh, c, k, rule.points[q])) +
                         c2 * s.dot(edge_basis_curl(mesh, c, k)));
      }
    }
    for (int k = 0; k < 6; ++k) {
      const int dof = edge_free.entity_to_dof[mesh.cell_edges[c][k]];
      if (dof >= 0) rhs[dof] += local[k];
    }
  }

  AuxField out;
  std::vector<double> x(edge_free.n_free, 0.0);
  out.report = cg(sys, rhs, x, tol, max_iterations, sys.diagonal());
  FeField field{edge_free.kind, std::move(x)};
  out.entity = expand_to_entities(edge_free, field);
  return out;
}

double aux_curl_objective(const Mesh& mesh, const CellVectorField& G,
                          const CellVectorField& S,
                          const EstimatorConstants& constants,
                          const std::vector<double>& psi_entity) {
  const double c2 = constants.c_maxwell * constants.c_maxwell;
  const QuadratureRule& rule = tet_rule_degree5();
  double objective = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double mu = mesh.cells[c].mu;
    const Vec3 rot_psi = eval_edge_curl(mesh, c, psi_entity);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 dg =
          G(c, rule.points[q], x) -
          eval_edge_field(mesh, c, rule.points[q], psi_entity);
      const Vec3 ds = S(c, rule.points[q], x) - rot_psi;
      acc += rule.weights[q] * (mu * dg.squaredNorm() + c2 * ds.squaredNorm());
    }
    objective += acc * mesh.volume[c];
  }
  return objective;
}

AuxField optimize_aux_div(const Mesh& omega_mesh, const DofMap& face_map,
                          const CellVectorField& T,
                          const EstimatorConstants& constants, double tol,
                          int max_iterations) {
  AuxField out;
  if (face_map.n_free == 0) {
    out.entity.assign(face_map.n_entities, 0.0);
    out.report.converged = true;
    return out;
  }
  const double cp2 = constants.c_poincare_omega * constants.c_poincare_omega;
  const SparseMatrix mass =
      assemble_rt_mass(omega_mesh, face_map, [](int) { return 1.0; });
  const SparseMatrix div_div =
      assemble_div_div(omega_mesh, face_map, [cp2](int) { return cp2; });
  TripletBuilder builder(face_map.n_free, face_map.n_free);
  for (int r = 0; r < mass.rows; ++r) {
    for (int p = mass.rowptr[r]; p < mass.rowptr[r + 1]; ++p) {
      builder.add(r, mass.colind[p], mass.val[p]);
    }
    for (int p = div_div.rowptr[r]; p < div_div.rowptr[r + 1]; ++p) {
      builder.add(r, div_div.colind[p], div_div.val[p]);
    }
  }
  const SparseMatrix sys = builder.compress();

  const QuadratureRule& rule = tet_rule_degree5();
  std::vector<double> rhs(face_map.n_free, 0.0);
  for (int c = 0; c < omega_mesh.n_cells(); ++c) {
    const RtCellBasis basis = rt_cell_basis(omega_mesh, c);
    const auto& signs = face_map.cell_signs[c];
    const double volume = omega_mesh.volume[c];
    std::array<double, 4> local{};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = omega_mesh.point(c, rule.points[q]);
      const Vec3 t = T(c, rule.points[q], x);
      const double w = rule.weights[q] * volume;
      for (int k = 0; k < 4; ++k) {
        Vec3 phi = Vec3::Zero();
        for (int m = 0; m < 4; ++m) phi += rule.points[q][m] * basis.coeff[k][m];
        local[k] += w * t.dot(phi);
      }
    }
    for (int k = 0; k < 4; ++k) {
      const int dof = face_map.entity_to_dof[omega_mesh.cell_faces[c][k]];
      if (dof >= 0) rhs[dof] += signs[k] * local[k];
    }
  }

  std::vector<double> x(face_map.n_free, 0.0);
  out.report = cg(sys, rhs, x, tol, max_iterations, sys.diagonal());
  FeField field{face_map.kind, std::move(x)};
  out.entity = expand_to_entities(face_map, field);
  return out;
}

double aux_div_objective(const Mesh& omega_mesh, const DofMap& face_map,
                         const CellVectorField& T,
                         const EstimatorConstants& constants,
                         const std::vector<double>& upsilon_entity) {
  const double cp2 = constants.c_poincare_omega * constants.c_poincare_omega;
  const QuadratureRule& rule = tet_rule_degree5();
  double objective = 0.0;
  for (int c = 0; c < omega_mesh.n_cells(); ++c) {
    const double div =
        eval_rt_div(omega_mesh, face_map, c, upsilon_entity);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = omega_mesh.point(c, rule.points[q]);
      const Vec3 dt =
          T(c, rule.points[q], x) -
          eval_rt_field(omega_mesh, face_map, c, rule.points[q],
                        upsilon_entity);
      acc += rule.weights[q] * dt.squaredNorm();
    }
    objective += (acc + cp2 * div * div) * omega_mesh.volume[c];
  }
  return objective;
}

EstimatorReport majorant_with_candidates(
    const Mesh& mesh, const DiscreteSpaces& spaces,
    const OptimalitySolution& sol, const ProblemData& data,
    const std::vector<double>& psi_entity,
    const std::vector<double>& upsilon_entity,
    const EstimatorOptions& options) {
  EstimatorReport rep;
  rep.constants = resolve_constants(mesh, data, options);
  const EstimatorConstants& k = rep.constants;
  const EffectiveFields fields = make_effective_fields(
      mesh, spaces, sol, data, options.hd_conforming_variant);
  const CellVectorField target = make_control_target(spaces, sol);
  const Mesh& om = spaces.sub.mesh;
  const QuadratureRule& rule = tet_rule_degree5();

  rep.cell_field2.assign(mesh.n_cells(), 0.0);
  rep.cell_residual2.assign(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double mu = mesh.cells[c].mu;
    const Vec3 rot_psi = eval_edge_curl(mesh, c, psi_entity);
    double f2 = 0.0, r2 = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 dg =
          fields.G(c, rule.points[q], x) -
          eval_edge_field(mesh, c, rule.points[q], psi_entity);
      const Vec3 ds = fields.S(c, rule.points[q], x) - rot_psi;
      f2 += rule.weights[q] * dg.squaredNorm();
      r2 += rule.weights[q] * ds.squaredNorm();
    }
    rep.cell_field2[c] = f2 * mesh.volume[c] * mu;
    rep.cell_residual2[c] = r2 * mesh.volume[c];
  }

  rep.cell_control2.assign(om.n_cells(), 0.0);
  rep.cell_div2.assign(om.n_cells(), 0.0);
  for (int sc = 0; sc < om.n_cells(); ++sc) {
    const RtCellBasis basis = rt_cell_basis(om, sc);
    const auto& signs = spaces.omega_face.cell_signs[sc];
    double div = 0.0;
    for (int kk = 0; kk < 4; ++kk) {
      div += signs[kk] * upsilon_entity[om.cell_faces[sc][kk]] * basis.div[kk];
    }
    double c2 = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = om.point(sc, rule.points[q]);
      Vec3 ups = Vec3::Zero();
      for (int kk = 0; kk < 4; ++kk) {
        const double coeff =
            signs[kk] * upsilon_entity[om.cell_faces[sc][kk]];
        for (int m = 0; m < 4; ++m) {
          ups += coeff * rule.points[q][m] * basis.coeff[kk][m];
        }
      }
      const Vec3 dt = target(sc, rule.points[q], x) - ups;
      c2 += rule.weights[q] * dt.squaredNorm();
    }
    rep.cell_control2[sc] = c2 * om.volume[sc];
    rep.cell_div2[sc] = div * div * om.volume[sc];
  }

  const double sum_f2 =
      std::accumulate(rep.cell_field2.begin(), rep.cell_field2.end(), 0.0);
  const double sum_r2 = std::accumulate(rep.cell_residual2.begin(),
                                        rep.cell_residual2.end(), 0.0);
  const double sum_c2 = std::accumulate(rep.cell_control2.begin(),
                                        rep.cell_control2.end(), 0.0);
  const double sum_d2 =
      std::accumulate(rep.cell_div2.begin(), rep.cell_div2.end(), 0.0);
  rep.term_field = std::sqrt(sum_f2);
  rep.term_residual = std::sqrt(sum_r2);
  rep.term_control = std::sqrt(sum_c2);
  rep.term_div = std::sqrt(sum_d2);
  rep.majorant_rot = rep.term_field + k.c_maxwell * rep.term_residual;
  rep.majorant_pi = rep.term_control + k.c_poincare_omega * rep.term_div;
  rep.weight_pi = k.c_maxwell / data.kappa + 1.0 / std::sqrt(data.kappa);
  rep.majorant = rep.majorant_rot + rep.weight_pi * rep.majorant_pi;

  rep.indicator.assign(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    rep.indicator[c] = std::sqrt(rep.cell_field2[c]) +
                       k.c_maxwell * std::sqrt(rep.cell_residual2[c]);
  }
  for (int sc = 0; sc < om.n_cells(); ++sc) {
    rep.indicator[spaces.sub.cell_parent[sc]] +=
        rep.weight_pi * (std::sqrt(rep.cell_control2[sc]) +
                         k.c_poincare_omega * std::sqrt(rep.cell_div2[sc]));
  }

  rep.psi_entity = psi_entity;
  rep.upsilon_entity = upsilon_entity;
  return rep;
}

EstimatorReport estimate_majorant(const Mesh& mesh,
                                  const DiscreteSpaces& spaces,
                                  const OptimalitySolution& sol,
                                  const ProblemData& data,
                                  const EstimatorOptions& options) {
  EstimatorOptions resolved = options;
  resolved.constants = resolve_constants(mesh, data, options);
  const EffectiveFields fields = make_effective_fields(
      mesh, spaces, sol, data, resolved.hd_conforming_variant);
  AuxField psi =
      optimize_aux_curl(mesh, spaces.edge_free, fields.G, fields.S,
                        *resolved.constants, resolved.tol,
                        resolved.max_iterations);
  const CellVectorField target = make_control_target(spaces, sol);
  AuxField upsilon =
      optimize_aux_div(spaces.sub.mesh, spaces.omega_face, target,
                       *resolved.constants, resolved.tol,
                       resolved.max_iterations);
  EstimatorReport rep = majorant_with_candidates(
      mesh, spaces, sol, data, psi.entity, upsilon.entity, resolved);
  rep.aux_curl = psi.report;
  rep.aux_div = upsilon.report;
  return rep;
}

double majorant_div(const Mesh& mesh, const CellVectorField& field,
                    const DivCandidate& candidate,
                    const EstimatorConstants& constants) {
  const QuadratureRule& rule = tet_rule_degree5();
  double diff2 = 0.0, div2 = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double a = 0.0, b = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 d = field(c, rule.points[q], x) - candidate.value(x);
      const double dv = candidate.div(x);
      a += rule.weights[q] * d.squaredNorm();
      b += rule.weights[q] * dv * dv;
    }
    diff2 += a * mesh.volume[c];
    div2 += b * mesh.volume[c];
  }
  return std::sqrt(diff2) + constants.c_poincare_domain * std::sqrt(div2);
}

double minorant(const Mesh& mesh, const DiscreteSpaces& spaces,
                const OptimalitySolution& sol, const ProblemData& data,
                const std::vector<double>& phi_entity) {
  const EffectiveFields fields =
      make_effective_fields(mesh, spaces, sol, data, false);
  const QuadratureRule& rule = tet_rule_degree5();
  double value = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const bool in_omega = mesh.cells[c].subdomain == 1;
    const double inv_mu = 1.0 / mesh.cells[c].mu;
    const Vec3 rot_phi = eval_edge_curl(mesh, c, phi_entity);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      const Vec3 phi = eval_edge_field(mesh, c, rule.points[q], phi_entity);
      const Vec3 source = fields.S(c, rule.points[q], x);  // zeta j_h + J
      const Vec3 h = eval_magnetic(mesh, sol.H, c, rule.points[q]);
      double term = (2.0 * source).dot(phi) -
                    (2.0 * h + inv_mu * rot_phi).dot(rot_phi);
      if (in_omega) term -= phi.squaredNorm() / data.kappa;
      acc += rule.weights[q] * term;
    }
    value += acc * mesh.volume[c];
  }
  return value;
}

std::vector<double> adjoint_error_proxy(const Mesh& mesh,
                                        const DiscreteSpaces& spaces,
                                        const OptimalitySolution& sol,
                                        const ProblemData& data) {
  if (!data.has_exact) {
    throw std::invalid_argument("proxy requires the exact solution");
  }
  const FeField interpolant =
      interpolate_edge(mesh, spaces.edge_free, data.E_exact);
  std::vector<double> phi = expand_to_entities(spaces.edge_free, interpolant);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) phi[e] = 0.0;
    phi[e] -= sol.E[e];
  }

  // Constant-shifted copy of -v_h on the control vertices, zero elsewhere;
  // its gradient corrects the control part of the proxy.
  double mean_v = 0.0;
  for (double val : sol.v) mean_v += val;
  mean_v /= static_cast<double>(sol.v.size());
  std::vector<double> lift(mesh.n_vertices(), 0.0);
  for (std::size_t sv = 0; sv < spaces.sub.vertex_parent.size(); ++sv) {
    lift[spaces.sub.vertex_parent[sv]] = mean_v - sol.v[sv];
  }
  const FeField lift_field =
      compress_from_entities(spaces.nodal, lift);
  const FeField grad_lift = gradient_edge_coefficients(
      mesh, spaces.nodal, spaces.edge, lift_field);
  const std::vector<double> grad_entity =
      expand_to_entities(spaces.edge, grad_lift);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    phi[e] += grad_entity[e];
    if (mesh.edge_on_boundary[e]) phi[e] = 0.0;
  }
  return phi;
}

}  // namespace ampere
