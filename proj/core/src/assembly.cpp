// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/assembly.hpp"

#include <stdexcept>

namespace ampere {
namespace {

// integral over T of lambda_i lambda_j = V * (1 + delta_ij) / 20.
constexpr double lamlam(int i, int j) { return (i == j) ? 0.1 : 0.05; }

// Whitney coefficients: w_k = lambda_i grad(lambda_j) - lambda_j
// grad(lambda_i) for local edge k = (i, j) over sorted cell vertices.
struct EdgeCellBasis {
  // w_k = sum_m lambda_m coeff[k][m] with constant vectors coeff.
  std::array<std::array<Vec3, 4>, 6> coeff;
  std::array<Vec3, 6> curl;  // constant per cell
};

EdgeCellBasis edge_cell_basis(const Mesh& mesh, int cell) {
  EdgeCellBasis basis;
  const auto& g = mesh.grad_lambda[cell];
  for (int k = 0; k < 6; ++k) {
    const int i = kLocalEdges[k][0];
    const int j = kLocalEdges[k][1];
    for (int m = 0; m < 4; ++m) basis.coeff[k][m] = Vec3::Zero();
    basis.coeff[k][i] = g[j];
    basis.coeff[k][j] = -g[i];
    basis.curl[k] = 2.0 * g[i].cross(g[j]);
  }
  return basis;
}

void scatter_symmetric(TripletBuilder& builder, const DofMap& dofmap, int cell,
                       const std::vector<std::vector<double>>& local) {
  const auto& ents = dofmap.cell_entities[cell];
  const auto& sign = dofmap.cell_signs[cell];
  const int n = static_cast<int>(ents.size());
  for (int a = 0; a < n; ++a) {
    const int ra = dofmap.entity_to_dof[ents[a]];
    if (ra < 0) continue;
    for (int b = 0; b < n; ++b) {
      const int rb = dofmap.entity_to_dof[ents[b]];
      if (rb < 0) continue;
      builder.add(ra, rb, sign[a] * sign[b] * local[a][b]);
    }
  }
}

}  // namespace

Vec3 edge_basis_value(const Mesh& mesh, int cell, int k,
                      const std::array<double, 4>& bary) {
  const auto& g = mesh.grad_lambda[cell];
  const int i = kLocalEdges[k][0];
  const int j = kLocalEdges[k][1];
  return bary[i] * g[j] - bary[j] * g[i];
}

Vec3 edge_basis_curl(const Mesh& mesh, int cell, int k) {
  const auto& g = mesh.grad_lambda[cell];
  const int i = kLocalEdges[k][0];
  const int j = kLocalEdges[k][1];
  return 2.0 * g[i].cross(g[j]);
}

Vec3 eval_edge_field(const Mesh& mesh, int cell,
                     const std::array<double, 4>& bary,
                     const std::vector<double>& entity_values) {
  Vec3 value = Vec3::Zero();
  for (int k = 0; k < 6; ++k) {
    value += entity_values[mesh.cell_edges[cell][k]] *
             edge_basis_value(mesh, cell, k, bary);
  }
  return value;
}

Vec3 eval_edge_curl(const Mesh& mesh, int cell,
                    const std::vector<double>& entity_values) {
  Vec3 value = Vec3::Zero();
  for (int k = 0; k < 6; ++k) {
    value += entity_values[mesh.cell_edges[cell][k]] *
             edge_basis_curl(mesh, cell, k);
  }
  return value;
}

RtCellBasis rt_cell_basis(const Mesh& mesh, int cell) {
  RtCellBasis basis;
  const auto& g = mesh.grad_lambda[cell];
  const double volume = mesh.volume[cell];
  for (int k = 0; k < 4; ++k) {
    // Whitney 2-form of the face opposite local vertex k (sorted vertices
    // a < b < c of the face):
    //   W = 2 (lambda_a gb x gc + lambda_b gc x ga + lambda_c ga x gb).
    const int a = kLocalFaces[k][0];
    const int b = kLocalFaces[k][1];
    const int c = kLocalFaces[k][2];
    const double det3 = g[a].dot(g[b].cross(g[c]));
    const double flux_out = 6.0 * det3 * volume;  // outward flux of W
    for (int m = 0; m < 4; ++m) basis.coeff[k][m] = Vec3::Zero();
    basis.coeff[k][a] = 2.0 * g[b].cross(g[c]) / flux_out;
    basis.coeff[k][b] = 2.0 * g[c].cross(g[a]) / flux_out;
    basis.coeff[k][c] = 2.0 * g[a].cross(g[b]) / flux_out;
    basis.div[k] = 1.0 / volume;  // div of the outward-normalized function
  }
  return basis;
}

Vec3 eval_rt_field(const Mesh& mesh, const DofMap& dofmap, int cell,
                   const std::array<double, 4>& bary,
                   const std::vector<double>& entity_values) {
  const RtCellBasis basis = rt_cell_basis(mesh, cell);
  const auto& sign = dofmap.cell_signs[cell];
  Vec3 value = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    const double coeff = sign[k] * entity_values[mesh.cell_faces[cell][k]];
    for (int m = 0; m < 4; ++m) value += coeff * bary[m] * basis.coeff[k][m];
  }
  return value;
}

double eval_rt_div(const Mesh& mesh, const DofMap& dofmap, int cell,
                   const std::vector<double>& entity_values) {
  const RtCellBasis basis = rt_cell_basis(mesh, cell);
  const auto& sign = dofmap.cell_signs[cell];
  double value = 0.0;
  for (int k = 0; k < 4; ++k) {
    value += sign[k] * entity_values[mesh.cell_faces[cell][k]] * basis.div[k];
  }
  return value;
}

double eval_nodal_field(const Mesh& mesh, int cell,
                        const std::array<double, 4>& bary,
                        const std::vector<double>& vertex_values) {
  double value = 0.0;
  for (int m = 0; m < 4; ++m) {
    value += bary[m] * vertex_values[mesh.sorted_cells[cell][m]];
  }
  return value;
}

Vec3 eval_nodal_gradient(const Mesh& mesh, int cell,
                         const std::vector<double>& vertex_values) {
  Vec3 value = Vec3::Zero();
  const auto& g = mesh.grad_lambda[cell];
  for (int m = 0; m < 4; ++m) {
    value += vertex_values[mesh.sorted_cells[cell][m]] * g[m];
  }
  return value;
}

SparseMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& edge_map,
                                const CellCoefficient& coefficient) {
  TripletBuilder builder(edge_map.n_free, edge_map.n_free);
  std::vector<std::vector<double>> local(6, std::vector<double>(6));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const EdgeCellBasis basis = edge_cell_basis(mesh, c);
    const double scale = coefficient(c) * mesh.volume[c];
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        local[a][b] = scale * basis.curl[a].dot(basis.curl[b]);
      }
    }
    scatter_symmetric(builder, edge_map, c, local);
  }
  return builder.compress();
}

SparseMatrix assemble_vector_mass(const Mesh& mesh, const DofMap& edge_map,
                                  const CellCoefficient& weight,
                                  bool restrict_to_subdomain) {
  TripletBuilder builder(edge_map.n_free, edge_map.n_free);
  std::vector<std::vector<double>> local(6, std::vector<double>(6));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (restrict_to_subdomain && mesh.cells[c].subdomain == 0) continue;
    const EdgeCellBasis basis = edge_cell_basis(mesh, c);
    const double scale = weight(c) * mesh.volume[c];
    // integral w_a . w_b expands exactly through the lambda_i lambda_j
    // moments of the coefficient representation.
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            sum += lamlam(i, j) * basis.coeff[a][i].dot(basis.coeff[b][j]);
          }
        }
        local[a][b] = scale * sum;
      }
    }
    scatter_symmetric(builder, edge_map, c, local);
  }
  return builder.compress();
}

SparseMatrix assemble_mixed_b(const Mesh& mesh, const DofMap& edge_map,
                              const DofMap& nodal_map) {
  TripletBuilder builder(nodal_map.n_free, edge_map.n_free);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& g = mesh.grad_lambda[c];
    const double volume = mesh.volume[c];
    for (int a = 0; a < 6; ++a) {
      const int edge = mesh.cell_edges[c][a];
      const int col = edge_map.entity_to_dof[edge];
      if (col < 0) continue;
      // integral w_a = V/4 (grad lambda_j - grad lambda_i).
      const int i = kLocalEdges[a][0];
      const int j = kLocalEdges[a][1];
      const Vec3 mean = 0.25 * volume * (g[j] - g[i]);
      for (int n = 0; n < 4; ++n) {
        const int row = nodal_map.entity_to_dof[mesh.sorted_cells[c][n]];
        if (row < 0) continue;
        builder.add(row, col, mean.dot(g[n]));
      }
    }
  }
  return builder.compress();
}

SparseMatrix assemble_mixed_c(const Submesh& sub, const DofMap& parent_edge_map,
                              const DofMap& omega_nodal_map, double scale) {
  const Mesh& mesh = sub.mesh;
  TripletBuilder builder(omega_nodal_map.n_free, parent_edge_map.n_free);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& g = mesh.grad_lambda[c];
    const double volume = mesh.volume[c];
    for (int a = 0; a < 6; ++a) {
      const int parent_edge = sub.edge_parent[mesh.cell_edges[c][a]];
      const int col = parent_edge_map.entity_to_dof[parent_edge];
      if (col < 0) continue;
      const int i = kLocalEdges[a][0];
      const int j = kLocalEdges[a][1];
      const Vec3 mean = 0.25 * volume * (g[j] - g[i]);
      for (int n = 0; n < 4; ++n) {
        const int row = omega_nodal_map.entity_to_dof[mesh.sorted_cells[c][n]];
        if (row < 0) continue;
        builder.add(row, col, scale * mean.dot(g[n]));
      }
    }
  }
  return builder.compress();
}

SparseMatrix assemble_nodal_stiffness(const Mesh& mesh, const DofMap& nodal_map,
                                      double scale) {
  TripletBuilder builder(nodal_map.n_free, nodal_map.n_free);
  std::vector<std::vector<double>> local(4, std::vector<double>(4));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& g = mesh.grad_lambda[c];
    const double factor = scale * mesh.volume[c];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) local[a][b] = factor * g[a].dot(g[b]);
    }
    scatter_symmetric(builder, nodal_map, c, local);
  }
  return builder.compress();
}

std::vector<double> assemble_load(
    const Mesh& mesh, const DofMap& edge_map,
    const std::function<Vec3(const Vec3&)>& j_d,
    const std::function<Vec3(const Vec3&)>& J,
    const std::function<Vec3(const Vec3&)>& H_d) {
  const QuadratureRule& rule = tet_rule_degree5();
  std::vector<double> rhs(edge_map.n_free, 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const bool in_omega = mesh.cells[c].subdomain == 1;
    const double volume = mesh.volume[c];
    std::array<double, 6> local{};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 x = mesh.point(c, rule.points[q]);
      Vec3 source = J(x);
      if (in_omega) source += j_d(x);
      const Vec3 hd = H_d(x);
      const double w = rule.weights[q] * volume;
      for (int k = 0; k < 6; ++k) {
        local[k] += w * source.dot(edge_basis_value(mesh, c, k, rule.points[q]));
      }
      // rot w_k is constant; fold H_d into the same loop.
      for (int k = 0; k < 6; ++k) {
        local[k] -= w * hd.dot(edge_basis_curl(mesh, c, k));
      }
    }
    for (int k = 0; k < 6; ++k) {
      const int row = edge_map.entity_to_dof[mesh.cell_edges[c][k]];
      if (row >= 0) rhs[row] += local[k];
    }
  }
  return rhs;
}

SparseMatrix assemble_rt_mass(const Mesh& mesh, const DofMap& face_map,
                              const CellCoefficient& weight) {
  TripletBuilder builder(face_map.n_free, face_map.n_free);
  std::vector<std::vector<double>> local(4, std::vector<double>(4));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const RtCellBasis basis = rt_cell_basis(mesh, c);
    const double scale = weight(c) * mesh.volume[c];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            sum += lamlam(i, j) * basis.coeff[a][i].dot(basis.coeff[b][j]);
          }
        }
        local[a][b] = scale * sum;
      }
    }
    scatter_symmetric(builder, face_map, c, local);
  }
  return builder.compress();
}

SparseMatrix assemble_div_div(const Mesh& mesh, const DofMap& face_map,
                              const CellCoefficient& weight) {
  TripletBuilder builder(face_map.n_free, face_map.n_free);
  std::vector<std::vector<double>> local(4, std::vector<double>(4));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const RtCellBasis basis = rt_cell_basis(mesh, c);
    const double scale = weight(c) * mesh.volume[c];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        local[a][b] = scale * basis.div[a] * basis.div[b];
      }
    }
    scatter_symmetric(builder, face_map, c, local);
  }
  return builder.compress();
}

}  // namespace ampere
