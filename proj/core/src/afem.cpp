// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/afem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ampere {

std::string to_string(AfemMode mode) {
  switch (mode) {
    case AfemMode::AdaptiveMajorant: return "adaptive-majorant";
    case AfemMode::AdaptiveExact: return "adaptive-exact";
    case AfemMode::Uniform: return "uniform";
  }
  return "unknown";
}

void AfemConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("theta must lie in (0,1)");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (initial_n < 1) throw std::invalid_argument("initial n must be >= 1");
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }
  if (max_dof < 1) throw std::invalid_argument("max_dof must be >= 1");
  if (!(tol_kkt > 0.0) || !(tol_aux > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
}

MarkedSet dorfler_mark(const std::vector<double>& indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in (0,1]");
  }
  for (double v : indicators) {
    if (v < 0.0) throw std::invalid_argument("indicators must be nonnegative");
  }
  const double total =
      std::accumulate(indicators.begin(), indicators.end(), 0.0);
  if (total <= 0.0) return {};
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&indicators](int a, int b) {
    if (indicators[a] != indicators[b]) return indicators[a] > indicators[b];
    return a < b;
  });
  const double target = theta * total - 1e-14 * total;
  MarkedSet marked;
  double sum = 0.0;
  for (int cell : order) {
    marked.push_back(cell);
    sum += indicators[cell];
    if (sum >= target) break;
  }
  return marked;
}

void audit_nestedness(const Mesh& parent, const Mesh& child) {
  std::vector<double> child_volume(parent.n_cells(), 0.0);
  for (int c = 0; c < child.n_cells(); ++c) {
    const int p = child.cells[c].parent;
    if (p < 0 || p >= parent.n_cells()) {
      throw std::logic_error("refined cell points to no valid parent");
    }
    child_volume[p] += child.volume[c];
  }
  for (int p = 0; p < parent.n_cells(); ++p) {
    const double expected = parent.volume[p];
    if (std::abs(child_volume[p] - expected) > 1e-12 * expected) {
      throw std::logic_error("child volumes do not cover their parent");
    }
  }
}

AfemResult run_afem(const AfemConfig& config, const ProblemData& data,
                    const IterationCallback& callback) {
  config.validate();
  AfemResult result;
  Mesh mesh = build_structured_cube(data.domain, config.initial_n,
                                    data.control, data.mu);

  for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
    const DiscreteSpaces spaces = build_spaces(mesh);
    KktSystem system = assemble_kkt(mesh, spaces, data);
    if (iteration == 0 && system.size() > config.max_dof) {
      throw std::invalid_argument(
          "max_dof is smaller than the initial mesh's dof count");
    }
    gauge_fix_v(system);
    const OptimalitySolution sol = solve_optimality(
        mesh, spaces, data, system, config.tol_kkt, 50 * system.size());
    const ErrorBreakdown err = triple_norm_error(mesh, spaces, sol, data);

    ConvergenceRecord rec;
    rec.iteration = iteration;
    rec.dof = system.size();
    rec.n_cells = mesh.n_cells();
    rec.err_H = err.err_H;
    rec.err_j = err.err_j;
    rec.total = err.total;
    rec.kkt_converged = sol.report.converged;
    rec.kkt_iterations = sol.report.iterations;
    rec.kkt_residual = sol.report.residual;
    result.all_solves_converged &= rec.kkt_converged;

    std::optional<EstimatorReport> estimator;
    std::vector<double> indicator;
    if (config.mode == AfemMode::AdaptiveMajorant) {
      EstimatorOptions opts;
      opts.tol = config.tol_aux;
      opts.hd_conforming_variant = config.hd_conforming_variant;
      estimator = estimate_majorant(mesh, spaces, sol, data, opts);
      rec.aux_converged =
          estimator->aux_curl.converged && estimator->aux_div.converged;
      result.all_solves_converged &= rec.aux_converged;
      rec.majorant = estimator->majorant;
      rec.majorant_rot = estimator->majorant_rot;
      rec.majorant_pi = estimator->majorant_pi;
      rec.efficiency = estimator->majorant / err.total;
      rec.majorant_valid =
          err.total <= *rec.majorant + 1e-8 * (1.0 + *rec.majorant);
      result.majorant_always_valid &= rec.majorant_valid;
      if (config.compute_minorant) {
        const std::vector<double> phi =
            adjoint_error_proxy(mesh, spaces, sol, data);
        rec.minorant = minorant(mesh, spaces, sol, data, phi);
        const double total2 = err.total * err.total;
        const double majorant2 = *rec.majorant * *rec.majorant;
        rec.sandwich_valid =
            *rec.minorant <= total2 + 1e-8 * (1.0 + total2) &&
            total2 <= majorant2 + 1e-8 * (1.0 + majorant2);
        result.majorant_always_valid &= rec.sandwich_valid;
      }
      indicator = estimator->indicator;
    } else if (config.mode == AfemMode::AdaptiveExact) {
      indicator.assign(mesh.n_cells(), 0.0);
      for (int c = 0; c < mesh.n_cells(); ++c) indicator[c] = err.cell_H2[c];
      for (int sc = 0; sc < spaces.sub.mesh.n_cells(); ++sc) {
        indicator[spaces.sub.cell_parent[sc]] +=
            config.kappa * err.cell_j2[sc];
      }
      for (double& v : indicator) v = std::sqrt(v);
    }

    const bool last = rec.dof >= config.max_dof ||
                      iteration == config.max_iterations - 1;
    MarkedSet marked;
    if (!last && config.mode != AfemMode::Uniform) {
      marked = dorfler_mark(indicator, config.theta);
      rec.marked_cells = static_cast<int>(marked.size());
      int in_omega = 0;
      for (int c : marked) in_omega += mesh.cells[c].subdomain == 1 ? 1 : 0;
      rec.marked_omega_fraction =
          marked.empty() ? 0.0
                         : static_cast<double>(in_omega) /
                               static_cast<double>(marked.size());
    } else if (!last) {
      rec.marked_cells = mesh.n_cells();
    }

    if (callback) {
      IterationContext ctx{iteration,
                           mesh,
                           spaces,
                           sol,
                           estimator ? &*estimator : nullptr,
                           config.mode == AfemMode::Uniform ? nullptr
                                                            : &indicator,
                           rec};
      callback(ctx);
    }
    result.records.push_back(rec);
    if (last) {
      result.final_mesh = std::move(mesh);
      break;
    }

    Mesh refined = config.mode == AfemMode::Uniform ? uniform_refine(mesh)
                                                    : bisect(mesh, marked);
    check_conforming(refined);
    audit_nestedness(mesh, refined);
    mesh = std::move(refined);
  }
  return result;
}

}  // namespace ampere
