// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_ESTIMATOR_HPP
#define AMPERE_ESTIMATOR_HPP

#include <optional>
#include <vector>

#include "ampere/solver.hpp"

namespace ampere {

/// Analytic constants entering the guaranteed bound: the Maxwell constant
/// (|Phi| <= c_maxwell |rot Phi| on the solenoidal zero-trace subspace,
/// bounded by eps_max * mu_max * d_domain / pi on convex domains) and the
/// Poincare constants of the two boxes.
struct EstimatorConstants {
  double c_maxwell = 0.0;
  double c_poincare_omega = 0.0;
  double c_poincare_domain = 0.0;
  double d_domain = 0.0;
  double d_omega = 0.0;

  static EstimatorConstants for_boxes(const Box& domain, const Box& control,
                                      double mu_max, double eps_max = 1.0);
};

struct EstimatorOptions {
  /// Analytic constants; derived from the problem geometry and the mesh's
  /// permeability range when not supplied.
  std::optional<EstimatorConstants> constants;
  double tol = 1e-10;
  int max_iterations = 200000;
  /// Use the variant first term |rot E_h - mu Psi|_{mu^-1} +
  /// c_m |zeta j_h + J - rot(Psi + H_d)| that keeps H_d analytic (requires
  /// rot-conforming H_d with ProblemData::rot_H_d available).
  bool hd_conforming_variant = false;
};

/// Result of one auxiliary minimization.
struct AuxField {
  std::vector<double> entity;  ///< per-entity coefficients
  SolveReport report;
};

/// Minimizes |G - Psi|_mu^2 + c_m^2 |S - rot Psi|^2 over the free edge space
/// by solving its normal equations (SPD, conjugate gradients).
AuxField optimize_aux_curl(const Mesh& mesh, const DofMap& edge_free,
                           const CellVectorField& G, const CellVectorField& S,
                           const EstimatorConstants& constants, double tol,
                           int max_iterations);

double aux_curl_objective(const Mesh& mesh, const CellVectorField& G,
                          const CellVectorField& S,
                          const EstimatorConstants& constants,
                          const std::vector<double>& psi_entity);

/// Minimizes |T - Upsilon|^2 + c_p_omega^2 |div Upsilon|^2 over the
/// zero-normal-trace Raviart-Thomas space of the control mesh.
AuxField optimize_aux_div(const Mesh& omega_mesh, const DofMap& face_map,
                          const CellVectorField& T,
                          const EstimatorConstants& constants, double tol,
                          int max_iterations);

double aux_div_objective(const Mesh& omega_mesh, const DofMap& face_map,
                         const CellVectorField& T,
                         const EstimatorConstants& constants,
                         const std::vector<double>& upsilon_entity);

/// The guaranteed two-part upper bound and its elementwise localization.
struct EstimatorReport {
  double majorant = 0.0;      ///< majorant_rot + weight * majorant_pi
  double majorant_rot = 0.0;  ///< term_field + c_m * term_residual
  double majorant_pi = 0.0;   ///< term_control + c_p_omega * term_div
  double weight_pi = 0.0;     ///< kappa^-1 c_m + kappa^-1/2

  // Global L2 aggregates of the four ingredients.
  double term_field = 0.0;     ///< |H_h - Psi|_mu over the domain
  double term_residual = 0.0;  ///< |zeta j_h + J - rot Psi| over the domain
  double term_control = 0.0;   ///< |E_h + grad v_h - Upsilon| over omega
  double term_div = 0.0;       ///< |div Upsilon| over omega

  /// Elementwise indicator: per-cell l1 combination of elementwise L2 norms
  /// (control-part zero outside the control mesh).
  std::vector<double> indicator;
  std::vector<double> cell_field2;     ///< per full-mesh cell
  std::vector<double> cell_residual2;  ///< per full-mesh cell
  std::vector<double> cell_control2;   ///< per control-mesh cell
  std::vector<double> cell_div2;       ///< per control-mesh cell

  std::vector<double> psi_entity;      ///< optimized edge candidate
  std::vector<double> upsilon_entity;  ///< optimized face candidate
  SolveReport aux_curl;
  SolveReport aux_div;

  EstimatorConstants constants;
};

/// Evaluates the bound for externally supplied candidate fields.
EstimatorReport majorant_with_candidates(
    const Mesh& mesh, const DiscreteSpaces& spaces,
    const OptimalitySolution& sol, const ProblemData& data,
    const std::vector<double>& psi_entity,
    const std::vector<double>& upsilon_entity,
    const EstimatorOptions& options = {});

/// Optimizes both auxiliary fields, then evaluates the bound.
EstimatorReport estimate_majorant(const Mesh& mesh,
                                  const DiscreteSpaces& spaces,
                                  const OptimalitySolution& sol,
                                  const ProblemData& data,
                                  const EstimatorOptions& options = {});

/// A divergence-conforming candidate for the diagnostic bound below.
struct DivCandidate {
  VectorField value;  ///< Phi
  ScalarField div;    ///< div(eps Phi)
};

/// Diagnostic bound |field - Phi| + c_p_domain |div eps Phi| for the
/// non-solenoidal part of an approximation error (not part of the majorant).
double majorant_div(const Mesh& mesh, const CellVectorField& field,
                    const DivCandidate& candidate,
                    const EstimatorConstants& constants);

/// Lower bound for the squared combined error of (H_h, j_h):
///   <2(zeta j_h + J) - kappa^-1 zeta zeta* Phi, Phi>
///     - <2 H_h + mu^-1 rot Phi, rot Phi>
/// for any zero-trace edge field Phi.
double minorant(const Mesh& mesh, const DiscreteSpaces& spaces,
                const OptimalitySolution& sol, const ProblemData& data,
                const std::vector<double>& phi_entity);

/// The candidate that makes the lower bound informative in the benchmark:
/// the edge interpolant of the exact adjoint state error plus a nodal
/// gradient correction matching grad v_h on the control domain. Zero on
/// boundary edges.
std::vector<double> adjoint_error_proxy(const Mesh& mesh,
                                        const DiscreteSpaces& spaces,
                                        const OptimalitySolution& sol,
                                        const ProblemData& data);

}  // namespace ampere

#endif  // AMPERE_ESTIMATOR_HPP
