// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_AFEM_HPP
#define AMPERE_AFEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "ampere/estimator.hpp"
#include "ampere/solver.hpp"

namespace ampere {

enum class AfemMode {
  AdaptiveMajorant,  ///< marking driven by the guaranteed bound's indicator
  AdaptiveExact,     ///< marking driven by the elementwise true error
  Uniform,           ///< no marking; every cell refined each step
};

std::string to_string(AfemMode mode);

struct AfemConfig {
  AfemMode mode = AfemMode::AdaptiveMajorant;
  int initial_n = 6;        ///< cubes per axis of the initial grid
  double theta = 0.5;       ///< bulk-marking fraction, in (0,1)
  double kappa = 1.0;       ///< control cost weight
  long long max_dof = 150000;
  int max_iterations = 20;
  double tol_kkt = 1e-10;
  double tol_aux = 1e-10;
  bool compute_minorant = false;       ///< evaluate the lower bound per step
  bool hd_conforming_variant = false;  ///< alternative first majorant term
  std::string out_dir = "out";  ///< consumed by the CLI artifact writers

  /// Throws std::invalid_argument on out-of-range values. The max_dof >=
  /// initial-dof requirement is enforced by run() once the initial mesh
  /// exists.
  void validate() const;
};

/// One row of the convergence history.
struct ConvergenceRecord {
  int iteration = 0;
  long long dof = 0;  ///< unknowns of the coupled system on this mesh
  int n_cells = 0;
  double err_H = 0.0;
  double err_j = 0.0;
  double total = 0.0;
  std::optional<double> majorant;      ///< M_h; absent in uniform/exact modes
  std::optional<double> majorant_rot;
  std::optional<double> majorant_pi;
  std::optional<double> efficiency;    ///< majorant / total
  std::optional<double> minorant;
  bool kkt_converged = false;
  int kkt_iterations = 0;
  double kkt_residual = 0.0;
  bool aux_converged = true;
  /// total <= majorant + 1e-8 (1 + majorant); true when no majorant computed.
  bool majorant_valid = true;
  /// minorant <= total^2 <= majorant^2, each with 1e-8 relative slack; true
  /// when not computed.
  bool sandwich_valid = true;
  int marked_cells = 0;
  double marked_omega_fraction = 0.0;  ///< marked cells inside the control box
};

/// Everything an artifact writer may want per iteration.
struct IterationContext {
  int iteration;
  const Mesh& mesh;
  const DiscreteSpaces& spaces;
  const OptimalitySolution& solution;
  const EstimatorReport* estimator;      ///< null outside majorant mode
  const std::vector<double>* indicator;  ///< null in uniform mode
  const ConvergenceRecord& record;
};

using IterationCallback = std::function<void(const IterationContext&)>;

struct AfemResult {
  std::vector<ConvergenceRecord> records;
  bool all_solves_converged = true;
  bool majorant_always_valid = true;
  Mesh final_mesh;
};

/// Minimal descending-prefix bulk marking: the shortest prefix of the cells
/// sorted by decreasing indicator (ties by cell index) whose indicator sum
/// reaches theta times the total. All-zero indicators give the empty set.
MarkedSet dorfler_mark(const std::vector<double>& indicators, double theta);

/// Verifies that `child` arose from `parent` by refinement: parent indices
/// in range and per-parent child volumes summing to the parent volume.
/// Throws std::logic_error on violation.
void audit_nestedness(const Mesh& parent, const Mesh& child);

/// The solve -> estimate -> mark -> refine loop. Stops when the dof count
/// reaches config.max_dof or after config.max_iterations records.
AfemResult run_afem(const AfemConfig& config, const ProblemData& data,
                    const IterationCallback& callback = {});

}  // namespace ampere

#endif  // AMPERE_AFEM_HPP
