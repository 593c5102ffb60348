// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_IO_HPP
#define AMPERE_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ampere/afem.hpp"

namespace ampere {

/// Driver configuration plus artifact switches.
struct RunConfig {
  AfemConfig afem;
  bool write_vtk = true;
  bool deterministic = false;  ///< pin the thread count to one
};

/// Parses a key=value configuration file ('#' starts a comment). Unknown
/// keys and malformed values raise std::runtime_error carrying the line
/// number. Keys: mode, n, theta, kappa, max_dof, max_iters, tol_kkt,
/// tol_aux, out, minorant, hd_variant, vtk, deterministic.
RunConfig load_config(const std::string& path);

AfemMode parse_mode(const std::string& text);

/// history.csv: header "DoF,err_H,err_j,total,M_h", one row per iteration,
/// every number printed with 17 significant digits so parsing reproduces the
/// records bit-exactly. The M_h field is empty when no bound was computed.
void write_history_header(std::ostream& out);
void write_history_row(std::ostream& out, const ConvergenceRecord& record);
void write_history_csv(const std::string& path,
                       const std::vector<ConvergenceRecord>& records);

/// Reads a history.csv back; only the five columns are populated.
std::vector<ConvergenceRecord> read_history_csv(const std::string& path);

/// Merges several run histories into "run,DoF,total,M_h" rows for external
/// plotting; the run label is the history's directory name.
void write_comparison_csv(const std::string& out_path,
                          const std::vector<std::string>& run_dirs);

/// Legacy-ASCII unstructured-grid snapshot: tetrahedra with cell data (mu,
/// control-domain flag, indicator, cell-averaged E/H/j) and point data (u, v
/// extended by zero outside the control domain).
void write_vtk(const std::string& path, const Mesh& mesh,
               const DiscreteSpaces& spaces, const OptimalitySolution& sol,
               const std::vector<double>* indicator);

/// Echo of the configuration, the estimator constants in use, the data
/// discretization choice, and the run outcome.
void write_manifest(const std::string& path, const RunConfig& config,
                    const ProblemData& data, const AfemResult& result);

}  // namespace ampere

#endif  // AMPERE_IO_HPP
