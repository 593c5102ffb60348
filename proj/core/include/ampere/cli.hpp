// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#ifndef AMPERE_CLI_HPP
#define AMPERE_CLI_HPP

namespace ampere {

/// Command-line entry point. Subcommands:
///   run      solve the benchmark control problem adaptively, writing
///            history.csv, manifest.txt, and per-iteration VTK snapshots
///   compare  merge run histories into one plotting CSV
/// Returns 0 only if every linear solve converged and the guaranteed bound
/// held on every iteration that computed one; bad flags or runtime failures
/// return nonzero after a diagnostic on stderr.
int run_cli(int argc, char** argv);

}  // namespace ampere

#endif  // AMPERE_CLI_HPP
