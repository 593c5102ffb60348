// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/cli.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "ampere/afem.hpp"
#include "ampere/io.hpp"
#include "ampere/model.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ampere {

namespace {

int execute_run(const RunConfig& config) {
  if (config.deterministic) {
    Eigen::setNbThreads(1);
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
  }
  namespace fs = std::filesystem;
  fs::create_directories(config.afem.out_dir);
  const std::string history_path =
      (fs::path(config.afem.out_dir) / "history.csv").string();
  std::ofstream history(history_path);
  if (!history) {
    std::fprintf(stderr, "error: cannot open '%s' for writing\n",
                 history_path.c_str());
    return 1;
  }
  write_history_header(history);
  history.flush();

  ProblemData data = benchmark_problem(config.afem.kappa);
  auto callback = [&](const IterationContext& ctx) {
    write_history_row(history, ctx.record);
    history.flush();  // keep a partial history if a later solve fails
    if (config.write_vtk) {
      char name[32];
      std::snprintf(name, sizeof(name), "iter%03d.vtk", ctx.iteration);
      write_vtk((fs::path(config.afem.out_dir) / name).string(), ctx.mesh,
                ctx.spaces, ctx.solution, ctx.indicator);
    }
    std::printf("iter %-3d cells %-8d dof %-8lld total %-14.8g",
                ctx.record.iteration, ctx.record.n_cells, ctx.record.dof,
                ctx.record.total);
    if (ctx.record.majorant)
      std::printf(" M_h %-14.8g eff %-8.4g", *ctx.record.majorant,
                  ctx.record.efficiency.value_or(0.0));
    if (ctx.record.minorant)
      std::printf(" minorant %-12.6g", *ctx.record.minorant);
    if (ctx.indicator) std::printf(" marked %d", ctx.record.marked_cells);
    std::printf("\n");
    std::fflush(stdout);
    if (!ctx.record.kkt_converged)
      std::fprintf(stderr,
                   "warning: coupled solve did not reach tolerance "
                   "(iteration %d, residual %.3e)\n",
                   ctx.record.iteration, ctx.record.kkt_residual);
    if (!ctx.record.majorant_valid)
      std::fprintf(stderr,
                   "warning: guaranteed bound violated at iteration %d\n",
                   ctx.record.iteration);
  };

  AfemResult result = run_afem(config.afem, data, callback);
  write_manifest((fs::path(config.afem.out_dir) / "manifest.txt").string(),
                 config, data, result);
  if (!result.all_solves_converged) {
    std::fprintf(stderr, "error: at least one linear solve failed\n");
    return 2;
  }
  if (!result.majorant_always_valid) {
    std::fprintf(stderr, "error: the guaranteed bound failed to hold\n");
    return 3;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Adaptive edge-element solver for an optimal control problem of "
      "magneto-static type with guaranteed error bounds"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "solve the benchmark problem and write run artifacts");
  std::string mode_text = "adaptive-majorant";
  int n = 0;
  double theta = 0.0, kappa = 0.0, tol_kkt = 0.0, tol_aux = 0.0;
  long long max_dof = 0;
  int max_iters = 0;
  std::string out_dir, config_path;
  bool deterministic = false, minorant = false, hd_variant = false,
       no_vtk = false;
  auto* opt_mode =
      run->add_option("--mode", mode_text,
                      "refinement driver: adaptive | adaptive-majorant | "
                      "adaptive-exact | uniform")
          ->check(CLI::IsMember(
              {"adaptive", "adaptive-majorant", "adaptive-exact", "uniform"}));
  auto* opt_n = run->add_option("--n", n, "cubes per axis of the initial grid");
  auto* opt_theta =
      run->add_option("--theta", theta, "bulk-marking fraction in (0,1)");
  auto* opt_kappa = run->add_option("--kappa", kappa, "control cost weight");
  auto* opt_max_dof =
      run->add_option("--max-dof", max_dof, "stop once the dof count reaches this");
  auto* opt_max_iters = run->add_option("--max-iters,--steps", max_iters,
                                        "maximum number of mesh levels");
  auto* opt_tol_kkt =
      run->add_option("--tol-kkt", tol_kkt, "relative tolerance of the coupled solve");
  auto* opt_tol_aux = run->add_option("--tol-aux", tol_aux,
                                      "relative tolerance of the bound-optimization solves");
  auto* opt_out = run->add_option("--out", out_dir, "output directory");
  run->add_option("--config", config_path,
                  "key=value configuration file; explicit flags override it");
  run->add_flag("--deterministic", deterministic,
                "single-threaded, reproducible runs");
  auto* opt_minorant =
      run->add_flag("--minorant", minorant, "also evaluate the lower bound");
  auto* opt_hd_variant = run->add_flag(
      "--hd-variant", hd_variant,
      "use the curl-conforming target-field variant of the first bound term");
  auto* opt_no_vtk =
      run->add_flag("--no-vtk", no_vtk, "skip the VTK snapshots");

  auto* compare = app.add_subcommand(
      "compare", "merge run histories into one CSV for plotting");
  std::vector<std::string> run_dirs;
  std::string compare_out;
  compare->add_option("--runs", run_dirs, "run output directories")
      ->required()
      ->expected(1, -1);
  compare->add_option("--out", compare_out, "path of the merged CSV")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      RunConfig config;
      if (!config_path.empty()) config = load_config(config_path);
      if (opt_mode->count()) config.afem.mode = parse_mode(mode_text);
      if (opt_n->count()) config.afem.initial_n = n;
      if (opt_theta->count()) config.afem.theta = theta;
      if (opt_kappa->count()) config.afem.kappa = kappa;
      if (opt_max_dof->count()) config.afem.max_dof = max_dof;
      if (opt_max_iters->count()) config.afem.max_iterations = max_iters;
      if (opt_tol_kkt->count()) config.afem.tol_kkt = tol_kkt;
      if (opt_tol_aux->count()) config.afem.tol_aux = tol_aux;
      if (opt_out->count()) config.afem.out_dir = out_dir;
      if (opt_minorant->count()) config.afem.compute_minorant = minorant;
      if (opt_hd_variant->count())
        config.afem.hd_conforming_variant = hd_variant;
      if (opt_no_vtk->count()) config.write_vtk = !no_vtk;
      if (deterministic) config.deterministic = true;
      config.afem.validate();
      return execute_run(config);
    }
    write_comparison_csv(compare_out, run_dirs);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace ampere
