// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors
//
// Micro-benchmarks of the hot paths of one adaptive iteration: system
// assembly, sparse matrix-vector products, the two Krylov kernels, mesh
// refinement, and the guaranteed-bound evaluation.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "ampere/afem.hpp"
#include "ampere/assembly.hpp"
#include "ampere/estimator.hpp"
#include "ampere/mesh.hpp"
#include "ampere/model.hpp"
#include "ampere/solver.hpp"
#include "ampere/spaces.hpp"

namespace {

using namespace ampere;

const ProblemData& problem() {
  static ProblemData data = benchmark_problem(1.0);
  return data;
}

struct MeshPack {
  Mesh mesh;
  DiscreteSpaces spaces;
};

const MeshPack& pack(int n) {
  static std::vector<std::pair<int, MeshPack>> cache;
  for (const auto& entry : cache) {
    if (entry.first == n) return entry.second;
  }
  const ProblemData& data = problem();
  Mesh mesh = build_structured_cube(data.domain, n, data.control, data.mu);
  DiscreteSpaces spaces = build_spaces(mesh);
  cache.emplace_back(n, MeshPack{std::move(mesh), std::move(spaces)});
  return cache.back().second;
}

const KktSystem& fixed_system(int n) {
  static std::vector<std::pair<int, KktSystem>> cache;
  for (const auto& entry : cache) {
    if (entry.first == n) return entry.second;
  }
  const MeshPack& p = pack(n);
  KktSystem system = assemble_kkt(p.mesh, p.spaces, problem());
  gauge_fix_v(system);
  cache.emplace_back(n, std::move(system));
  return cache.back().second;
}

void BM_AssembleKkt(benchmark::State& state) {
  const MeshPack& p = pack(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    KktSystem system = assemble_kkt(p.mesh, p.spaces, problem());
    benchmark::DoNotOptimize(system.matrix.val.data());
  }
  state.SetItemsProcessed(state.iterations() * p.mesh.n_cells());
}
BENCHMARK(BM_AssembleKkt)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_KktMultiply(benchmark::State& state) {
  const KktSystem& system = fixed_system(static_cast<int>(state.range(0)));
  std::vector<double> x(static_cast<std::size_t>(system.size()), 1.0);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    system.matrix.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(
      static_cast<long long>(state.iterations() * system.matrix.nnz()));
}
BENCHMARK(BM_KktMultiply)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_MinresIterations(benchmark::State& state) {
  // Fixed 50-iteration budget, unreachable tolerance: measures the cost of
  // one preconditioned Krylov step on the indefinite system.
  const KktSystem& system = fixed_system(6);
  for (auto _ : state) {
    std::vector<double> x(static_cast<std::size_t>(system.size()), 0.0);
    SolveReport report = minres(system.matrix, system.rhs, x, 0.0, 50,
                                system.precond);
    benchmark::DoNotOptimize(report.residual);
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_MinresIterations)->Unit(benchmark::kMillisecond);

void BM_CgIterations(benchmark::State& state) {
  // Same idea for the SPD kernel used by the auxiliary minimizations.
  const MeshPack& p = pack(6);
  SparseMatrix A = assemble_nodal_stiffness(p.mesh, p.spaces.nodal, 1.0);
  std::vector<double> b(static_cast<std::size_t>(A.rows), 1.0);
  std::vector<double> diag = A.diagonal();
  for (auto _ : state) {
    std::vector<double> x(b.size(), 0.0);
    SolveReport report = cg(A, b, x, 0.0, 50, diag);
    benchmark::DoNotOptimize(report.residual);
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_CgIterations)->Unit(benchmark::kMillisecond);

void BM_BisectAllCells(benchmark::State& state) {
  const MeshPack& p = pack(static_cast<int>(state.range(0)));
  MarkedSet all(static_cast<std::size_t>(p.mesh.n_cells()));
  std::iota(all.begin(), all.end(), 0);
  for (auto _ : state) {
    Mesh child = bisect(p.mesh, all);
    benchmark::DoNotOptimize(child.n_cells());
  }
  state.SetItemsProcessed(state.iterations() * p.mesh.n_cells());
}
BENCHMARK(BM_BisectAllCells)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EstimateMajorant(benchmark::State& state) {
  // Full guaranteed-bound evaluation (both auxiliary solves) on the coarse
  // benchmark mesh.
  const MeshPack& p = pack(3);
  KktSystem system = assemble_kkt(p.mesh, p.spaces, problem());
  gauge_fix_v(system);
  OptimalitySolution sol =
      solve_optimality(p.mesh, p.spaces, problem(), system, 1e-10, 50000);
  for (auto _ : state) {
    EstimatorReport report = estimate_majorant(p.mesh, p.spaces, sol, problem());
    benchmark::DoNotOptimize(report.majorant);
  }
}
BENCHMARK(BM_EstimateMajorant)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
