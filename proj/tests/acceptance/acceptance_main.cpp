// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors
//
// Acceptance gate: runs the full benchmark scenarios and the standalone
// property checks, printing one PASS/FAIL line per criterion with the
// measured value next to its threshold. Exits nonzero if anything fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ampere/afem.hpp"
#include "ampere/assembly.hpp"
#include "ampere/mesh.hpp"
#include "ampere/model.hpp"
#include "ampere/solver.hpp"
#include "ampere/spaces.hpp"

using namespace ampere;

namespace {

int g_failures = 0;

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buffer[512];
  std::vsnprintf(buffer, sizeof buffer, fmt, args);
  va_end(args);
  return buffer;
}

void report(bool pass, const std::string& line) {
  std::printf("%s  %s\n", pass ? "PASS" : "FAIL", line.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

/// Largest pair of records (one per run) whose dof counts agree within 20%,
/// ranked by the smaller dof of the pair.
struct RecordPair {
  const ConvergenceRecord* a = nullptr;
  const ConvergenceRecord* b = nullptr;
};

std::optional<RecordPair> largest_comparable(
    const std::vector<ConvergenceRecord>& a,
    const std::vector<ConvergenceRecord>& b) {
  std::optional<RecordPair> best;
  long long best_scale = -1;
  for (const auto& ra : a) {
    for (const auto& rb : b) {
      double lo = static_cast<double>(std::min(ra.dof, rb.dof));
      double hi = static_cast<double>(std::max(ra.dof, rb.dof));
      if (lo < 0.8 * hi) continue;
      long long scale = std::min(ra.dof, rb.dof);
      if (scale > best_scale) {
        best_scale = scale;
        best = RecordPair{&ra, &rb};
      }
    }
  }
  return best;
}

/// Reference bulk marking: shortest prefix of the indicators sorted by
/// decreasing value (ties by index) reaching theta times the total.
MarkedSet marking_reference(const std::vector<double>& ind, double theta) {
  std::vector<int> order(ind.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return ind[l] > ind[r]; });
  double total = std::accumulate(ind.begin(), ind.end(), 0.0);
  MarkedSet out;
  if (total <= 0.0) return out;
  const double target = theta * total - 1e-14 * total;
  double run = 0.0;
  for (int c : order) {
    out.push_back(c);
    run += ind[c];
    if (run >= target) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --------------------------------------------------------------------------
// Benchmark-scale criteria
// --------------------------------------------------------------------------

void criterion_guaranteed_bound(const std::optional<AfemResult>& run,
                                double wall) {
  if (!run) {
    report(false, "criterion 1 (guaranteed upper bound): run failed");
    return;
  }
  int bounded = 0;
  double worst = -1e300;  // max of (total - M_h) / (1 + M_h)
  for (const auto& r : run->records) {
    if (!r.majorant) continue;
    double excess = (r.total - *r.majorant) / (1.0 + *r.majorant);
    worst = std::max(worst, excess);
    if (r.majorant_valid) ++bounded;
  }
  bool pass = bounded == static_cast<int>(run->records.size()) &&
              run->majorant_always_valid && run->all_solves_converged &&
              wall <= 1800.0;
  report(pass,
         format("criterion 1 (guaranteed upper bound): %d/%zu records "
                "bounded, worst normalized excess %.3g vs 1e-08; all solves "
                "converged %d; wall %.1f s vs 1800 s",
                bounded, run->records.size(), worst,
                run->all_solves_converged ? 1 : 0, wall));
}

void criterion_efficiency(const std::optional<AfemResult>& run) {
  if (!run) {
    report(false, "criterion 2 (efficiency bracket): run failed");
    return;
  }
  double lo = 1e300, hi = -1e300;
  bool present = true;
  for (const auto& r : run->records) {
    if (!r.efficiency) {
      present = false;
      continue;
    }
    lo = std::min(lo, *r.efficiency);
    hi = std::max(hi, *r.efficiency);
  }
  bool pass = present && lo >= 1.0 && hi <= 40.0;
  report(pass,
         format("criterion 2 (efficiency bracket): min/max efficiency "
                "%.2f/%.2f vs [1, 40]",
                lo, hi));
}

void criterion_error_reduction(const std::optional<AfemResult>& run) {
  if (!run || run->records.empty()) {
    report(false, "criterion 3 (error reduction): run failed");
    return;
  }
  const auto& first = run->records.front();
  const ConvergenceRecord* target = nullptr;
  for (const auto& r : run->records) {
    if (r.dof >= 90000) target = &r;
  }
  if (!target) {
    report(false, format("criterion 3 (error reduction): no record reached "
                         "90000 unknowns (last %lld)",
                         run->records.back().dof));
    return;
  }
  // The tabulated reference history starts at 4940 unknowns with a reduction
  // factor slightly above 3; coarser starts get the relaxed target 2.5.
  const double threshold = first.dof < 4940 ? 2.5 : 3.0;
  const double factor = first.total / target->total;
  report(factor >= threshold,
         format("criterion 3 (error reduction): factor %.2f (total %.4f at "
                "%lld dof -> %.4f at %lld dof) vs >= %.1f",
                factor, first.total, first.dof, target->total, target->dof,
                threshold));
}

void criterion_adaptive_beats_uniform(const std::optional<AfemResult>& adaptive,
                                      const std::optional<AfemResult>& uniform) {
  if (!adaptive || !uniform) {
    report(false, "criterion 4 (adaptive vs uniform): run failed");
    return;
  }
  auto pair = largest_comparable(adaptive->records, uniform->records);
  if (!pair) {
    report(false, "criterion 4 (adaptive vs uniform): no dof pair within 20%");
    return;
  }
  bool pass = pair->a->total <= pair->b->total;
  report(pass,
         format("criterion 4 (adaptive vs uniform): adaptive total %.4f at "
                "%lld dof vs uniform total %.4f at %lld dof (dofs within 20%%)",
                pair->a->total, pair->a->dof, pair->b->total, pair->b->dof));
}

void criterion_sandwich(const std::optional<AfemResult>& run) {
  if (!run) {
    report(false, "criterion 5 (two-sided sandwich): run failed");
    return;
  }
  double worst_lower = -1e300;  // (minorant - total^2) / (1 + total^2)
  double worst_upper = -1e300;  // (total^2 - M_h^2) / (1 + M_h^2)
  bool present = true;
  for (const auto& r : run->records) {
    if (!r.minorant || !r.majorant) {
      present = false;
      continue;
    }
    double t2 = r.total * r.total;
    double m2 = *r.majorant * *r.majorant;
    worst_lower = std::max(worst_lower, (*r.minorant - t2) / (1.0 + t2));
    worst_upper = std::max(worst_upper, (t2 - m2) / (1.0 + m2));
  }
  bool pass = present && worst_lower <= 1e-8 && worst_upper <= 1e-8;
  report(pass,
         format("criterion 5 (two-sided sandwich): worst normalized slack "
                "lower %.3g, upper %.3g vs 1e-08",
                worst_lower, worst_upper));
}

void criterion_exact_parity(const std::optional<AfemResult>& adaptive,
                            const std::optional<AfemResult>& exact) {
  if (!adaptive || !exact) {
    report(false, "criterion 6 (exact-indicator parity): run failed");
    return;
  }
  auto pair = largest_comparable(exact->records, adaptive->records);
  if (!pair) {
    report(false,
           "criterion 6 (exact-indicator parity): no dof pair within 20%");
    return;
  }
  double ratio = pair->a->total / pair->b->total;
  report(ratio <= 1.5,
         format("criterion 6 (exact-indicator parity): exact total %.4f at "
                "%lld dof is %.2fx the bound-driven total %.4f at %lld dof "
                "vs <= 1.5x",
                pair->a->total, pair->a->dof, ratio, pair->b->total,
                pair->b->dof));
}

// --------------------------------------------------------------------------
// Standalone property checks (criterion 7)
// --------------------------------------------------------------------------

void property_curl_of_gradients(const Mesh& mesh, const DiscreteSpaces& spaces) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  FeField p{SpaceKind::NodalZeroTrace,
            std::vector<double>(static_cast<std::size_t>(spaces.nodal.n_free))};
  for (auto& c : p.coeff) c = unit(rng);
  FeField grad = gradient_edge_coefficients(mesh, spaces.nodal, spaces.edge, p);
  auto entities = expand_to_entities(spaces.edge, grad);
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    worst = std::max(worst, eval_edge_curl(mesh, c, entities).norm());
  }
  report(worst <= 1e-12,
         format("criterion 7a (curl of discrete gradients): max |rot grad p| "
                "= %.3g vs 1e-12",
                worst));
}

void property_refinement_integrity(const ProblemData& data) {
  Mesh mesh = build_structured_cube(data.domain, 3, data.control, data.mu);
  const double volume = 3.375;
  bool conforming = true;
  bool nested = true;
  double worst = 0.0;
  for (int round = 0; round < 3; ++round) {
    MarkedSet marked;
    for (int c = round; c < mesh.n_cells(); c += 7) marked.push_back(c);
    Mesh child = bisect(mesh, marked);
    conforming = conforming && check_conforming(child);
    try {
      audit_nestedness(mesh, child);
    } catch (const std::exception&) {
      nested = false;
    }
    worst = std::max(worst, std::abs(child.total_volume() - volume));
    mesh = std::move(child);
  }
  report(conforming && nested && worst <= 1e-12,
         format("criterion 7b (refinement integrity): conforming %d, nested "
                "%d, max volume drift %.3g vs 1e-12",
                conforming ? 1 : 0, nested ? 1 : 0, worst));
}

void property_marking_oracle() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double thetas[] = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(unit(rng) * 39.0);
    std::vector<double> ind(static_cast<std::size_t>(n));
    for (auto& v : ind) {
      double draw = unit(rng);
      if (draw < 0.15) {
        v = 0.0;  // exercise zero indicators
      } else if (draw > 0.85) {
        v = 0.875;  // exercise exact ties
      } else {
        v = draw;
      }
    }
    double theta = thetas[trial % 6];
    MarkedSet got = dorfler_mark(ind, theta);
    std::sort(got.begin(), got.end());
    if (got != marking_reference(ind, theta)) ++mismatches;
  }
  report(mismatches == 0,
         format("criterion 7c (bulk-marking minimal prefix): %d/200 "
                "mismatches vs 0",
                mismatches));
}

void property_kkt_symmetry(const Mesh& mesh, const DiscreteSpaces& spaces,
                           const ProblemData& data) {
  KktSystem system = assemble_kkt(mesh, spaces, data);
  double asym = system.matrix.symmetry_error();
  report(asym <= 1e-10,
         format("criterion 7d (saddle-point symmetry): max |K - K^T| entry "
                "= %.3g vs 1e-10",
                asym));
}

struct GaugeProbe {
  OptimalitySolution pinned_first;
  OptimalitySolution pinned_other;
};

GaugeProbe solve_two_gauges(const Mesh& mesh, const DiscreteSpaces& spaces,
                            const ProblemData& data) {
  GaugeProbe probe;
  for (int which = 0; which < 2; ++which) {
    KktSystem system = assemble_kkt(mesh, spaces, data);
    gauge_fix_v(system, which == 0 ? 0 : 5);
    auto sol = solve_optimality(mesh, spaces, data, system, 1e-11, 50000);
    (which == 0 ? probe.pinned_first : probe.pinned_other) = std::move(sol);
  }
  return probe;
}

void property_gauge_invariance(const DiscreteSpaces& spaces,
                               const GaugeProbe& probe) {
  const Mesh& sub = spaces.sub.mesh;
  double scale = 0.0;
  double drift = 0.0;
  for (const auto& e : sub.edges) {
    double d0 = probe.pinned_first.v[e[1]] - probe.pinned_first.v[e[0]];
    double d1 = probe.pinned_other.v[e[1]] - probe.pinned_other.v[e[0]];
    scale = std::max(scale, std::abs(d0));
    drift = std::max(drift, std::abs(d0 - d1));
  }
  double measured = drift / std::max(1.0, scale);
  report(measured <= 1e-9,
         format("criterion 7e (gauge invariance of grad v): relative drift "
                "between pin choices = %.3g vs 1e-09",
                measured));
}

void property_vanishing_multiplier(const GaugeProbe& probe) {
  double worst = 0.0;
  for (double ui : probe.pinned_first.u) worst = std::max(worst, std::abs(ui));
  report(worst <= 1e-8,
         format("criterion 7f (vanishing divergence multiplier): max |u| "
                "= %.3g vs 1e-08",
                worst));
}

void property_data_identities() {
  IdentityResiduals res = verify_benchmark_identities();
  report(res.max() <= 1e-6,
         format("criterion 7g (benchmark data identities): max finite-"
                "difference residual = %.3g vs 1e-06",
                res.max()));
}

void property_interpolation_reproduction(const Mesh& mesh,
                                         const DiscreteSpaces& spaces) {
  const std::array<std::array<double, 4>, 5> barys = {{
      {0.25, 0.25, 0.25, 0.25},
      {0.1, 0.2, 0.3, 0.4},
      {0.4, 0.3, 0.2, 0.1},
      {0.05, 0.45, 0.15, 0.35},
      {0.6, 0.1, 0.1, 0.2},
  }};

  // Edge space: exact on a + b x x.
  const Vec3 a(0.3, -0.2, 0.5);
  const Vec3 b(0.1, 0.4, -0.3);
  auto edge_target = [&](const Vec3& x) -> Vec3 { return a + b.cross(x); };
  FeField ef = interpolate_edge(mesh, spaces.edge_free, edge_target);
  auto edge_entities = expand_to_entities(spaces.edge_free, ef);
  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (const auto& bary : barys) {
      Vec3 x = mesh.point(c, bary);
      worst = std::max(
          worst, (eval_edge_field(mesh, c, bary, edge_entities) - edge_target(x))
                     .norm());
    }
  }

  // Face space: exact on a + beta x. Entity fluxes come from the midpoint
  // rule, which is exact for affine integrands.
  const Mesh& sub = spaces.sub.mesh;
  const Vec3 c0(0.2, -0.1, 0.4);
  const double beta = 0.37;
  auto face_target = [&](const Vec3& x) -> Vec3 { return c0 + beta * x; };
  std::vector<double> face_entities(static_cast<std::size_t>(sub.n_faces()));
  for (int f = 0; f < sub.n_faces(); ++f) {
    const auto& tri = sub.faces[f];
    const Vec3& p = sub.vertices[tri[0]];
    const Vec3& q = sub.vertices[tri[1]];
    const Vec3& r = sub.vertices[tri[2]];
    Vec3 normal = 0.5 * (q - p).cross(r - p);
    Vec3 centroid = (p + q + r) / 3.0;
    face_entities[static_cast<std::size_t>(f)] = face_target(centroid).dot(normal);
  }
  for (int c = 0; c < sub.n_cells(); ++c) {
    for (const auto& bary : barys) {
      Vec3 x = sub.point(c, bary);
      worst = std::max(
          worst,
          (eval_rt_field(sub, spaces.omega_face, c, bary, face_entities) -
           face_target(x))
              .norm());
    }
  }
  report(worst <= 1e-12,
         format("criterion 7h (interpolation reproduction): max pointwise "
                "error over edge/face fields = %.3g vs 1e-12",
                worst));
}

}  // namespace

int main() {
  std::printf("acceptance gate: benchmark runs + property checks\n");
  std::fflush(stdout);

  ProblemData data = benchmark_problem(1.0);

  // Shared benchmark-scale runs.
  std::optional<AfemResult> adaptive, uniform_run, exact_run;
  double wall_adaptive = 0.0;

  {
    AfemConfig config;
    config.mode = AfemMode::AdaptiveMajorant;
    config.initial_n = 6;
    config.theta = 0.5;
    config.kappa = 1.0;
    config.max_dof = 150000;
    config.max_iterations = 40;
    config.compute_minorant = true;
    auto start = std::chrono::steady_clock::now();
    try {
      adaptive = run_afem(config, data);
    } catch (const std::exception& err) {
      std::fprintf(stderr, "bound-driven run failed: %s\n", err.what());
    }
    wall_adaptive = seconds_since(start);
    if (adaptive) {
      std::printf("  bound-driven run: %zu records, final dof %lld, %.1f s\n",
                  adaptive->records.size(), adaptive->records.back().dof,
                  wall_adaptive);
      std::fflush(stdout);
    }
  }

  {
    AfemConfig config;
    config.mode = AfemMode::Uniform;
    config.initial_n = 6;
    config.kappa = 1.0;
    config.max_dof = 100000;  // three global steps land just past this budget
    config.max_iterations = 10;
    try {
      uniform_run = run_afem(config, data);
    } catch (const std::exception& err) {
      std::fprintf(stderr, "uniform run failed: %s\n", err.what());
    }
    if (uniform_run) {
      std::printf("  uniform run: %zu records, final dof %lld\n",
                  uniform_run->records.size(),
                  uniform_run->records.back().dof);
      std::fflush(stdout);
    }
  }

  {
    AfemConfig config;
    config.mode = AfemMode::AdaptiveExact;
    config.initial_n = 6;
    config.theta = 0.5;
    config.kappa = 1.0;
    config.max_dof = 150000;
    config.max_iterations = 40;
    try {
      exact_run = run_afem(config, data);
    } catch (const std::exception& err) {
      std::fprintf(stderr, "exact-indicator run failed: %s\n", err.what());
    }
    if (exact_run) {
      std::printf("  exact-indicator run: %zu records, final dof %lld\n",
                  exact_run->records.size(), exact_run->records.back().dof);
      std::fflush(stdout);
    }
  }

  criterion_guaranteed_bound(adaptive, wall_adaptive);
  criterion_efficiency(adaptive);
  criterion_error_reduction(adaptive);
  criterion_adaptive_beats_uniform(adaptive, uniform_run);
  criterion_sandwich(adaptive);
  criterion_exact_parity(adaptive, exact_run);

  // Property suite: jointly timed, each check standalone.
  auto property_start = std::chrono::steady_clock::now();
  Mesh mesh = build_structured_cube(data.domain, 3, data.control, data.mu);
  DiscreteSpaces spaces = build_spaces(mesh);
  GaugeProbe probe = solve_two_gauges(mesh, spaces, data);

  property_curl_of_gradients(mesh, spaces);
  property_refinement_integrity(data);
  property_marking_oracle();
  property_kkt_symmetry(mesh, spaces, data);
  property_gauge_invariance(spaces, probe);
  property_vanishing_multiplier(probe);
  property_data_identities();
  property_interpolation_reproduction(mesh, spaces);

  double property_wall = seconds_since(property_start);
  report(property_wall <= 120.0,
         format("criterion 7 (property suite wall time): %.1f s vs 120 s",
                property_wall));

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
