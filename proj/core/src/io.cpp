// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The ampere authors

#include "ampere/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ampere/assembly.hpp"
#include "ampere/estimator.hpp"
#include "ampere/solver.hpp"

namespace ampere {

namespace {

std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_error(const std::string& path, int line,
                               const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, const std::string& path,
                    int line) {
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty())
    config_error(path, line, "expected a number, got '" + text + "'");
  return value;
}

long parse_long(const std::string& text, const std::string& path, int line) {
  char* end = nullptr;
  long value = std::strtol(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || text.empty())
    config_error(path, line, "expected an integer, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, const std::string& path, int line) {
  if (text == "1" || text == "true" || text == "on") return true;
  if (text == "0" || text == "false" || text == "off") return false;
  config_error(path, line, "expected a boolean (0/1/true/false), got '" + text + "'");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

}  // namespace

AfemMode parse_mode(const std::string& text) {
  if (text == "adaptive" || text == "adaptive-majorant")
    return AfemMode::AdaptiveMajorant;
  if (text == "adaptive-exact") return AfemMode::AdaptiveExact;
  if (text == "uniform") return AfemMode::Uniform;
  throw std::invalid_argument(
      "unknown mode '" + text +
      "' (expected adaptive, adaptive-majorant, adaptive-exact, or uniform)");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  RunConfig config;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      config_error(path, line_no, "expected key=value, got '" + trim(raw) + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "mode") {
      try {
        config.afem.mode = parse_mode(value);
      } catch (const std::invalid_argument& err) {
        config_error(path, line_no, err.what());
      }
    } else if (key == "n") {
      config.afem.initial_n = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "theta") {
      config.afem.theta = parse_double(value, path, line_no);
    } else if (key == "kappa") {
      config.afem.kappa = parse_double(value, path, line_no);
    } else if (key == "max_dof") {
      config.afem.max_dof = parse_long(value, path, line_no);
    } else if (key == "max_iters") {
      config.afem.max_iterations = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "tol_kkt") {
      config.afem.tol_kkt = parse_double(value, path, line_no);
    } else if (key == "tol_aux") {
      config.afem.tol_aux = parse_double(value, path, line_no);
    } else if (key == "out") {
      config.afem.out_dir = value;
    } else if (key == "minorant") {
      config.afem.compute_minorant = parse_bool(value, path, line_no);
    } else if (key == "hd_variant") {
      config.afem.hd_conforming_variant = parse_bool(value, path, line_no);
    } else if (key == "vtk") {
      config.write_vtk = parse_bool(value, path, line_no);
    } else if (key == "deterministic") {
      config.deterministic = parse_bool(value, path, line_no);
    } else {
      config_error(path, line_no, "unknown key '" + key + "'");
    }
  }
  try {
    config.afem.validate();
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(path + ": " + err.what());
  }
  return config;
}

void write_history_header(std::ostream& out) {
  out << "DoF,err_H,err_j,total,M_h\n";
}

void write_history_row(std::ostream& out, const ConvergenceRecord& record) {
  out << record.dof << ',' << fmt17(record.err_H) << ',' << fmt17(record.err_j)
      << ',' << fmt17(record.total) << ',';
  if (record.majorant) out << fmt17(*record.majorant);
  out << '\n';
}

void write_history_csv(const std::string& path,
                       const std::vector<ConvergenceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_history_header(out);
  for (const auto& record : records) write_history_row(out, record);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ConvergenceRecord> read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open history file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "DoF,err_H,err_j,total,M_h")
    throw std::runtime_error(path + ": missing history header");
  std::vector<ConvergenceRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 5)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 5 fields, got " +
                               std::to_string(fields.size()));
    ConvergenceRecord record;
    record.iteration = static_cast<int>(records.size());
    record.dof = parse_long(fields[0], path, line_no);
    record.err_H = parse_double(fields[1], path, line_no);
    record.err_j = parse_double(fields[2], path, line_no);
    record.total = parse_double(fields[3], path, line_no);
    if (!fields[4].empty())
      record.majorant = parse_double(fields[4], path, line_no);
    records.push_back(record);
  }
  return records;
}

void write_comparison_csv(const std::string& out_path,
                          const std::vector<std::string>& run_dirs) {
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot open '" + out_path + "' for writing");
  out << "run,DoF,total,M_h\n";
  for (const auto& dir : run_dirs) {
    namespace fs = std::filesystem;
    fs::path p = fs::path(dir).lexically_normal();
    std::string label = p.filename().string();
    if (label.empty() || label == ".") label = dir;
    auto records = read_history_csv((fs::path(dir) / "history.csv").string());
    for (const auto& record : records) {
      out << label << ',' << record.dof << ',' << fmt17(record.total) << ',';
      if (record.majorant) out << fmt17(*record.majorant);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + out_path + "'");
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const DiscreteSpaces& spaces, const OptimalitySolution& sol,
               const std::vector<double>* indicator) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const int nv = mesh.n_vertices();
  const int nc = mesh.n_cells();
  out << "# vtk DataFile Version 3.0\n";
  out << "optimal control state\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (int v = 0; v < nv; ++v) {
    const Vec3& x = mesh.vertices[v];
    out << fmt17(x[0]) << ' ' << fmt17(x[1]) << ' ' << fmt17(x[2]) << '\n';
  }
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (int c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells[c].v;
    out << "4 " << cell[0] << ' ' << cell[1] << ' ' << cell[2] << ' '
        << cell[3] << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) out << "10\n";

  const std::array<double, 4> centroid = {0.25, 0.25, 0.25, 0.25};
  std::vector<int> cell_to_sub(nc, -1);
  for (int sc = 0; sc < spaces.sub.mesh.n_cells(); ++sc)
    cell_to_sub[spaces.sub.cell_parent[sc]] = sc;
  out << "CELL_DATA " << nc << '\n';
  out << "SCALARS mu double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) out << fmt17(mesh.cells[c].mu) << '\n';
  out << "SCALARS in_omega int 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) out << (mesh.cells[c].subdomain ? 1 : 0) << '\n';
  out << "SCALARS indicator double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c)
    out << fmt17(indicator ? (*indicator)[c] : 0.0) << '\n';
  out << "VECTORS E double\n";
  for (int c = 0; c < nc; ++c) {
    Vec3 e = eval_edge_field(mesh, c, centroid, sol.E);
    out << fmt17(e[0]) << ' ' << fmt17(e[1]) << ' ' << fmt17(e[2]) << '\n';
  }
  out << "VECTORS H double\n";
  for (int c = 0; c < nc; ++c) {
    Vec3 h = eval_magnetic(mesh, sol.H, c, centroid);
    out << fmt17(h[0]) << ' ' << fmt17(h[1]) << ' ' << fmt17(h[2]) << '\n';
  }
  out << "VECTORS j double\n";
  for (int c = 0; c < nc; ++c) {
    int sc = cell_to_sub[c];
    Vec3 j = sc >= 0 ? Vec3(eval_edge_field(spaces.sub.mesh, sc, centroid, sol.j))
                     : Vec3(Vec3::Zero());
    out << fmt17(j[0]) << ' ' << fmt17(j[1]) << ' ' << fmt17(j[2]) << '\n';
  }

  out << "POINT_DATA " << nv << '\n';
  out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) out << fmt17(sol.u[v]) << '\n';
  // The adjoint multiplier lives on the control submesh; extend by zero.
  std::vector<double> v_lifted(nv, 0.0);
  for (int sv = 0; sv < spaces.sub.mesh.n_vertices(); ++sv)
    v_lifted[spaces.sub.vertex_parent[sv]] = sol.v[sv];
  out << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) out << fmt17(v_lifted[v]) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_manifest(const std::string& path, const RunConfig& config,
                    const ProblemData& data, const AfemResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const AfemConfig& a = config.afem;
  out << "mode=" << to_string(a.mode) << '\n';
  out << "n=" << a.initial_n << '\n';
  out << "theta=" << fmt17(a.theta) << '\n';
  out << "kappa=" << fmt17(a.kappa) << '\n';
  out << "max_dof=" << a.max_dof << '\n';
  out << "max_iters=" << a.max_iterations << '\n';
  out << "tol_kkt=" << fmt17(a.tol_kkt) << '\n';
  out << "tol_aux=" << fmt17(a.tol_aux) << '\n';
  out << "minorant=" << (a.compute_minorant ? 1 : 0) << '\n';
  out << "hd_variant=" << (a.hd_conforming_variant ? 1 : 0) << '\n';
  out << "vtk=" << (config.write_vtk ? 1 : 0) << '\n';
  out << "deterministic=" << (config.deterministic ? 1 : 0) << '\n';
  {
    double mu_max = 1.0;
    for (const Cell& cell : result.final_mesh.cells)
      mu_max = std::max(mu_max, cell.mu);
    auto constants =
        EstimatorConstants::for_boxes(data.domain, data.control, mu_max);
    out << "c_maxwell=" << fmt17(constants.c_maxwell) << '\n';
    out << "c_poincare_omega=" << fmt17(constants.c_poincare_omega) << '\n';
    out << "c_poincare_domain=" << fmt17(constants.c_poincare_domain) << '\n';
    out << "d_domain=" << fmt17(constants.d_domain) << '\n';
    out << "d_omega=" << fmt17(constants.d_omega) << '\n';
  }
  out << "data_discretization=edge-interpolated coefficients rebuilt on every "
         "mesh (target current on the control submesh, target field on the "
         "full mesh)\n";
  out << "iterations=" << result.records.size() << '\n';
  if (!result.records.empty()) {
    const auto& last = result.records.back();
    out << "final_dof=" << last.dof << '\n';
    out << "final_total=" << fmt17(last.total) << '\n';
    if (last.majorant) out << "final_majorant=" << fmt17(*last.majorant) << '\n';
  }
  out << "all_solves_converged=" << (result.all_solves_converged ? 1 : 0)
      << '\n';
  out << "majorant_always_valid=" << (result.majorant_always_valid ? 1 : 0)
      << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ampere
