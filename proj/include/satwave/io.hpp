#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "satwave/diagnostics.hpp"
#include "satwave/eps_solver.hpp"
#include "satwave/errors.hpp"
#include "satwave/ground_state.hpp"
#include "satwave/sigma.hpp"

namespace satwave {

inline constexpr int kSchemaVersion = 1;

/// Fixed shortest-round-trip formatting so identical runs emit identical bytes.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvTable {
  int schema = kSchemaVersion;
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# satwave-csv schema=" << t.schema << " kind=" << t.kind << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << "\n";
  }
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# satwave-csv", 0) != 0)
    throw Error("'" + path + "' is not a satwave csv file");
  {
    std::istringstream meta(line);
    std::string tok;
    while (meta >> tok) {
      if (tok.rfind("schema=", 0) == 0) t.schema = std::stoi(tok.substr(7));
      if (tok.rfind("kind=", 0) == 0) t.kind = tok.substr(5);
    }
    if (t.schema != kSchemaVersion)
      throw Error("'" + path + "' has schema " + std::to_string(t.schema) + ", expected " +
                  std::to_string(kSchemaVersion));
  }
  if (!std::getline(in, line)) throw Error("'" + path + "' has no header row");
  {
    std::istringstream hdr(line);
    std::string col;
    while (std::getline(hdr, col, ',')) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    std::string cell;
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.columns.size()) throw Error("'" + path + "' has a ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

// ---- object serializers ---------------------------------------------------

inline CsvTable profile_csv(const RadialProfile& p) {
  CsvTable t;
  t.kind = "radial-profile";
  t.columns = {"r", "u"};
  t.rows.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) t.rows.push_back({p.r(i), p.values()[i]});
  return t;
}

inline nlohmann::json groundstate_json(const GroundState& gs) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "ground-state";
  if (!gs.y.empty()) j["y"] = gs.y;
  j["V_at_y"] = gs.Vy;
  j["s_at_y"] = gs.sy;
  j["dim"] = gs.profile.dim();
  j["radius"] = gs.profile.radius();
  j["samples"] = gs.profile.size() - 1;
  j["amplitude"] = gs.amplitude;
  j["energy"] = gs.energy;
  j["l2sq"] = gs.l2sq;
  j["gradsq"] = gs.gradsq;
  j["nehari_residual"] = gs.nehari_residual;
  j["pohozaev_residual"] = gs.pohozaev_residual;
  return j;
}

inline CsvTable sigma_map_csv(const std::vector<SigmaSample>& samples, int dim) {
  CsvTable t;
  t.kind = "sigma-map";
  bool with_fd = false;
  for (const auto& s : samples) with_fd = with_fd || !s.grad_fd.empty();
  for (int j = 0; j < dim; ++j) t.columns.push_back("y" + std::to_string(j + 1));
  t.columns.push_back("sigma");
  for (int j = 0; j < dim; ++j) t.columns.push_back("dsigma_dy" + std::to_string(j + 1));
  if (with_fd)
    for (int j = 0; j < dim; ++j) t.columns.push_back("dsigma_fd_dy" + std::to_string(j + 1));
  t.columns.push_back("in_omega");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : samples) {
    std::vector<double> row(s.y.begin(), s.y.end());
    row.push_back(s.sigma);
    for (int j = 0; j < dim; ++j) row.push_back(s.inside ? s.grad_formula[j] : nan);
    if (with_fd)
      for (int j = 0; j < dim; ++j)
        row.push_back(s.grad_fd.empty() ? nan : s.grad_fd[j]);
    row.push_back(s.inside ? 1.0 : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable grid_solution_csv(const GridSolution& sol) {
  CsvTable t;
  t.kind = sol.radial ? "radial-solution" : "grid-solution";
  if (sol.radial) {
    t.columns = {"r", "u"};
    for (std::size_t i = 0; i < sol.values.size(); ++i)
      t.rows.push_back({sol.spacing() * static_cast<double>(i), sol.values[i]});
  } else {
    for (int j = 0; j < sol.dim; ++j) t.columns.push_back("x" + std::to_string(j + 1));
    t.columns.push_back("u");
    for (std::size_t f = 0; f < sol.values.size(); ++f) {
      Point x = sol.node_point(f, Point(sol.dim, 0.0));
      std::vector<double> row(x.begin(), x.end());
      row.push_back(sol.values[f]);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

inline nlohmann::json solution_json(const GridSolution& sol, bool pen_active) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "eps-solution";
  j["epsilon"] = sol.epsilon;
  j["dim"] = sol.dim;
  j["radial"] = sol.radial;
  j["extent"] = sol.extent;
  j["intervals"] = sol.intervals;
  j["residual_norm"] = sol.residual_norm;
  j["energy"] = sol.energy;
  j["rescaled_energy"] = sol.rescaled_energy;
  j["max_value"] = sol.max_value();
  j["min_value"] = sol.min_value;
  j["newton_iterations"] = sol.newton_iterations;
  j["flow_iterations"] = sol.flow_iterations;
  j["used_fallback"] = sol.used_fallback;
  j["penalization_active"] = pen_active;
  return j;
}

inline nlohmann::json concentration_row_json(const ConcentrationRow& r) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "concentration-row";
  j["epsilon"] = r.epsilon;
  j["x_eps"] = r.x_eps;
  j["dist_to_center"] = r.dist_to_center;
  j["n_local_maxima"] = r.n_local_maxima;
  j["V_at_max"] = r.V_at_max;
  j["s_at_max"] = r.s_at_max;
  j["mu1"] = r.mu1;
  j["mu2"] = r.mu2;
  j["fit_r2"] = r.fit_r2;
  j["rescaled_energy"] = r.rescaled_energy;
  j["sigma_at_limit"] = r.sigma_at_limit;
  j["penalization_active"] = r.pen_active;
  return j;
}

inline CsvTable sweep_summary_csv(const ConcentrationReport& rep) {
  CsvTable t;
  t.kind = "sweep-summary";
  t.columns = {"epsilon", "dist_to_center", "V_at_max", "s_at_max", "mu2", "rescaled_energy"};
  for (const auto& r : rep.rows)
    t.rows.push_back({r.epsilon, r.dist_to_center, r.V_at_max, r.s_at_max, r.mu2, r.rescaled_energy});
  return t;
}

inline nlohmann::json necessary_condition_json(const NecessaryConditionReport& r) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "necessary-condition";
  j["z"] = r.z;
  j["grad_V"] = r.grad_V;
  j["grad_s"] = r.grad_s;
  j["qz_l2sq"] = r.qz_l2sq;
  j["integral_factor"] = r.integral_factor;
  j["identity_residual"] = r.identity_residual;
  j["colinearity_defect"] = r.colinearity_defect;
  j["opposite_orientation"] = r.opposite_orientation;
  j["scale"] = r.scale;
  return j;
}

}  // namespace satwave
