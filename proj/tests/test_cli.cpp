#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "satwave/io.hpp"
#include "satwave/presets.hpp"

using namespace satwave;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "satwave_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(SATWAVE_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(raw);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream out(p);
  out << text;
  return p.string();
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("groundstate command writes profile and metadata") {
  const fs::path dir = fresh_dir("groundstate");
  const auto r = run_cli("groundstate --preset concentric-wells --out " + (dir / "out").string(), dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);

  const CsvTable profile = read_csv((dir / "out" / "groundstate_profile.csv").string());
  CHECK(profile.kind == "radial-profile");
  CHECK(profile.columns == std::vector<std::string>{"r", "u"});
  CHECK(profile.rows.size() > 1000);

  const nlohmann::json j = read_json((dir / "out" / "groundstate.json").string());
  CHECK(j["schema"] == kSchemaVersion);
  CHECK(std::abs(j["nehari_residual"].get<double>()) < 1e-6);
  CHECK(j["pohozaev_residual"].get<double>() <
        1e-4 * (j["gradsq"].get<double>() + j["l2sq"].get<double>()));
}

TEST_CASE("groundstate --check runs the refinement oracle") {
  const fs::path dir = fresh_dir("groundstate_check");
  const auto r = run_cli("groundstate --preset concentric-wells --check --out " + (dir / "out").string(), dir);
  REQUIRE(r.code == 0);
  const nlohmann::json j = read_json((dir / "out" / "groundstate.json").string());
  REQUIRE(j.contains("refinement_check"));
  CHECK(j["refinement_check"]["energy_rel_delta"].get<double>() < 1e-6);
  CHECK(r.out.find("refinement oracle") != std::string::npos);
}

TEST_CASE("groundstate outside the existence region exits with the domain code") {
  const fs::path dir = fresh_dir("groundstate_domain");
  std::string cfg = preset_text("same-direction-gradients");
  cfg = replace_line(cfg, "groundstate.y = 0.5, 0.3", "groundstate.y = 3.0, 0.0");
  const std::string path = write_config(dir, cfg);
  const auto r = run_cli("groundstate --config " + path + " --out " + (dir / "out").string(), dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("V") != std::string::npos);  // diagnostic states the V*s condition
  CHECK(r.err.find("< 1") != std::string::npos);
}

TEST_CASE("malformed configuration exits with code 1 and a line diagnostic") {
  const fs::path dir = fresh_dir("badcfg");
  const std::string path = write_config(dir, "solver.N 2\n");
  const auto r = run_cli("groundstate --config " + path + " --out " + (dir / "out").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("missing config is a configuration error") {
  const fs::path dir = fresh_dir("nocfg");
  const auto r = run_cli("groundstate", dir);
  CHECK(r.code == 1);
}

TEST_CASE("sigma-map on constant fields is flat with zero gradient") {
  const fs::path dir = fresh_dir("sigma_flat");
  const std::string path = write_config(dir,
                                        "solver.N = 2\n"
                                        "fields.V.kind = constant\nfields.V.params = 0.5\nfields.V.floor = 0.5\n"
                                        "fields.s.kind = constant\nfields.s.params = 0.5\nfields.s.floor = 0.5\n"
                                        "sigma_map.min = -1.0, -1.0\n"
                                        "sigma_map.max = 1.0, 1.0\n"
                                        "sigma_map.npts = 3, 3\n");
  const auto r = run_cli("sigma-map --config " + path + " --out " + (dir / "out").string(), dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const CsvTable t = read_csv((dir / "out" / "sigma_map.csv").string());
  REQUIRE(t.rows.size() == 9);
  const double s0 = t.rows.front()[2];
  for (const auto& row : t.rows) {
    CHECK(row[2] == s0);   // sigma column constant
    CHECK(row[3] == 0.0);  // gradient columns zero
    CHECK(row[4] == 0.0);
    CHECK(row[5] == 1.0);  // in_omega flag
  }
}

TEST_CASE("sigma-map with the finite-difference oracle columns") {
  const fs::path dir = fresh_dir("sigma_fd");
  const std::string path = write_config(dir,
                                        "solver.N = 2\n"
                                        "fields.V.kind = quadratic-well\n"
                                        "fields.V.params = 0.5, 0.15, 0.0, 0.0\n"
                                        "fields.V.floor = 0.5\n"
                                        "fields.s.kind = gaussian-bump-sum\n"
                                        "fields.s.params = 0.85, -0.35, 0.4, 0.0, 0.0\n"
                                        "fields.s.floor = 0.5\n"
                                        "sigma_map.min = -0.5, -0.5\n"
                                        "sigma_map.max = 0.5, 0.5\n"
                                        "sigma_map.npts = 3, 3\n"
                                        "sigma_map.fd = true\n");
  const auto r = run_cli("sigma-map --config " + path + " --out " + (dir / "out").string(), dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const CsvTable t = read_csv((dir / "out" / "sigma_map.csv").string());
  REQUIRE(t.columns.size() == 8);  // y1,y2,sigma,grad x2,fd x2,in_omega
  CHECK(t.columns[5] == "dsigma_fd_dy1");
  for (const auto& row : t.rows) {
    for (int j = 0; j < 2; ++j) CHECK(std::abs(row[3 + j] - row[5 + j]) <= 1e-3 * (1.0 + std::abs(row[5 + j])));
  }
}

TEST_CASE("sigma-map entirely outside the existence region is a domain error") {
  const fs::path dir = fresh_dir("sigma_outside");
  const std::string path = write_config(dir,
                                        "solver.N = 2\n"
                                        "fields.V.kind = constant\nfields.V.params = 2.0\nfields.V.floor = 2.0\n"
                                        "fields.s.kind = constant\nfields.s.params = 1.0\nfields.s.floor = 1.0\n"
                                        "sigma_map.min = -1.0, -1.0\n"
                                        "sigma_map.max = 1.0, 1.0\n"
                                        "sigma_map.npts = 3, 3\n");
  const auto r = run_cli("sigma-map --config " + path + " --out " + (dir / "out").string(), dir);
  CHECK(r.code == 2);
}

TEST_CASE("sigma-map search writes the minimum report") {
  const fs::path dir = fresh_dir("sigma_search");
  const auto r = run_cli("sigma-map --preset same-direction-gradients --threads 2 --out " +
                             (dir / "out").string(),
                         dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = read_json((dir / "out" / "sigma_minimum.json").string());
  CHECK(j["converged"].get<bool>());
  const auto loc = j["location"].get<std::vector<double>>();
  CHECK(std::hypot(loc[0], loc[1]) < 1e-3);  // both fields dip at the origin
}

TEST_CASE("solve-eps emits a converged solution") {
  const fs::path dir = fresh_dir("solve_eps");
  std::string cfg = preset_text("constant-V-varying-s");
  cfg += "solver.eps = 0.25\n";
  const std::string path = write_config(dir, cfg);
  const auto r = run_cli("solve-eps --config " + path + " --out " + (dir / "out").string(), dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = read_json((dir / "out" / "solve_eps.json").string());
  CHECK(j["residual_norm"].get<double>() < 1e-8);
  CHECK(j["penalization_active"].get<bool>() == false);
  CHECK(fs::exists(dir / "out" / "solution_eps0.25.csv"));
}

TEST_CASE("sweep produces the summary, report lines, and solution files") {
  const fs::path dir = fresh_dir("sweep");
  const auto r = run_cli("sweep --preset concentric-wells --out " + (dir / "out").string(), dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("trends: dist ok, V ok, s ok, energy ok") != std::string::npos);

  const CsvTable t = read_csv((dir / "out" / "sweep_summary.csv").string());
  REQUIRE(t.rows.size() == 4);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][0] < t.rows[i - 1][0]);   // eps decreasing
    CHECK(t.rows[i][1] <= t.rows[i - 1][1] + 1e-12);  // |x_eps - z| nonincreasing
  }
  // one report line and one solution file per eps
  std::ifstream jsonl(dir / "out" / "sweep_report.jsonl");
  int lines = 0;
  std::string line;
  while (std::getline(jsonl, line))
    if (!line.empty()) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j["n_local_maxima"] == 1);
      ++lines;
    }
  CHECK(lines == 4);
  CHECK(fs::exists(dir / "out" / "solution_eps0.0625.csv"));
}

TEST_CASE("check-necessary discriminates the symmetric center from an offset point") {
  const fs::path dir = fresh_dir("check_necessary");
  const auto r = run_cli("check-necessary --preset same-direction-gradients --out " + (dir / "out").string(),
                         dir);
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  const nlohmann::json j = read_json((dir / "out" / "necessary_condition.json").string());
  REQUIRE(j["reports"].size() == 2);
  const auto res0 = j["reports"][0]["identity_residual"].get<std::vector<double>>();
  const auto res1 = j["reports"][1]["identity_residual"].get<std::vector<double>>();
  const double scale = j["reports"][1]["scale"].get<double>();
  CHECK(std::hypot(res0[0], res0[1]) < 1e-3 * scale);
  CHECK(std::hypot(res1[0], res1[1]) > 1e-2 * scale);
  CHECK(j["reports"][1]["opposite_orientation"].get<bool>() == false);
}

TEST_CASE("identical configuration produces byte-identical outputs") {
  const fs::path dir1 = fresh_dir("det1");
  const fs::path dir2 = fresh_dir("det2");
  REQUIRE(run_cli("sweep --preset constant-V-varying-s --out " + (dir1 / "out").string(), dir1).code == 0);
  REQUIRE(run_cli("sweep --preset constant-V-varying-s --out " + (dir2 / "out").string(), dir2).code == 0);
  for (const std::string name : {"sweep_summary.csv", "sweep_report.jsonl"}) {
    std::ifstream f1(dir1 / "out" / name), f2(dir2 / "out" / name);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
  }
}
