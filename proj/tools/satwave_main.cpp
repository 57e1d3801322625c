// Command-line front end: parses run configurations, dispatches the
// experiment subcommands, and serializes results.
//
// Exit codes: 0 success, 1 configuration error, 2 domain error (e.g. the
// requested point admits no ground state), 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satwave/satwave.hpp"

namespace fs = std::filesystem;
using namespace satwave;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  bool check = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "run configuration file");
  cmd->add_option("--preset", a.preset,
                  "built-in preset: concentric-wells, constant-V-varying-s, same-direction-gradients");
  cmd->add_option("--out", a.out_dir, "output directory (created if missing)");
  cmd->add_flag("--check", a.check, "additionally run the refinement oracle and report deltas");
  cmd->add_option("--threads", a.threads, "worker threads for sigma-map grid evaluation");
}

RunConfig load_config(const CommonArgs& a) {
  if (!a.config_path.empty() && !a.preset.empty())
    throw ConfigError("pass either --config or --preset, not both");
  if (!a.config_path.empty()) return RunConfig::from_file(a.config_path);
  if (!a.preset.empty()) return RunConfig::from_string(preset_text(a.preset));
  throw ConfigError("a run configuration is required (--config FILE or --preset NAME)");
}

std::string out_path(const CommonArgs& a, const std::string& name) {
  fs::create_directories(a.out_dir);
  return (fs::path(a.out_dir) / name).string();
}

int cmd_groundstate(const CommonArgs& a) {
  const RunConfig cfg = load_config(a);
  const int N = cfg.dim();
  const ScalarField V = cfg.field("V");
  const ScalarField s = cfg.field("s");
  const Point y = cfg.get_point("groundstate.y", N);
  const ShootingOptions opts = cfg.shooting();

  const GroundState gs = solve_ground_state(V, s, y, opts);
  nlohmann::json j = groundstate_json(gs);

  if (a.check) {
    ShootingOptions fine = opts;
    fine.samples *= 2;
    const GroundState ref = solve_ground_state(V, s, y, fine);
    nlohmann::json c;
    c["energy_rel_delta"] = std::abs(gs.energy - ref.energy) / std::abs(ref.energy);
    c["l2sq_rel_delta"] = std::abs(gs.l2sq - ref.l2sq) / ref.l2sq;
    c["pohozaev_ratio"] =
        ref.pohozaev_residual > 0.0 ? gs.pohozaev_residual / ref.pohozaev_residual : 0.0;
    j["refinement_check"] = c;
    std::printf("refinement oracle: energy delta %.3e, l2 delta %.3e, pohozaev ratio %.2f\n",
                c["energy_rel_delta"].get<double>(), c["l2sq_rel_delta"].get<double>(),
                c["pohozaev_ratio"].get<double>());
  }

  write_csv(out_path(a, "groundstate_profile.csv"), profile_csv(gs.profile));
  write_json(out_path(a, "groundstate.json"), j);
  std::printf("ground state at (V,s)=(%.6g,%.6g): energy %.10g, ||Q||_2^2 %.10g, ||grad Q||_2^2 %.10g\n",
              gs.Vy, gs.sy, gs.energy, gs.l2sq, gs.gradsq);
  std::printf("nehari residual %.3e, pohozaev residual %.3e\n", gs.nehari_residual, gs.pohozaev_residual);
  return 0;
}

int cmd_sigma_map(const CommonArgs& a) {
  const RunConfig cfg = load_config(a);
  const int N = cfg.dim();
  const Point lo = cfg.get_point("sigma_map.min", N);
  const Point hi = cfg.get_point("sigma_map.max", N);
  const std::vector<double> nptsd = cfg.get_doubles("sigma_map.npts");
  if (static_cast<int>(nptsd.size()) != N)
    throw ConfigError("sigma_map.npts needs one count per dimension", cfg.line_of("sigma_map.npts"));

  std::vector<Point> pts;
  std::vector<int> npts(N);
  std::size_t total = 1;
  for (int j = 0; j < N; ++j) {
    npts[j] = static_cast<int>(nptsd[j]);
    if (npts[j] < 1) throw ConfigError("sigma_map.npts entries must be >= 1", cfg.line_of("sigma_map.npts"));
    total *= static_cast<std::size_t>(npts[j]);
  }
  pts.reserve(total);
  for (std::size_t f = 0; f < total; ++f) {
    Point p(N);
    std::size_t rem = f;
    for (int j = N - 1; j >= 0; --j) {
      const int k = static_cast<int>(rem % npts[j]);
      rem /= npts[j];
      p[j] = npts[j] == 1 ? lo[j] : lo[j] + (hi[j] - lo[j]) * k / (npts[j] - 1);
    }
    pts.push_back(std::move(p));
  }

  const SigmaMap sm(cfg.field("V"), cfg.field("s"), cfg.sigma_options());
  const bool with_fd = cfg.get_bool("sigma_map.fd", false);
  const auto samples = sm.map_points(pts, a.threads, with_fd);

  std::size_t inside = 0;
  for (const auto& s : samples) inside += s.inside ? 1 : 0;
  if (inside == 0) throw NotInOmegaError("every grid point satisfies V*s >= 1; nothing to map");

  write_csv(out_path(a, "sigma_map.csv"), sigma_map_csv(samples, N));
  std::printf("sigma-map: %zu points, %zu inside the existence region\n", samples.size(), inside);

  if (cfg.get_bool("sigma_map.search", false)) {
    const Point seed = cfg.get_point("sigma_map.seed_point", N);
    const Point center = cfg.get_point("ball.z", N);
    const double radius = cfg.get_double("sigma_map.ball_r", cfg.get_double("ball.r"));
    const MinimumSearchResult res = sm.find_minimum(seed, center, radius);
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "sigma-minimum";
    j["location"] = res.location;
    j["sigma"] = res.sigma;
    j["grad"] = res.grad;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["on_boundary"] = res.on_boundary;
    write_json(out_path(a, "sigma_minimum.json"), j);
    std::printf("sigma minimum search: sigma=%.10g after %d iterations%s\n", res.sigma, res.iterations,
                res.on_boundary ? " (stopped on the ball boundary)" : "");
  }
  return 0;
}

int cmd_solve_eps(const CommonArgs& a) {
  const RunConfig cfg = load_config(a);
  const EpsProblem base = cfg.eps_problem();
  const double eps = cfg.get_double("solver.eps", cfg.eps_list().front());
  const EpsProblem p = base.with_epsilon(eps);
  const GroundState Qz = solve_ground_state(p.V, p.s, p.pen.center(), cfg.shooting());
  const GridSolution sol = solve_penalized(p, initial_guess(p, Qz));
  const bool active = penalization_active(sol, p);

  write_csv(out_path(a, "solution_eps" + fmt(eps) + ".csv"), grid_solution_csv(sol));
  write_json(out_path(a, "solve_eps.json"), solution_json(sol, active));
  std::printf("eps=%g: residual %.3e, max %.8g, rescaled energy %.10g, penalization %s\n", eps,
              sol.residual_norm, sol.max_value(), sol.rescaled_energy, active ? "ACTIVE" : "inactive");
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  const RunConfig cfg = load_config(a);
  const EpsProblem base = cfg.eps_problem();
  const std::vector<double> eps_list = cfg.eps_list();
  const auto sweep = continuation_sweep(base, eps_list, cfg.shooting());
  if (sweep.empty()) throw NoConvergenceError("sweep failed at the largest eps");
  if (sweep.size() < eps_list.size())
    std::printf("warning: sweep aborted after %zu of %zu entries\n", sweep.size(), eps_list.size());

  const SigmaMap sm(base.V, base.s, cfg.sigma_options());
  const double sigma_z = sm.sigma(base.pen.center());
  const ConcentrationReport rep = concentration_report(sweep, base, sigma_z);

  std::ofstream jsonl(out_path(a, "sweep_report.jsonl"));
  for (const auto& row : rep.rows) jsonl << concentration_row_json(row).dump() << "\n";
  write_csv(out_path(a, "sweep_summary.csv"), sweep_summary_csv(rep));
  for (const auto& sol : sweep)
    write_csv(out_path(a, "solution_eps" + fmt(sol.epsilon) + ".csv"), grid_solution_csv(sol));

  for (const auto& r : rep.rows)
    std::printf("eps=%-8g |x_eps-z|=%.3e V(x_eps)=%.6f s(x_eps)=%.6f mu2=%.4f R2=%.4f E/eps^N=%.8g pen=%s\n",
                r.epsilon, r.dist_to_center, r.V_at_max, r.s_at_max, r.mu2, r.fit_r2, r.rescaled_energy,
                r.pen_active ? "active" : "inactive");
  std::printf("Sigma(z)=%.8g; trends: dist %s, V %s, s %s, energy %s\n", sigma_z,
              rep.dist_nonincreasing ? "ok" : "VIOLATED", rep.V_trend ? "ok" : "VIOLATED",
              rep.s_trend ? "ok" : "VIOLATED", rep.energy_trend ? "ok" : "VIOLATED");
  return 0;
}

int cmd_check_necessary(const CommonArgs& a) {
  const RunConfig cfg = load_config(a);
  const int N = cfg.dim();
  const auto points = cfg.get_points("check.points", N);
  const SigmaMap sm(cfg.field("V"), cfg.field("s"), cfg.sigma_options());

  nlohmann::json reports = nlohmann::json::array();
  for (const auto& z : points) {
    const NecessaryConditionReport r = sm.necessary_condition(z);
    reports.push_back(necessary_condition_json(r));
    std::string zs;
    for (std::size_t j = 0; j < z.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%g", j ? "," : "", z[j]);
      zs += buf;
    }
    std::printf("z=(%s): ||residual||=%.6g scale=%.6g opposite_orientation=%d\n", zs.c_str(),
                norm(r.identity_residual), r.scale, static_cast<int>(r.opposite_orientation));
  }
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "necessary-condition-set";
  j["reports"] = reports;
  write_json(out_path(a, "necessary_condition.json"), j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satwave: ground states, concentration function, and semiclassical sweeps for the saturable elliptic problem"};
  app.require_subcommand(1);

  CommonArgs groundstate_args, sigma_args, solve_args, sweep_args, check_args;
  auto* c_gs = app.add_subcommand("groundstate", "solve the frozen ground state at a point");
  add_common(c_gs, groundstate_args);
  auto* c_sm = app.add_subcommand("sigma-map", "evaluate Sigma and its gradient on a grid");
  add_common(c_sm, sigma_args);
  auto* c_se = app.add_subcommand("solve-eps", "solve the penalized problem at one eps");
  add_common(c_se, solve_args);
  auto* c_sw = app.add_subcommand("sweep", "continuation sweep in eps with concentration diagnostics");
  add_common(c_sw, sweep_args);
  auto* c_cn = app.add_subcommand("check-necessary", "necessary-condition report at given points");
  add_common(c_cn, check_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_gs->parsed()) return cmd_groundstate(groundstate_args);
    if (c_sm->parsed()) return cmd_sigma_map(sigma_args);
    if (c_se->parsed()) return cmd_solve_eps(solve_args);
    if (c_sw->parsed()) return cmd_sweep(sweep_args);
    if (c_cn->parsed()) return cmd_check_necessary(check_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
