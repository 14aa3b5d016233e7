#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "cavesim/config.hpp"
#include "cavesim/evolution.hpp"
#include "cavesim/log.hpp"
#include "cavesim/output.hpp"

namespace {

using namespace cavesim;

struct Overrides {
  std::optional<std::string> model;
  std::optional<double> w1;
  std::optional<double> kappa;
  std::optional<std::string> out;
};

Config load_with_overrides(const std::string& path, const Overrides& ov) {
  Config cfg = path.empty() ? Config{} : load_config(path);
  if (ov.model) {
    Config patch = parse_config("model = " + *ov.model, "--model");
    if (patch.model != cfg.model && !path.empty()) {
      log_info("command-line --model " + *ov.model + " overrides config value");
    }
    cfg.model = patch.model;
  }
  if (ov.w1) {
    if (*ov.w1 != cfg.w1 && !path.empty()) {
      log_info("command-line --w1 overrides config value");
    }
    cfg.w1 = *ov.w1;
  }
  if (ov.kappa) {
    if (*ov.kappa != cfg.kappa && !path.empty()) {
      log_info("command-line --kappa overrides config value");
    }
    cfg.kappa = *ov.kappa;
  }
  if (ov.out) cfg.out_dir = *ov.out;
  cfg.validate();
  return cfg;
}

std::string step_path(const std::string& dir, const char* prefix, int step,
                      const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", prefix, step, ext);
  return dir + "/" + buf;
}

int cmd_check(const Config& cfg) {
  const Mesh base = build_mesh(cfg.domain, cfg.h);
  const Mesh final_mesh = carve_cavity(base, cfg.steps, cfg.cavity);
  std::cout << "model: " << to_string(cfg.model) << "\n";
  std::cout << "mesh: " << base.nx << " x " << base.ny << " cells, "
            << base.node_count() << " nodes, " << base.tri_count() << " triangles\n";
  std::cout << "cell size: hx = " << base.hx << ", hy = " << base.hy << "\n";
  std::cout << "active triangles at step 0: "
            << carve_cavity(base, 0, cfg.cavity).active_tri_count() << "\n";
  std::cout << "active triangles at step " << cfg.steps << ": "
            << final_mesh.active_tri_count() << "\n";
  std::cout << "active nodes at step " << cfg.steps << ": "
            << final_mesh.active_node_count() << "\n";
  int cav_edges = 0;
  for (const BoundaryEdge& e : final_mesh.boundary) {
    if (e.tag == BoundaryTag::Cav) ++cav_edges;
  }
  std::cout << "cavity boundary edges at step " << cfg.steps << ": " << cav_edges << "\n";
  return 0;
}

int cmd_run(const Config& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const Trajectory traj = run_evolution(cfg);
  for (const StepSnapshot& snap : traj.steps) {
    const State& s = snap.state;
    write_vtk(s.mesh, s.alpha, s.u, step_path(cfg.out_dir, "step", s.step, "vtk"));
    if (cfg.checkpoints) {
      write_checkpoint(s, step_path(cfg.out_dir, "state", s.step, "chk"));
    }
  }
  write_trace_csv(traj, cfg.out_dir + "/trace.csv");
  std::cout << "wrote " << traj.steps.size() << " snapshots to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_step(const Config& cfg, int t) {
  std::filesystem::create_directories(cfg.out_dir);
  const MaterialParams mat = cfg.material();
  State state;
  AmResult am;
  if (t == 0) {
    state.mesh = carve_cavity(build_mesh(cfg.domain, cfg.h), 0, cfg.cavity);
    state.step = 0;
    state.u = NodalField::Zero(2 * state.mesh.node_count());
    state.alpha = NodalField::Zero(state.mesh.node_count());
    state.alpha_prev = state.alpha;
    am = alternate_minimization(state, cfg.model, mat, cfg.solver);
  } else {
    const std::string prev_path = step_path(cfg.out_dir, "state", t - 1, "chk");
    const CheckpointData prev = load_checkpoint(prev_path);
    State prev_state;
    prev_state.mesh = carve_cavity(build_mesh(cfg.domain, cfg.h), prev.step, cfg.cavity);
    if (prev.alpha.size() != prev_state.mesh.node_count()) {
      throw OutputError("checkpoint '" + prev_path + "' does not match the mesh");
    }
    if (prev.step != t - 1) {
      throw OutputError("checkpoint '" + prev_path + "' is for step " +
                        std::to_string(prev.step));
    }
    prev_state.step = prev.step;
    prev_state.alpha = prev.alpha;
    prev_state.alpha_prev = prev.alpha_prev;
    prev_state.u = prev.u;
    StepOutcome out = advance_step(prev_state, cfg.model, mat, cfg.cavity, cfg.solver);
    state = std::move(out.state);
    am = std::move(out.am);
  }
  if (!am.converged && !cfg.continue_on_failure) {
    throw EvolutionError("alternate minimization did not converge at step " +
                         std::to_string(t));
  }
  write_vtk(state.mesh, state.alpha, state.u, step_path(cfg.out_dir, "step", t, "vtk"));
  write_checkpoint(state, step_path(cfg.out_dir, "state", t, "chk"));
  const EnergyBreakdown e = energy_report(state, cfg.model, mat);
  std::cout << "step " << t << ": sweeps " << am.iterations << ", total energy "
            << e.total << " J, max alpha " << max_active_alpha(state.mesh, state.alpha)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D quasi-static gradient-damage simulator for block caving"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  int step_index = 0;

  const auto add_common = [&](CLI::App* cmd, bool config_required) {
    CLI::Option* opt = cmd->add_option("config", config_path, "configuration file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--model", ov.model, "damage model")
        ->check(CLI::IsMember({"isotropic", "shear", "shear-compression"}));
    cmd->add_option("--w1", ov.w1, "dissipated energy density at full damage [N/m^3]");
    cmd->add_option("--kappa", ov.kappa, "shear-compression ratio");
    cmd->add_option("--out", ov.out, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "run the full evolution");
  add_common(run, true);
  CLI::App* step = app.add_subcommand("step", "run a single step from a checkpoint");
  add_common(step, true);
  step->add_option("--t", step_index, "step index to compute")->required();
  CLI::App* check = app.add_subcommand("check", "validate config and print mesh stats");
  add_common(check, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const cavesim::Config cfg = load_with_overrides(config_path, ov);
    if (run->parsed()) return cmd_run(cfg);
    if (step->parsed()) return cmd_step(cfg, step_index);
    return cmd_check(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
