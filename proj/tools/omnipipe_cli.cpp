// omnipipe: command-line front end.
//
// Exit codes: 0 ok, 1 other errors, 2 parse/validation, 3 degenerate geometry,
// 4 insufficient reach, 5 simulated mission failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "omnipipe/angles.hpp"
#include "omnipipe/error.hpp"
#include "omnipipe/kinematics.hpp"
#include "omnipipe/montecarlo.hpp"
#include "omnipipe/pipenet.hpp"
#include "omnipipe/planner.hpp"
#include "omnipipe/report.hpp"
#include "omnipipe/sim.hpp"
#include "omnipipe/singularity.hpp"

namespace {

using namespace omnipipe;
namespace fs = std::filesystem;

enum ExitCode {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kGeometry = 3,
  kReach = 4,
  kMissionFailed = 5,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct GeometryArgs {
  std::string file;
  std::optional<double> r;
  std::optional<double> l;
  std::optional<double> reach_max;
  std::optional<double> outer_radius;

  void attach(CLI::App* app) {
    app->add_option("--geometry", file, "Robot geometry JSON file")->check(CLI::ExistingFile);
    app->add_option("--r", r, "Lug radius (mm)");
    app->add_option("--l", l, "Arm length (mm); sets a = l/2");
    app->add_option("--reach-max", reach_max, "Radial reach limit (mm)");
    app->add_option("--module-radius", outer_radius, "Module outer radius (mm)");
  }

  // Kinematic queries accept any r and l so that degenerate values reach the
  // solver and report exit code 3; missions validate the whole geometry.
  RobotGeometry build(bool validate) const {
    RobotGeometry g = file.empty() ? RobotGeometry{} : load_geometry(read_file(file));
    if (r) g.lug_radius = *r;
    if (l) {
      g.arm_length = *l;
      g.a_offset = *l / 2.0;
      g.reach_min = std::min(g.reach_min, *l);
      g.reach_max = std::max(g.reach_max, *l);
    }
    if (reach_max) g.reach_max = *reach_max;
    if (outer_radius) g.module_outer_radius = *outer_radius;
    if (validate) g.validate();
    return g;
  }
};

struct MissionArgs {
  GeometryArgs geometry;
  std::string network_file;
  std::string exit = "branch";
  double diameter = 160.0;
  std::optional<double> theta5_deg;
  bool no_holonomic = false;
  bool align = false;
  double speed = 100.0;
  double trigger_fraction = 0.25;
  std::string elbow_mode = "generalized";
  double deadband_deg = 1.0;
  double gain = 1.0;
  double phi_max_deg = 0.0;
  int sweep_steps = 91;
  double dt = 0.01;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";

  void attach(CLI::App* app, bool with_theta5) {
    geometry.attach(app);
    app->add_option("--network", network_file, "Pipe network JSON file; default: a single tee")
        ->check(CLI::ExistingFile);
    app->add_option("--exit", exit, "Exit of the built-in tee")
        ->check(CLI::IsMember({"branch", "through"}));
    app->add_option("--D", diameter, "Pipe diameter of the built-in tee (mm)");
    if (with_theta5) {
      app->add_option("--theta5", theta5_deg,
                      "Initial roll from the first turn direction (deg); default: drawn from the "
                      "seed");
    }
    app->add_flag("--no-holonomic", no_holonomic, "Plan without holonomic rotations");
    app->add_flag("--align", align, "Align to theta5 = 0 before every tee turn");
    app->add_option("--speed", speed, "Straight speed (mm/s)");
    app->add_option("--trigger-fraction", trigger_fraction, "Tee turn onset, fraction of D");
    app->add_option("--elbow-mode", elbow_mode, "Elbow path radius model")
        ->check(CLI::IsMember({"generalized", "standard-bend"}));
    app->add_option("--deadband", deadband_deg, "No-motion deadband (deg)");
    app->add_option("--gain", gain, "Module self-rotation coupling gain");
    app->add_option("--phi-max", phi_max_deg, "Tee cut-tilt sweep limit (deg); 0 = default");
    app->add_option("--sweep-steps", sweep_steps, "Tee cut-tilt sweep samples");
    app->add_option("--dt", dt, "Integration step (s)");
    app->add_option("--seed", seed, "Random seed; falls back to OMNIPIPE_SEED, then 0");
    app->add_option("--out", out_dir, "Output directory");
  }

  PipeNetwork network() const {
    if (!network_file.empty()) return load_network(read_file(network_file));
    return default_tee_network(diameter, exit == "through" ? TeeExit::Through : TeeExit::Branch);
  }

  PlannerConfig planner() const {
    PlannerConfig cfg;
    cfg.straight_speed = speed;
    cfg.tee_trigger_fraction = trigger_fraction;
    cfg.elbow_mode =
        elbow_mode == "standard-bend" ? ElbowRatioMode::StandardBend : ElbowRatioMode::Generalized;
    cfg.wobble_deadband = deg_to_rad(deadband_deg);
    cfg.with_holonomic = !no_holonomic;
    cfg.align_tee = align;
    cfg.self_rotation_gain = gain;
    cfg.tee_phi_max = deg_to_rad(phi_max_deg);
    cfg.tee_sweep_steps = sweep_steps;
    cfg.validate();
    return cfg;
  }

  SimConfig sim() const {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.wobble_deadband = deg_to_rad(deadband_deg);
    cfg.self_rotation_gain = gain;
    cfg.validate();
    return cfg;
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("OMNIPIPE_SEED")) {
      try {
        std::size_t used = 0;
        const auto value = std::stoull(env, &used);
        if (used == std::string(env).size()) return value;
      } catch (const std::exception&) {
      }
      throw ValidationError("OMNIPIPE_SEED", "must be an unsigned integer");
    }
    return 0;
  }

  // Initial roll in the network frame.
  double initial_roll(const PipeNetwork& net) const {
    double turn_roll = 0.0;
    for (const auto& seg : net.segments()) {
      if (seg.kind != SegmentKind::Straight) {
        turn_roll = seg.turn_roll();
        break;
      }
    }
    const double theta5 = theta5_deg ? deg_to_rad(*theta5_deg) : trial_theta5(resolved_seed(), 0);
    return turn_roll + theta5;
  }

  fs::path output_dir() const {
    fs::create_directories(out_dir);
    return fs::path(out_dir);
  }
};

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int run_fk(const std::vector<double>& cmd, const GeometryArgs& ga) {
  const RobotGeometry g = ga.build(false);
  if (!(g.lug_radius > 0.0) || !(g.arm_length > 0.0)) {
    throw InvalidGeometry("lug radius and arm length must be > 0");
  }
  const CommandVector c{cmd[0], cmd[1], cmd[2], cmd[3]};
  if (!c.finite()) throw ValidationError("cmd", "must be finite");
  print_json(to_json(forward_kinematics(c, g)));
  return kOk;
}

int run_ik(const std::vector<double>& twist, const GeometryArgs& ga) {
  const RobotGeometry g = ga.build(false);
  const TwistVector t{twist[0], twist[1], twist[2], twist[3]};
  if (!t.finite()) throw ValidationError("twist", "must be finite");
  print_json(to_json(inverse_kinematics(t, g)));
  return kOk;
}

int run_sector(double diameter, double phi_max_deg, int steps, const GeometryArgs& ga) {
  const RobotGeometry g = ga.build(true);
  SectorReport rep;
  rep.diameter = diameter;
  rep.reach_max = g.reach_max;
  rep.phi_max = phi_max_deg > 0.0 ? deg_to_rad(phi_max_deg) : default_tee_phi_max(1.0, 1.0);
  rep.steps = steps;
  rep.region = sweep_t_junction(diameter, g, rep.phi_max, steps);
  print_json(to_json(rep));
  return kOk;
}

int run_plan(const MissionArgs& ma) {
  const RobotGeometry g = ma.geometry.build(true);
  const PipeNetwork net = ma.network();
  const PlannerConfig cfg = ma.planner();
  const Plan plan = plan_mission(net, ma.initial_roll(net), cfg, g);
  const fs::path path = ma.output_dir() / "plan.json";
  write_file(path, plan_to_json(plan).dump(2) + "\n");
  print_json({{"plan", path.string()}, {"steps", plan.size()}});
  return kOk;
}

int run_simulate(const MissionArgs& ma) {
  const RobotGeometry g = ma.geometry.build(true);
  const PipeNetwork net = ma.network();
  const PlannerConfig pcfg = ma.planner();
  const SimConfig scfg = ma.sim();
  const double roll = ma.initial_roll(net);
  const auto regions = tee_regions(net, g, pcfg);
  const Plan plan = plan_mission(net, roll, pcfg, g, regions);
  const SimResult result = run_mission(net, plan, scfg, g, regions, roll);

  const fs::path dir = ma.output_dir();
  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory);
  write_file(dir / "trajectory.csv", csv.str());
  nlohmann::json summary = sim_summary_json(result, net);
  SimState start;
  start.roll = roll;
  summary["initial_theta5_deg"] = rad_to_deg(start.theta5(net));
  write_file(dir / "outcome.json", summary.dump(2) + "\n");
  print_json(summary);
  return result.outcome == Outcome::Success ? kOk : kMissionFailed;
}

int run_montecarlo(const MissionArgs& ma, long trials, int threads, double grid_step_deg) {
  const RobotGeometry g = ma.geometry.build(true);
  const PipeNetwork net = ma.network();
  const PlannerConfig pcfg = ma.planner();
  const SimConfig scfg = ma.sim();
  const auto result =
      monte_carlo_tee(net, pcfg, scfg, g, trials, ma.resolved_seed(), !ma.no_holonomic, threads);
  nlohmann::json j = to_json(result);
  if (grid_step_deg > 0.0) {
    PlannerConfig grid_cfg = pcfg;
    grid_cfg.with_holonomic = !ma.no_holonomic;
    const auto sweep = sweep_initial_theta5(net, grid_cfg, scfg, g, grid_step_deg);
    j["grid"] = {{"step_deg", grid_step_deg},
                 {"points", sweep.outcomes.size()},
                 {"successes", sweep.successes}};
  }
  write_file(ma.output_dir() / "montecarlo.json", j.dump(2) + "\n");
  print_json(j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematics, singularity analysis, planning and simulation for a three-module "
               "in-pipe robot"};
  app.require_subcommand(1);

  GeometryArgs fk_geom;
  std::vector<double> fk_cmd;
  auto* fk = app.add_subcommand("fk", "Command rates (rad/s) to twist");
  fk->add_option("--cmd", fk_cmd, "th1,th2,th3,th4 in rad/s")
      ->required()
      ->delimiter(',')
      ->expected(4);
  fk_geom.attach(fk);

  GeometryArgs ik_geom;
  std::vector<double> ik_twist;
  auto* ik = app.add_subcommand("ik", "Twist to command rates (rad/s)");
  ik->add_option("--twist", ik_twist, "wx,wy,wz (rad/s),vcz (mm/s)")
      ->required()
      ->delimiter(',')
      ->expected(4);
  ik_geom.attach(ik);

  GeometryArgs sector_geom;
  double sector_d = 160.0;
  double sector_phi = 0.0;
  int sector_steps = 91;
  auto* sector = app.add_subcommand("sector", "Tee singularity region report");
  sector->add_option("--D", sector_d, "Pipe diameter (mm)");
  sector->add_option("--phi-max", sector_phi, "Cut-tilt sweep limit (deg); 0 = default");
  sector->add_option("--steps", sector_steps, "Cut-tilt sweep samples");
  sector_geom.attach(sector);

  MissionArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Write the mission plan as JSON");
  plan_args.attach(plan, true);

  MissionArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Plan and simulate a mission");
  sim_args.attach(simulate, true);

  MissionArgs mc_args;
  long mc_trials = 10000;
  int mc_threads = 0;
  double mc_grid = 0.0;
  auto* montecarlo = app.add_subcommand("montecarlo", "Random initial roll experiment");
  mc_args.attach(montecarlo, false);
  montecarlo->add_option("--trials", mc_trials, "Number of trials");
  montecarlo->add_option("--threads", mc_threads, "Worker threads; 0 = hardware concurrency");
  montecarlo->add_option("--grid-step", mc_grid, "Also sweep initial theta5 on this grid (deg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*fk) return run_fk(fk_cmd, fk_geom);
    if (*ik) return run_ik(ik_twist, ik_geom);
    if (*sector) return run_sector(sector_d, sector_phi, sector_steps, sector_geom);
    if (*plan) return run_plan(plan_args);
    if (*simulate) return run_simulate(sim_args);
    if (*montecarlo) return run_montecarlo(mc_args, mc_trials, mc_threads, mc_grid);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const InvalidSection& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const InvalidGeometry& e) {
    std::cerr << "degenerate geometry: " << e.what() << '\n';
    return kGeometry;
  } catch (const InsufficientReach& e) {
    std::cerr << "insufficient reach: " << e.what() << '\n';
    return kReach;
  } catch (const NoEscape& e) {
    std::cerr << "insufficient reach: " << e.what() << '\n';
    return kReach;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
