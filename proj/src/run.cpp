#include "commaware/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commaware/artifacts.hpp"
#include "commaware/planner.hpp"
#include "json.hpp"

namespace commaware {

namespace {

using nlohmann::json;

}  // namespace

RunMode parse_mode(const std::string& name) {
  if (name == "simulate-channel") return RunMode::kSimulateChannel;
  if (name == "predict") return RunMode::kPredict;
  if (name == "plan-offline") return RunMode::kPlanOffline;
  if (name == "plan-online") return RunMode::kPlanOnline;
  throw ConfigError("mode must be one of simulate-channel, predict, "
                    "plan-offline, plan-online (got '" + name + "')");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kSimulateChannel:
      return "simulate-channel";
    case RunMode::kPredict:
      return "predict";
    case RunMode::kPlanOffline:
      return "plan-offline";
    case RunMode::kPlanOnline:
      return "plan-online";
  }
  return "unknown";
}

namespace {

json state_json(const RobotState& x) {
  return json{{"x", x.x1.x()},
              {"y", x.x1.y()},
              {"vx", x.x2.x()},
              {"vy", x.x2.y()},
              {"x3", x.x3}};
}

double min_distance_to(const StateTrajectory& traj, const Vec2& point) {
  double best = std::numeric_limits<double>::infinity();
  for (const RobotState& x : traj.states) {
    best = std::min(best, (x.x1 - point).norm());
  }
  return best;
}

json solution_json(const Solution& sol, const ProblemSpec& spec,
                   const Vec2& base_station) {
  const RobotState& final_state = sol.traj.states.back();
  return json{
      {"J", sol.cost.J},
      {"J_bar", sol.cost.J_bar},
      {"terminal_penalty", sol.cost.terminal_penalty},
      {"iterations", sol.iterations},
      {"termination", to_string(sol.reason)},
      {"final_state", state_json(final_state)},
      {"final_position_error", (final_state.x1 - spec.destination).norm()},
      {"final_speed", final_state.x2.norm()},
      {"min_distance_to_base_station",
       min_distance_to(sol.traj, base_station)},
      {"workspace_clamp_events", sol.traj.clamp_events}};
}

json run_one_seed(const RunConfig& cfg, RunMode mode, std::uint64_t seed,
                  const std::string& out_dir) {
  const std::string dir = out_dir + "/seed_" + std::to_string(seed);
  ensure_directory(dir);

  json summary;
  summary["seed"] = seed;

  const GroundTruthField field =
      generate_field(cfg.channel, cfg.workspace, cfg.resolution,
                     cfg.field_seed(seed), cfg.node_cap);
  field.grid.save_csv(dir + "/true_cnr_db.csv");
  {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double mean = 0.0;
    for (double v : field.grid.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      mean += v;
    }
    mean /= field.grid.size();
    summary["field"] = {{"nodes", field.grid.size()},
                        {"min_db", lo},
                        {"max_db", hi},
                        {"mean_db", mean}};
  }

  const MeasurementSet meas = sample_measurements(
      field, cfg.initial_samples, cfg.measurement_seed(seed));
  meas.save_csv(dir + "/measurements.csv");
  summary["measurements"] = meas.size();
  if (mode == RunMode::kSimulateChannel) return summary;

  if (mode == RunMode::kPlanOnline) {
    const OnlineResult onl =
        plan_online(field, meas, cfg.resolution, cfg.predictor, cfg.weights,
                    cfg.problem, cfg.solver, cfg.online, seed);
    write_trajectory_csv(dir + "/trajectory.csv", seed, onl.executed_traj,
                         onl.executed_ctrl, onl.executed_cost, cfg.weights,
                         cfg.problem);
    json cycles = json::array();
    for (size_t i = 0; i < onl.cycles.size(); ++i) {
      const OnlineCycle& cycle = onl.cycles[i];
      const std::string stem = dir + "/cycle_" + std::to_string(i);
      write_trajectory_csv(stem + "_trajectory.csv", seed,
                           cycle.solution.traj, cycle.solution.ctrl,
                           cycle.solution.cost, cfg.weights, cfg.problem);
      write_iteration_log_csv(stem + "_iterations.csv", cycle.solution.log);
      cycles.push_back({{"t0", cycle.t0},
                        {"c_bar", cycle.c_bar},
                        {"m", cycle.measurements_used},
                        {"executed_steps", cycle.executed_steps},
                        {"iterations", cycle.solution.iterations},
                        {"termination", to_string(cycle.solution.reason)},
                        {"J", cycle.solution.cost.J},
                        {"J_bar", cycle.solution.cost.J_bar}});
    }
    summary["per_cycle"] = cycles;
    summary["J"] = onl.executed_cost.J;
    summary["J_bar"] = onl.executed_cost.J_bar;
    summary["J_bar_executed"] = onl.executed_cost.J_bar;
    summary["final_state"] = state_json(onl.executed_traj.states.back());
    summary["min_distance_to_base_station"] =
        min_distance_to(onl.executed_traj, cfg.workspace.base_station);
    return summary;
  }

  const Predictor pred(meas, cfg.workspace.base_station, cfg.predictor.xi_hat,
                       cfg.predictor.eta_hat, cfg.predictor.rho_hat,
                       cfg.predictor.noise_floor_dbm);
  const PosteriorGrids post =
      evaluate_posterior_grids(pred, cfg.workspace, cfg.resolution);
  post.mean_db.save_csv(dir + "/posterior_mean_db.csv");
  post.variance.save_csv(dir + "/posterior_variance.csv");
  const CostGrid grid =
      cost_grid_from_posterior(post, pred.noise_floor_dbm());
  grid.s.save_csv(dir + "/s.csv");
  {
    double sq = 0.0;
    for (int i = 0; i < field.grid.size(); ++i) {
      const double d = post.mean_db.values[i] - field.grid.values[i];
      sq += d * d;
    }
    summary["prediction"] = {
        {"k_pl_hat", pred.path_loss().theta_hat(0)},
        {"n_pl_hat", pred.path_loss().theta_hat(1)},
        {"rms_db", std::sqrt(sq / field.grid.size())},
        {"patched_nodes", post.notes.size()}};
  }
  if (mode == RunMode::kPredict) return summary;

  RobotState x0;
  x0.x1 = cfg.problem.source;
  const Solution sol =
      solve(x0, ControlTrajectory::zeros(cfg.problem.steps(), cfg.problem.dt),
            grid, cfg.weights, cfg.problem, cfg.problem.c, cfg.solver);
  write_trajectory_csv(dir + "/trajectory.csv", seed, sol.traj, sol.ctrl,
                       sol.cost, cfg.weights, cfg.problem);
  write_iteration_log_csv(dir + "/iterations.csv", sol.log);
  summary.update(
      solution_json(sol, cfg.problem, cfg.workspace.base_station));
  return summary;
}

}  // namespace

void run(const RunConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  ensure_directory(opts.out_dir);

  RunConfig resolved = cfg;
  resolved.mode = to_string(opts.mode);
  resolved.output_dir = opts.out_dir;
  write_text_file(opts.out_dir + "/manifest.json", config_to_json(resolved));

  json runs = json::array();
  for (std::uint64_t seed : resolved.seeds) {
    runs.push_back(run_one_seed(resolved, opts.mode, seed, opts.out_dir));
  }
  json summary;
  summary["mode"] = resolved.mode;
  summary["seeds"] = resolved.seeds;
  summary["runs"] = runs;
  if (runs.size() == 1) {
    summary.update(runs[0]);
  }
  write_text_file(opts.out_dir + "/summary.json", summary.dump(2) + "\n");
}

}  // namespace commaware
