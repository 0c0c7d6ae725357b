#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "commaware/channel.hpp"
#include "commaware/dynamics.hpp"
#include "commaware/planner.hpp"
#include "commaware/predict.hpp"
#include "commaware/solver.hpp"
#include "commaware/types.hpp"
#include "doctest.h"

using namespace commaware;

namespace {

// small scenario shared by the planner tests: short horizon, coarse grid
struct Scenario {
  Workspace ws;
  GroundTruthField field;
  MeasurementSet meas;
  PredictorParams pp;
  MotionWeights w;
  ProblemSpec spec;
  SolverParams sp;
  double resolution = 2.0;

  Scenario() : field(generate_field(ChannelParams{}, ws, 2.0, 5)) {
    meas = sample_measurements(field, 25, 40);
    spec.t_f = 4.0;
    spec.c = 6.0;
    spec.destination = Vec2(18.0, 38.0);
    sp.max_iters = 40;
  }
};

}  // namespace

TEST_CASE("predictor parameter validation") {
  PredictorParams pp;
  pp.validate();
  auto reject = [](auto&& mutate) {
    PredictorParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), ConfigError);
  };
  reject([](PredictorParams& p) { p.xi_hat = -1.0; });
  reject([](PredictorParams& p) { p.eta_hat = 0.0; });
  reject([](PredictorParams& p) { p.rho_hat = -0.5; });
  reject([](PredictorParams& p) { p.noise_floor_dbm = std::nan(""); });
}

TEST_CASE("online parameter validation") {
  ProblemSpec spec;
  spec.t_f = 4.0;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.validate(spec);
  auto reject = [&spec](auto&& mutate) {
    OnlineParams p;
    p.replan_times = {0.0, 2.0};
    mutate(p);
    CHECK_THROWS_AS(p.validate(spec), ConfigError);
  };
  reject([](OnlineParams& p) { p.replan_times.clear(); });
  reject([](OnlineParams& p) { p.replan_times = {1.0, 2.0}; });
  reject([](OnlineParams& p) { p.replan_times = {0.0, 2.0, 2.0}; });
  reject([](OnlineParams& p) { p.replan_times = {0.0, 4.0}; });
  reject([](OnlineParams& p) { p.replan_times = {0.0, 1.23456}; });
  reject([](OnlineParams& p) { p.samples_per_cycle = -1; });
  reject([](OnlineParams& p) {
    p.sample_near_robot = true;
    p.sample_radius = 0.0;
  });
}

TEST_CASE("offline planning produces a feasible descent result") {
  Scenario sc;
  OfflinePlan plan =
      plan_offline(sc.meas, sc.ws, sc.resolution, sc.pp, sc.w, sc.spec, sc.sp);
  CHECK(plan.fit.theta_hat.allFinite());
  for (double v : plan.cost_grid.s.values) CHECK(v > 0.0);
  const Solution& sol = plan.solution;
  CHECK(sol.ctrl.steps() == sc.spec.steps());
  CHECK(sol.ctrl.feasibility_violation(sc.spec.u_max, sc.spec.r_max) == 0.0);
  REQUIRE(sol.log.size() >= 2);
  CHECK(sol.cost.J < sol.log.front().J);
  for (std::size_t i = 1; i < sol.log.size(); ++i) {
    CHECK(sol.log[i].J <= sol.log[i - 1].J + 1e-12);
  }
  // solved from rest at the source
  CHECK(sol.traj.states.front().x1 == sc.spec.source);
  CHECK(sol.traj.states.front().x2.norm() == 0.0);
  CHECK(sol.traj.states.front().x3 == 0.0);
}

TEST_CASE("a single-cycle schedule reproduces the offline plan") {
  Scenario sc;
  OfflinePlan off =
      plan_offline(sc.meas, sc.ws, sc.resolution, sc.pp, sc.w, sc.spec, sc.sp);
  OnlineParams op;
  op.replan_times = {0.0};
  op.samples_per_cycle = 15;  // unused: no later cycle collects samples
  OnlineResult on = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                                sc.spec, sc.sp, op, 9);
  REQUIRE(on.cycles.size() == 1);
  CHECK(on.cycles[0].measurements_used == sc.meas.size());
  CHECK(on.cycles[0].c_bar == sc.spec.c);
  CHECK(on.executed_ctrl.steps() == sc.spec.steps());
  CHECK(on.executed_cost.J == off.solution.cost.J);
  CHECK(on.executed_cost.J_bar == off.solution.cost.J_bar);
  for (int k = 0; k < sc.spec.steps(); ++k) {
    CHECK(on.executed_ctrl.u[k] == off.solution.ctrl.u[k]);
    CHECK(on.executed_ctrl.R[k] == off.solution.ctrl.R[k]);
  }
}

TEST_CASE("two cycles hand off state exactly and account for bits") {
  Scenario sc;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.samples_per_cycle = 15;
  OnlineResult on = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                                sc.spec, sc.sp, op, 9);
  REQUIRE(on.cycles.size() == 2);
  const int exec0 = on.cycles[0].executed_steps;
  CHECK(exec0 == 20);
  CHECK(on.cycles[1].executed_steps == 20);
  CHECK(on.executed_ctrl.steps() == 40);
  REQUIRE(static_cast<int>(on.executed_traj.states.size()) == 41);

  // measurement growth: 25 initial, then 15 fresh per later cycle
  CHECK(on.cycles[0].measurements_used == 25);
  CHECK(on.cycles[1].measurements_used == 40);

  const Solution& sol0 = on.cycles[0].solution;
  const Solution& sol1 = on.cycles[1].solution;
  // each cycle solves the remaining horizon only
  CHECK(sol0.ctrl.steps() == 40);
  CHECK(sol1.ctrl.steps() == 20);
  // cycle-local bit state restarts at zero
  CHECK(sol0.traj.states.front().x3 == 0.0);
  CHECK(sol1.traj.states.front().x3 == 0.0);

  // position and velocity continue exactly across the boundary
  CHECK(sol1.traj.states.front().x1 == sol0.traj.states[exec0].x1);
  CHECK(sol1.traj.states.front().x2 == sol0.traj.states[exec0].x2);
  // the second cycle owes what the first did not deliver
  const double sent0 = sol0.traj.states[exec0].x3;
  CHECK(on.cycles[1].c_bar == doctest::Approx(sc.spec.c - sent0).epsilon(1e-14));

  // the stitched trajectory carries cumulative bits
  CHECK(on.executed_traj.states[exec0].x3 ==
        doctest::Approx(sent0).epsilon(1e-14));
  double rate_sum = 0.0;
  for (double r : on.executed_ctrl.R) rate_sum += sc.spec.dt * r;
  CHECK(on.executed_traj.states.back().x3 ==
        doctest::Approx(rate_sum).epsilon(1e-12));

  // the boundary sample comes from the second cycle's own grid
  const double boundary_s =
      s_and_grad(on.cycles[1].cost_grid, sol1.traj.states.front().x1).s;
  CHECK(on.executed_traj.s[exec0] == boundary_s);

  // executed costs re-evaluate against the full bit budget
  CostBreakdown recheck = total_cost(on.executed_traj, on.executed_ctrl, sc.w,
                                     sc.spec, sc.spec.c);
  CHECK(recheck.J == doctest::Approx(on.executed_cost.J).epsilon(1e-14));
}

TEST_CASE("the second cycle warm-starts from the unflown tail") {
  Scenario sc;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.samples_per_cycle = 15;
  OnlineResult on = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                                sc.spec, sc.sp, op, 9);
  REQUIRE(on.cycles.size() == 2);
  const int exec0 = on.cycles[0].executed_steps;
  const Solution& sol0 = on.cycles[0].solution;

  ControlTrajectory warm = sol0.ctrl;
  warm.u.erase(warm.u.begin(), warm.u.begin() + exec0);
  warm.R.erase(warm.R.begin(), warm.R.begin() + exec0);
  RobotState x0;
  x0.x1 = sol0.traj.states[exec0].x1;
  x0.x2 = sol0.traj.states[exec0].x2;
  const double c_bar = sc.spec.c - sol0.traj.states[exec0].x3;
  const double j0 =
      total_cost(integrate_forward(x0, warm, on.cycles[1].cost_grid), warm,
                 sc.w, sc.spec, c_bar)
          .J;
  CHECK(on.cycles[1].solution.log.front().J == j0);
}

TEST_CASE("online planning is deterministic in the seed") {
  Scenario sc;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.samples_per_cycle = 15;
  OnlineResult a = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                               sc.spec, sc.sp, op, 9);
  OnlineResult b = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                               sc.spec, sc.sp, op, 9);
  CHECK(a.executed_cost.J == b.executed_cost.J);
  for (int k = 0; k < a.executed_ctrl.steps(); ++k) {
    CHECK(a.executed_ctrl.u[k] == b.executed_ctrl.u[k]);
    CHECK(a.executed_ctrl.R[k] == b.executed_ctrl.R[k]);
  }
  OnlineResult c = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                               sc.spec, sc.sp, op, 10);
  CHECK(c.executed_cost.J != a.executed_cost.J);
}

TEST_CASE("a zero sample budget keeps the predictor fixed across cycles") {
  Scenario sc;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.samples_per_cycle = 0;
  OnlineResult on = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                                sc.spec, sc.sp, op, 9);
  REQUIRE(on.cycles.size() == 2);
  CHECK(on.cycles[0].measurements_used == 25);
  CHECK(on.cycles[1].measurements_used == 25);
  CHECK(on.cycles[0].fit.theta_hat == on.cycles[1].fit.theta_hat);
}

TEST_CASE("disk-restricted sampling still yields a full plan") {
  Scenario sc;
  OnlineParams op;
  op.replan_times = {0.0, 2.0};
  op.samples_per_cycle = 10;
  op.sample_near_robot = true;
  op.sample_radius = 8.0;
  OnlineResult on = plan_online(sc.field, sc.meas, sc.resolution, sc.pp, sc.w,
                                sc.spec, sc.sp, op, 9);
  REQUIRE(on.cycles.size() == 2);
  CHECK(on.cycles[1].measurements_used == 35);
  CHECK(on.executed_ctrl.steps() == sc.spec.steps());
  CHECK(on.executed_ctrl.feasibility_violation(sc.spec.u_max, sc.spec.r_max) ==
        0.0);
}
