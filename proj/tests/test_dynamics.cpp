#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "commaware/channel.hpp"
#include "commaware/dynamics.hpp"
#include "commaware/predict.hpp"
#include "commaware/types.hpp"
#include "doctest.h"

using namespace commaware;

namespace {

CostGrid linear_grid(double a, double bx, double by, double res = 1.0) {
  Workspace ws;
  const int nx = static_cast<int>(std::lround(50.0 / res)) + 1;
  std::vector<double> vals(static_cast<std::size_t>(nx) * nx);
  for (int iy = 0; iy < nx; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      vals[static_cast<std::size_t>(iy) * nx + ix] =
          a + bx * (ix * res) + by * (iy * res);
  return build_cost_grid_from_values(ws, res, vals);
}

CostGrid constant_grid(double value, double res = 2.0) {
  return linear_grid(value, 0.0, 0.0, res);
}

ControlTrajectory random_controls(int n, double dt, std::uint64_t seed,
                                  double u_max = 0.5, double r_max = 6.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  ControlTrajectory ctrl = ControlTrajectory::zeros(n, dt);
  for (int k = 0; k < n; ++k) {
    const double a = angle(rng), m = u_max * mag(rng);
    ctrl.u[k] = Vec2(m * std::cos(a), m * std::sin(a));
    ctrl.R[k] = r_max * mag(rng);
  }
  return ctrl;
}

}  // namespace

TEST_CASE("motion power pinned values") {
  MotionWeights w;  // (1, 1, 1, 1, 0, 0)
  CHECK(motion_power(Vec2(3.0, 4.0), Vec2::Zero(), w) == 26.0);
  CHECK(motion_power(Vec2::Zero(), Vec2(3.0, 4.0), w) == 31.0);
  CHECK(motion_power(Vec2::Zero(), Vec2::Zero(), w) == 1.0);
  CHECK(motion_power(Vec2(1.0, 1.0), Vec2(2.0, 2.0), w) ==
        doctest::Approx(11.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-15));

  MotionWeights full;
  full.k1 = 1.0;
  full.k2 = 1.0;
  full.k3 = 1.0;
  full.k4 = 1.0;
  full.k5 = 2.0;
  full.k6 = 3.0;
  // |u| = |v| = 5: 25 + 25 + 5 + 1 + 2*5 + 3*25 = 141
  CHECK(motion_power(Vec2(3.0, 4.0), Vec2(4.0, 3.0), full) ==
        doctest::Approx(141.0).epsilon(1e-15));
}

TEST_CASE("communication power pinned values") {
  CHECK(comm_power(0.0, 3.7, 0.13) == 0.0);
  CHECK(comm_power(6.0, 1.0, 1.0) == 63.0);
  CHECK(comm_power(1.0, 2.0, 0.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(comm_power(2.0, 3.0, 1.5) == doctest::Approx(6.0).epsilon(1e-15));
  // convex increasing in R for fixed s, K
  double prev = 0.0;
  double prev_inc = 0.0;
  for (int i = 1; i <= 12; ++i) {
    const double cur = comm_power(0.5 * i, 2.0, 0.13);
    const double inc = cur - prev;
    CHECK(cur > prev);
    CHECK(inc > prev_inc);
    prev = cur;
    prev_inc = inc;
  }
}

TEST_CASE("default problem matches the reference scenario") {
  ProblemSpec spec;
  CHECK(spec.source == Vec2(20.0, 40.0));
  CHECK(spec.destination == Vec2(10.0, 5.0));
  CHECK(spec.steps() == 400);
  CHECK(spec.steps(10.0) == 300);
  CHECK(spec.c == 150.0);
  CHECK(spec.mqam_k == doctest::Approx(-1.5 / std::log(1e-5)).epsilon(1e-15));
  CHECK(spec.comm_scale(0.01) == 1.0);
  CHECK(spec.motion_scale(0.01) == 0.01);
  spec.objective = ObjectiveConvention::kMotionPlusGammaComm;
  CHECK(spec.comm_scale(0.01) == 0.01);
  CHECK(spec.motion_scale(0.01) == 1.0);
  spec.objective = ObjectiveConvention::kCommPlusGammaMotion;
  spec.validate();
  MotionWeights w;
  w.validate();
}

TEST_CASE("validation rejects bad problem values") {
  auto reject = [](auto&& mutate) {
    ProblemSpec spec;
    mutate(spec);
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  };
  reject([](ProblemSpec& s) { s.t_f = 0.0; });
  reject([](ProblemSpec& s) { s.dt = -0.1; });
  reject([](ProblemSpec& s) { s.dt = 0.3; });  // 40/0.3 is not integral
  reject([](ProblemSpec& s) { s.c = -1.0; });
  reject([](ProblemSpec& s) { s.u_max = 0.0; });
  reject([](ProblemSpec& s) { s.r_max = 0.0; });
  reject([](ProblemSpec& s) { s.c1 = -1.0; });
  reject([](ProblemSpec& s) { s.mqam_k = 0.0; });
  reject([](ProblemSpec& s) { s.source = Vec2(std::nan(""), 0.0); });

  ProblemSpec spec;
  CHECK_THROWS_AS(spec.steps(40.0), ConfigError);  // empty horizon
  CHECK_THROWS_AS(spec.steps(39.99), ConfigError);  // fractional step count

  auto reject_w = [](auto&& mutate) {
    MotionWeights w;
    mutate(w);
    CHECK_THROWS_AS(w.validate(), ConfigError);
  };
  reject_w([](MotionWeights& w) { w.k1 = 0.0; });
  reject_w([](MotionWeights& w) { w.k2 = -1.0; });
  reject_w([](MotionWeights& w) { w.k6 = -0.5; });
  reject_w([](MotionWeights& w) { w.gamma = 0.0; });
}

TEST_CASE("zero controls leave a zeroed trajectory") {
  ControlTrajectory ctrl = ControlTrajectory::zeros(7, 0.25, 1.5);
  CHECK(ctrl.steps() == 7);
  CHECK(ctrl.dt == 0.25);
  CHECK(ctrl.t0 == 1.5);
  for (const Vec2& u : ctrl.u) CHECK(u.norm() == 0.0);
  for (double r : ctrl.R) CHECK(r == 0.0);
  CHECK(ctrl.feasibility_violation(0.5, 6.0) == 0.0);
}

TEST_CASE("feasibility violation measures the worst bound breach") {
  ControlTrajectory ctrl = ControlTrajectory::zeros(4, 0.1);
  CHECK(ctrl.feasibility_violation(0.5, 6.0) == 0.0);
  ctrl.u[1] = Vec2(0.6, 0.0);
  CHECK(ctrl.feasibility_violation(0.5, 6.0) ==
        doctest::Approx(0.1).epsilon(1e-12));
  ctrl.R[2] = 6.75;
  CHECK(ctrl.feasibility_violation(0.5, 6.0) ==
        doctest::Approx(0.75).epsilon(1e-12));
  ctrl.R[3] = -1.0;
  CHECK(ctrl.feasibility_violation(0.5, 6.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // exactly on the bounds is feasible
  ControlTrajectory tight = ControlTrajectory::zeros(2, 0.1);
  tight.u[0] = Vec2(0.5, 0.0);
  tight.R[0] = 6.0;
  CHECK(tight.feasibility_violation(0.5, 6.0) == 0.0);
}

TEST_CASE("euler integration matches the closed form for constant controls") {
  CostGrid grid = constant_grid(1.0);
  const double dt = 0.1;
  const int n = 50;
  const Vec2 u(0.2, -0.1);
  const double r = 1.5;
  ControlTrajectory ctrl = ControlTrajectory::zeros(n, dt);
  for (int k = 0; k < n; ++k) {
    ctrl.u[k] = u;
    ctrl.R[k] = r;
  }
  RobotState x0;
  x0.x1 = Vec2(20.0, 40.0);
  x0.x2 = Vec2(-0.2, -0.3);
  StateTrajectory traj = integrate_forward(x0, ctrl, grid);
  REQUIRE(traj.steps() == n);
  REQUIRE(static_cast<int>(traj.s.size()) == n + 1);
  for (int k = 0; k <= n; ++k) {
    const Vec2 x2 = x0.x2 + k * dt * u;
    const Vec2 x1 =
        x0.x1 + k * dt * x0.x2 + 0.5 * k * (k - 1) * dt * dt * u;
    CHECK((traj.states[k].x2 - x2).norm() <= 1e-13 * (1.0 + x2.norm()));
    CHECK((traj.states[k].x1 - x1).norm() <= 1e-12 * (1.0 + x1.norm()));
    CHECK(traj.states[k].x3 == doctest::Approx(k * dt * r).epsilon(1e-13));
  }
  CHECK(traj.clamp_events == 0);
}

TEST_CASE("transmitted bits equal dt times the rate sum") {
  CostGrid grid = constant_grid(2.5);
  const int n = 120;
  ControlTrajectory ctrl = random_controls(n, 0.1, 99);
  for (auto& u : ctrl.u) u = Vec2::Zero();  // keep the robot inside the grid
  RobotState x0;
  x0.x1 = Vec2(25.0, 25.0);
  StateTrajectory traj = integrate_forward(x0, ctrl, grid);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += ctrl.dt * ctrl.R[k];
  CHECK(traj.states[n].x3 == doctest::Approx(acc).epsilon(1e-14));
  // the running s samples track the grid at the visited positions
  for (int k = 0; k <= n; ++k) {
    CHECK(traj.s[k] ==
          doctest::Approx(s_and_grad(grid, traj.states[k].x1).s)
              .epsilon(1e-15));
  }
}

TEST_CASE("zero controls give the closed-form objective") {
  ProblemSpec spec;
  MotionWeights w;
  CostGrid grid = constant_grid(3.0);
  ControlTrajectory ctrl = ControlTrajectory::zeros(spec.steps(), spec.dt);
  RobotState x0;
  x0.x1 = spec.source;
  StateTrajectory traj = integrate_forward(x0, ctrl, grid);
  CostBreakdown cost = total_cost(traj, ctrl, w, spec, spec.c);
  // running cost is only gamma*k4 per unit time
  CHECK(cost.J_bar == doctest::Approx(w.gamma * w.k4 * spec.t_f).epsilon(1e-12));
  // |S - D|^2 = |(10, 35)|^2 = 1325, (x3 - c)^2 = 150^2
  const double terminal = spec.c1 * 1325.0 + spec.c3 * 150.0 * 150.0;
  CHECK(cost.terminal_penalty == doctest::Approx(terminal).epsilon(1e-12));
  CHECK(cost.J == doctest::Approx(238250.4).epsilon(1e-12));
}

TEST_CASE("objective matches an independent re-summation") {
  ProblemSpec spec;
  spec.t_f = 0.5;  // N = 5
  MotionWeights w;
  w.k5 = 0.3;
  w.k6 = 0.7;
  CostGrid grid = linear_grid(2.0, 0.03, -0.01);
  ControlTrajectory ctrl = random_controls(spec.steps(), spec.dt, 7);
  RobotState x0;
  x0.x1 = Vec2(20.0, 40.0);
  x0.x2 = Vec2(0.1, -0.2);
  StateTrajectory traj = integrate_forward(x0, ctrl, grid);
  const double c_bar = 0.4;

  for (ObjectiveConvention obj : {ObjectiveConvention::kCommPlusGammaMotion,
                                  ObjectiveConvention::kMotionPlusGammaComm}) {
    spec.objective = obj;
    const double cs = spec.comm_scale(w.gamma);
    const double ms = spec.motion_scale(w.gamma);
    long double run = 0.0L;
    for (int k = spec.steps() - 1; k >= 0; --k) {
      const Vec2& u = ctrl.u[k];
      const Vec2& v = traj.states[k].x2;
      const double un = u.norm(), vn = v.norm();
      const long double pm = w.k1 * un * un + w.k2 * vn * vn + w.k3 * vn +
                             w.k4 + w.k5 * un + w.k6 * un * vn;
      const long double pc =
          (std::pow(2.0, ctrl.R[k]) - 1.0) / spec.mqam_k * traj.s[k];
      run += spec.dt * (cs * pc + ms * pm);
    }
    const RobotState& xn = traj.states[spec.steps()];
    const long double term =
        spec.c1 * (xn.x1 - spec.destination).squaredNorm() +
        spec.c2 * xn.x2.squaredNorm() + spec.c3 * (xn.x3 - c_bar) * (xn.x3 - c_bar);
    CostBreakdown cost = total_cost(traj, ctrl, w, spec, c_bar);
    CHECK(cost.J_bar == doctest::Approx(static_cast<double>(run)).epsilon(1e-12));
    CHECK(cost.terminal_penalty ==
          doctest::Approx(static_cast<double>(term)).epsilon(1e-12));
    CHECK(cost.J == doctest::Approx(static_cast<double>(run + term)).epsilon(1e-12));
  }
}

TEST_CASE("running cost never drops below the idle floor") {
  ProblemSpec spec;
  spec.t_f = 4.0;
  MotionWeights w;
  CostGrid grid = constant_grid(1.7);
  RobotState x0;
  x0.x1 = Vec2(25.0, 25.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ControlTrajectory ctrl = random_controls(spec.steps(), spec.dt, seed);
    StateTrajectory traj = integrate_forward(x0, ctrl, grid);
    CostBreakdown cost = total_cost(traj, ctrl, w, spec, spec.c);
    CHECK(cost.J_bar >=
          spec.motion_scale(w.gamma) * w.k4 * spec.t_f - 1e-12);
    CHECK(cost.terminal_penalty >= 0.0);
    CHECK(cost.J >= cost.J_bar);
  }
}

TEST_CASE("leaving the workspace clamps the channel samples") {
  CostGrid grid = linear_grid(1.0, 0.1, 0.0);
  ControlTrajectory ctrl = ControlTrajectory::zeros(30, 0.5);
  RobotState x0;
  x0.x1 = Vec2(45.0, 25.0);
  x0.x2 = Vec2(1.0, 0.0);  // crosses x = 50 after ten steps
  StateTrajectory traj = integrate_forward(x0, ctrl, grid);
  CHECK(traj.clamp_events > 0);
  const double boundary = s_and_grad(grid, Vec2(50.0, 25.0)).s;
  CHECK(traj.s.back() == doctest::Approx(boundary).epsilon(1e-12));
  // clamped states still advance linearly even though s saturates
  CHECK(traj.states.back().x1.x() == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("non-finite states abort the forward pass") {
  CostGrid grid = constant_grid(1.0);
  ControlTrajectory ctrl = ControlTrajectory::zeros(5, 0.1);
  RobotState bad;
  bad.x1 = Vec2(std::nan(""), 1.0);
  CHECK_THROWS_AS(integrate_forward(bad, ctrl, grid), NumericalError);

  ctrl.u[0] = Vec2(std::numeric_limits<double>::infinity(), 0.0);
  RobotState x0;
  x0.x1 = Vec2(10.0, 10.0);
  try {
    integrate_forward(x0, ctrl, grid);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(e.module_name() == "dynamics");
  }
}
