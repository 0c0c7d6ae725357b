#include "commaware/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace commaware {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, std::uint64_t seed,
                          const StateTrajectory& traj,
                          const ControlTrajectory& ctrl,
                          const CostBreakdown& cost, const MotionWeights& w,
                          const ProblemSpec& spec) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "seed,t0,J,J_bar\n"
      << seed << ',' << format_double(ctrl.t0) << ',' << format_double(cost.J)
      << ',' << format_double(cost.J_bar) << '\n';
  out << "t,x,y,vx,vy,x3,ux,uy,R,s,P_m,P_c\n";
  const int n = ctrl.steps();
  for (int k = 0; k <= n; ++k) {
    const RobotState& x = traj.states[k];
    const Vec2 u = k < n ? ctrl.u[k] : Vec2(0.0, 0.0);
    const double r = k < n ? ctrl.R[k] : 0.0;
    out << format_double(ctrl.t0 + k * ctrl.dt) << ','
        << format_double(x.x1.x()) << ',' << format_double(x.x1.y()) << ','
        << format_double(x.x2.x()) << ',' << format_double(x.x2.y()) << ','
        << format_double(x.x3) << ',' << format_double(u.x()) << ','
        << format_double(u.y()) << ',' << format_double(r) << ','
        << format_double(traj.s[k]) << ','
        << format_double(motion_power(u, x.x2, w)) << ','
        << format_double(comm_power(r, traj.s[k], spec.mqam_k)) << '\n';
  }
  if (!out) throw ConfigError("failed writing " + path);
}

namespace {

std::vector<double> split_numbers(const std::string& line,
                                  const std::string& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      row.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError(path + ": malformed number '" + cell + "'");
    }
  }
  return row;
}

}  // namespace

TrajectoryFile read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "seed,t0,J,J_bar") {
    throw ConfigError(path + ": expected metadata header seed,t0,J,J_bar");
  }
  if (!std::getline(in, line)) throw ConfigError(path + ": missing metadata row");
  const std::vector<double> meta = split_numbers(line, path);
  if (meta.size() != 4) throw ConfigError(path + ": metadata row must have 4 values");
  if (!std::getline(in, line) || line != "t,x,y,vx,vy,x3,ux,uy,R,s,P_m,P_c") {
    throw ConfigError(path + ": expected trajectory column header");
  }
  TrajectoryFile file;
  file.seed = static_cast<std::uint64_t>(meta[0]);
  file.t0 = meta[1];
  file.J = meta[2];
  file.J_bar = meta[3];

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row = split_numbers(line, path);
    if (row.size() != 12) {
      throw ConfigError(path + ": expected 12 columns per trajectory row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ConfigError(path + ": too few trajectory rows");
  const int n = static_cast<int>(rows.size()) - 1;
  const double dt = (rows.back()[0] - rows.front()[0]) / n;

  file.traj.dt = dt;
  file.traj.t0 = file.t0;
  file.ctrl.dt = dt;
  file.ctrl.t0 = file.t0;
  for (int k = 0; k <= n; ++k) {
    RobotState x;
    x.x1 = Vec2(rows[k][1], rows[k][2]);
    x.x2 = Vec2(rows[k][3], rows[k][4]);
    x.x3 = rows[k][5];
    file.traj.states.push_back(x);
    file.traj.s.push_back(rows[k][9]);
    if (k < n) {
      file.ctrl.u.emplace_back(rows[k][6], rows[k][7]);
      file.ctrl.R.push_back(rows[k][8]);
    }
  }
  return file;
}

void write_iteration_log_csv(const std::string& path,
                             const std::vector<IterationRecord>& log) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << "iter,J,J_bar,theta,lambda,armijo_j\n";
  for (const IterationRecord& rec : log) {
    out << rec.iter << ',' << format_double(rec.J) << ','
        << format_double(rec.J_bar) << ',' << format_double(rec.theta) << ','
        << format_double(rec.lambda) << ',' << rec.armijo_j << '\n';
  }
  if (!out) throw ConfigError("failed writing " + path);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) {
    throw ConfigError("cannot create directory " + path + ": " + ec.message());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw ConfigError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace commaware
