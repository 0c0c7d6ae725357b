#include "commaware/config.hpp"

#include <set>

#include "commaware/artifacts.hpp"
#include "commaware/run.hpp"
#include "json.hpp"

namespace commaware {

namespace {

using nlohmann::json;

/// Typed accessor over one JSON object that tracks which keys were read and
/// rejects leftovers, so misspelled configuration keys fail loudly.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_ + " must be a JSON object");
    }
  }

  double number(const char* key, double fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(dotted(key) + " must be a number");
    return v.get<double>();
  }

  int integer(const char* key, int fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) {
      throw ConfigError(dotted(key) + " must be an integer");
    }
    return v.get<int>();
  }

  bool boolean(const char* key, bool fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(dotted(key) + " must be a boolean");
    return v.get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(dotted(key) + " must be a string");
    return v.get<std::string>();
  }

  Vec2 vec2(const char* key, const Vec2& fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
      throw ConfigError(dotted(key) + " must be an array of two numbers");
    }
    return Vec2(v[0].get<double>(), v[1].get<double>());
  }

  std::vector<double> number_list(const char* key,
                                  const std::vector<double>& fallback) {
    if (!mark(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(dotted(key) + " must be an array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) {
        throw ConfigError(dotted(key) + " must contain only numbers");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::uint64_t> seed_list(const char* key,
                                       const std::vector<std::uint64_t>& fb) {
    if (!mark(key)) return fb;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(dotted(key) + " must be an array");
    std::vector<std::uint64_t> out;
    for (const json& e : v) {
      if (!e.is_number_integer() || (e.is_number_integer() && e.get<long long>() < 0)) {
        throw ConfigError(dotted(key) + " must contain non-negative integers");
      }
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }

  const json* child(const char* key) {
    if (!mark(key)) return nullptr;
    return &j_.at(key);
  }

  bool present(const char* key) const { return j_.contains(key); }

  void reject_unknown() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

 private:
  bool mark(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  std::string dotted(const char* key) const { return path_ + "." + key; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_channel(const json& j, ChannelParams& out) {
  StrictObject o(j, "channel");
  out.k_pl = o.number("k_pl", out.k_pl);
  out.n_pl = o.number("n_pl", out.n_pl);
  out.xi_db = o.number("xi_db", out.xi_db);
  out.eta = o.number("eta", out.eta);
  out.rho_db = o.number("rho_db", out.rho_db);
  out.noise_floor_dbm = o.number("noise_floor_dbm", out.noise_floor_dbm);
  out.ber_threshold = o.number("ber_threshold", out.ber_threshold);
  o.reject_unknown();
}

void parse_workspace(const json& j, Workspace& out) {
  StrictObject o(j, "workspace");
  out.x_min = o.number("x_min", out.x_min);
  out.x_max = o.number("x_max", out.x_max);
  out.y_min = o.number("y_min", out.y_min);
  out.y_max = o.number("y_max", out.y_max);
  out.base_station = o.vec2("base_station", out.base_station);
  o.reject_unknown();
}

void parse_problem(const json& j, ProblemSpec& out) {
  StrictObject o(j, "problem");
  out.source = o.vec2("source", out.source);
  out.destination = o.vec2("destination", out.destination);
  out.t_f = o.number("t_f", out.t_f);
  out.dt = o.number("dt", out.dt);
  out.c = o.number("c", out.c);
  out.u_max = o.number("u_max", out.u_max);
  out.r_max = o.number("r_max", out.r_max);
  out.c1 = o.number("c1", out.c1);
  out.c2 = o.number("c2", out.c2);
  out.c3 = o.number("c3", out.c3);
  out.mqam_k = o.number("mqam_k", out.mqam_k);
  const std::string convention =
      o.text("objective", out.objective == ObjectiveConvention::kCommPlusGammaMotion
                              ? "comm_plus_gamma_motion"
                              : "motion_plus_gamma_comm");
  if (convention == "comm_plus_gamma_motion") {
    out.objective = ObjectiveConvention::kCommPlusGammaMotion;
  } else if (convention == "motion_plus_gamma_comm") {
    out.objective = ObjectiveConvention::kMotionPlusGammaComm;
  } else {
    throw ConfigError(
        "problem.objective must be comm_plus_gamma_motion or "
        "motion_plus_gamma_comm");
  }
  o.reject_unknown();
}

void parse_weights(const json& j, MotionWeights& out) {
  StrictObject o(j, "weights");
  out.k1 = o.number("k1", out.k1);
  out.k2 = o.number("k2", out.k2);
  out.k3 = o.number("k3", out.k3);
  out.k4 = o.number("k4", out.k4);
  out.k5 = o.number("k5", out.k5);
  out.k6 = o.number("k6", out.k6);
  out.gamma = o.number("gamma", out.gamma);
  o.reject_unknown();
}

void parse_solver(const json& j, SolverParams& out) {
  StrictObject o(j, "solver");
  out.alpha = o.number("alpha", out.alpha);
  out.beta = o.number("beta", out.beta);
  out.max_iters = o.integer("max_iters", out.max_iters);
  out.armijo_cap = o.integer("armijo_cap", out.armijo_cap);
  out.theta_tol = o.number("theta_tol", out.theta_tol);
  out.eps_v = o.number("eps_v", out.eps_v);
  o.reject_unknown();
}

void parse_predictor(const json& j, PredictorParams& out) {
  StrictObject o(j, "predictor");
  out.xi_hat = o.number("xi_hat", out.xi_hat);
  out.eta_hat = o.number("eta_hat", out.eta_hat);
  out.rho_hat = o.number("rho_hat", out.rho_hat);
  out.noise_floor_dbm = o.number("noise_floor_dbm", out.noise_floor_dbm);
  o.reject_unknown();
}

void parse_online(const json& j, OnlineParams& out) {
  StrictObject o(j, "online");
  out.replan_times = o.number_list("replan_times", out.replan_times);
  out.samples_per_cycle = o.integer("samples_per_cycle", out.samples_per_cycle);
  out.sample_near_robot = o.boolean("sample_near_robot", out.sample_near_robot);
  out.sample_radius = o.number("sample_radius", out.sample_radius);
  o.reject_unknown();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  StrictObject o(j, "config");
  cfg.mode = o.text("mode", cfg.mode);
  cfg.output_dir = o.text("output_dir", cfg.output_dir);
  if (const json* c = o.child("channel")) parse_channel(*c, cfg.channel);
  if (const json* c = o.child("workspace")) parse_workspace(*c, cfg.workspace);
  cfg.resolution = o.number("resolution", cfg.resolution);
  cfg.node_cap = o.integer("node_cap", cfg.node_cap);
  // The MQAM constant tracks the configured bit error rate unless pinned
  // explicitly inside "problem".
  cfg.problem.mqam_k = cfg.channel.mqam_constant();
  if (const json* c = o.child("problem")) parse_problem(*c, cfg.problem);
  if (const json* c = o.child("weights")) parse_weights(*c, cfg.weights);
  if (const json* c = o.child("solver")) parse_solver(*c, cfg.solver);
  if (const json* c = o.child("predictor")) parse_predictor(*c, cfg.predictor);
  if (const json* c = o.child("online")) parse_online(*c, cfg.online);
  cfg.initial_samples = o.integer("initial_samples", cfg.initial_samples);
  cfg.seeds = o.seed_list("seeds", cfg.seeds);
  o.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

void RunConfig::validate() const {
  parse_mode(mode);
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  channel.validate();
  workspace.validate();
  if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (node_cap < 1) throw ConfigError("node_cap must be at least 1");
  problem.validate();
  weights.validate();
  solver.validate();
  predictor.validate();
  online.validate(problem);
  if (initial_samples < 2) {
    throw ConfigError("initial_samples must be at least 2");
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["mode"] = cfg.mode;
  j["output_dir"] = cfg.output_dir;
  j["channel"] = {{"k_pl", cfg.channel.k_pl},
                  {"n_pl", cfg.channel.n_pl},
                  {"xi_db", cfg.channel.xi_db},
                  {"eta", cfg.channel.eta},
                  {"rho_db", cfg.channel.rho_db},
                  {"noise_floor_dbm", cfg.channel.noise_floor_dbm},
                  {"ber_threshold", cfg.channel.ber_threshold}};
  j["workspace"] = {
      {"x_min", cfg.workspace.x_min},
      {"x_max", cfg.workspace.x_max},
      {"y_min", cfg.workspace.y_min},
      {"y_max", cfg.workspace.y_max},
      {"base_station",
       {cfg.workspace.base_station.x(), cfg.workspace.base_station.y()}}};
  j["resolution"] = cfg.resolution;
  j["node_cap"] = cfg.node_cap;
  j["problem"] = {
      {"source", {cfg.problem.source.x(), cfg.problem.source.y()}},
      {"destination",
       {cfg.problem.destination.x(), cfg.problem.destination.y()}},
      {"t_f", cfg.problem.t_f},
      {"dt", cfg.problem.dt},
      {"c", cfg.problem.c},
      {"u_max", cfg.problem.u_max},
      {"r_max", cfg.problem.r_max},
      {"c1", cfg.problem.c1},
      {"c2", cfg.problem.c2},
      {"c3", cfg.problem.c3},
      {"mqam_k", cfg.problem.mqam_k},
      {"objective",
       cfg.problem.objective == ObjectiveConvention::kCommPlusGammaMotion
           ? "comm_plus_gamma_motion"
           : "motion_plus_gamma_comm"}};
  j["weights"] = {{"k1", cfg.weights.k1}, {"k2", cfg.weights.k2},
                  {"k3", cfg.weights.k3}, {"k4", cfg.weights.k4},
                  {"k5", cfg.weights.k5}, {"k6", cfg.weights.k6},
                  {"gamma", cfg.weights.gamma}};
  j["solver"] = {{"alpha", cfg.solver.alpha},
                 {"beta", cfg.solver.beta},
                 {"max_iters", cfg.solver.max_iters},
                 {"armijo_cap", cfg.solver.armijo_cap},
                 {"theta_tol", cfg.solver.theta_tol},
                 {"eps_v", cfg.solver.eps_v}};
  j["predictor"] = {{"xi_hat", cfg.predictor.xi_hat},
                    {"eta_hat", cfg.predictor.eta_hat},
                    {"rho_hat", cfg.predictor.rho_hat},
                    {"noise_floor_dbm", cfg.predictor.noise_floor_dbm}};
  j["online"] = {{"replan_times", cfg.online.replan_times},
                 {"samples_per_cycle", cfg.online.samples_per_cycle},
                 {"sample_near_robot", cfg.online.sample_near_robot},
                 {"sample_radius", cfg.online.sample_radius}};
  j["initial_samples"] = cfg.initial_samples;
  j["seeds"] = cfg.seeds;
  return j.dump(2) + "\n";
}

}  // namespace commaware
