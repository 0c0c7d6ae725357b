#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commaware/channel.hpp"
#include "commaware/dynamics.hpp"
#include "commaware/planner.hpp"
#include "commaware/solver.hpp"
#include "commaware/types.hpp"

namespace commaware {

/// Everything a run needs, with defaults matching the reference scenario.
/// JSON keys mirror the member names; unknown keys are rejected.
struct RunConfig {
  std::string mode = "plan-offline";
  std::string output_dir = "out";
  ChannelParams channel;
  Workspace workspace;
  double resolution = 0.5;
  int node_cap = 40000;
  ProblemSpec problem;
  MotionWeights weights;
  SolverParams solver;
  PredictorParams predictor;
  OnlineParams online;
  int initial_samples = 100;
  std::vector<std::uint64_t> seeds{1};

  void validate() const;

  std::uint64_t field_seed(std::uint64_t seed) const { return seed; }
  std::uint64_t measurement_seed(std::uint64_t seed) const {
    return mix_seed(seed, 1);
  }
};

/// Parse a JSON document (strict: unknown keys and wrong types throw
/// ConfigError). Missing keys keep their defaults.
RunConfig parse_config(const std::string& json_text);

RunConfig load_config(const std::string& path);

/// Serialize the fully resolved configuration, defaults included.
std::string config_to_json(const RunConfig& cfg);

}  // namespace commaware
