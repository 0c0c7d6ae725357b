#pragma once

#include <cstdint>
#include <string>

#include "commaware/config.hpp"

namespace commaware {

enum class RunMode {
  kSimulateChannel,  // synthesize the field, draw measurements
  kPredict,          // + fit the predictor, rasterize posterior and cost grids
  kPlanOffline,      // + solve the control problem once
  kPlanOnline,       // + receding-horizon replanning against the true field
};

RunMode parse_mode(const std::string& name);
std::string to_string(RunMode mode);

struct RunOptions {
  RunMode mode = RunMode::kPlanOffline;
  std::string out_dir = "out";
};

/// Execute the configured mode for every seed, writing artifacts under
/// out_dir/seed_<N>/ plus manifest.json and summary.json at the top level.
/// Throws ConfigError or NumericalError; the CLI maps those to exit codes.
void run(const RunConfig& cfg, const RunOptions& opts);

}  // namespace commaware
