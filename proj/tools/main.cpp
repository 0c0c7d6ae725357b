#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "commaware/config.hpp"
#include "commaware/run.hpp"
#include "commaware/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Communication-aware trajectory planner: co-optimizes a mobile robot's "
      "path, acceleration and transmission rate against a kriged channel map"};
  std::string config_path;
  std::string mode_override;
  std::string out_override;
  std::vector<std::uint64_t> seed_override;
  app.add_option("--config", config_path, "Path to the JSON configuration")
      ->required();
  app.add_option("--mode", mode_override,
                 "simulate-channel | predict | plan-offline | plan-online "
                 "(overrides the config)");
  app.add_option("--seed", seed_override,
                 "Seed(s) to run (overrides the config; repeatable)");
  app.add_option("--out", out_override,
                 "Output directory (overrides the config)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (const char* env = std::getenv("COMMAWARE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
#endif

  try {
    commaware::RunConfig cfg = commaware::load_config(config_path);
    if (!seed_override.empty()) cfg.seeds = seed_override;
    commaware::RunOptions opts;
    opts.mode = commaware::parse_mode(
        mode_override.empty() ? cfg.mode : mode_override);
    opts.out_dir = out_override.empty() ? cfg.output_dir : out_override;
    commaware::run(cfg, opts);
  } catch (const commaware::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const commaware::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
