#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace commaware {

using Vec2 = Eigen::Vector2d;

/// Raised when a configuration value or a call precondition is invalid.
/// The message names the offending field or argument.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical step fails (factorization breakdown, NaN states).
/// The message names the module and step that failed.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& module, const std::string& step)
      : std::runtime_error(module + ": " + step), module_(module) {}
  const std::string& module_name() const { return module_; }

 private:
  std::string module_;
};

/// SplitMix64 step; derives independent seed streams from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace commaware
