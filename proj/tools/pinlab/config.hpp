#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <pinning/environment.hpp>
#include <pinning/potential.hpp>

namespace pinlab {

/// Malformed or invalid configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int dimension = 1;
  int window_radius = 1;
  double lambda_pin = 0;
  std::map<pinning::Point, double> v0_entries;
  double m1_bound = 0;
  std::uint64_t seed = 0;
  std::optional<double> lambda;  // localization target; defaults to 0.9 lambda0
  double tol_sup = 1e-10;
  int max_depth = 4096;
  bool all_plus = false;  // replace the hashed signs by omega = +1
  int nu_horizon = 1000;
  double k1_hat = 1.0;

  std::string raw;          // file contents, hashed for provenance
  std::string config_hash;  // FNV-1a 64, hex

  pinning::PotentialSpec spec() const;
  pinning::Environment environment() const;
  pinning::Window window() const { return {dimension, window_radius}; }
  double lambda_or_default(const pinning::ConditionReport& report) const {
    return lambda.value_or(0.9 * report.lambda0);
  }
};

/// Parses a JSON document. Errors carry the line number or the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Half-width of the time range served by configured environments.
inline constexpr std::int64_t kEnvironmentSpan = std::int64_t{1} << 40;

}  // namespace pinlab
