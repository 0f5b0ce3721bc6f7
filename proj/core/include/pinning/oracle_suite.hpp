#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinning {

struct OracleSuiteOptions {
  int instances = 100;  // half in d = 1 (R <= 3, length <= 6), half in d = 2 (R <= 2, length <= 4)
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  bool include_sampler = true;
  int sampler_draws = 30000;
  double sampler_significance = 0.001;
  /// Test hook: perturb every transfer-range result by a relative 1e-9.
  bool corrupt_transfer = false;
};

struct OracleMismatch {
  int instance = 0;
  std::string check;
  double error = 0;
  std::string dump;  // instance parameters
};

struct OracleSuiteReport {
  int instances = 0;
  double max_transfer_error = 0;
  double max_partition_error = 0;  // partition function through T vs enumeration
  double max_path_probability_error = 0;
  double max_marginal_error = 0;
  double max_error = 0;
  bool sampler_run = false;
  double sampler_p_value = 1;
  bool vacuous = false;  // zero instances requested
  bool passed = true;
  std::vector<OracleMismatch> mismatches;
};

/// Randomized comparison of transfer ranges, partition functions, Gibbs path
/// probabilities and marginals against brute-force path enumeration, plus a
/// chi-square check of the exact sampler on a three-path instance.
OracleSuiteReport run_oracle_suite(const OracleSuiteOptions& options);

}  // namespace pinning
