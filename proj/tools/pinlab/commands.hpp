#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pinlab/config.hpp"

namespace pinlab {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNonConvergence = 3, kOracleMismatch = 4 };

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

using OutDir = std::optional<std::filesystem::path>;

int cmd_check(const ExperimentConfig& config, const OutDir& out, Streams io);
int cmd_eigen(const ExperimentConfig& config, const std::filesystem::path& out, Streams io);
int cmd_lyapunov(const ExperimentConfig& config, int horizon, const std::filesystem::path& out, Streams io);
int cmd_gibbs_marginal(const ExperimentConfig& config, int n, int m, const std::filesystem::path& out, Streams io);
int cmd_gibbs_boundary(const ExperimentConfig& config, int l, int m, const std::filesystem::path& out, Streams io);
int cmd_gibbs_uniqueness(const ExperimentConfig& config, int l, int m1, int m2, int probe_r,
                         const std::filesystem::path& out, Streams io);
int cmd_gibbs_sample(const ExperimentConfig& config, int count, int m, const std::filesystem::path& out, Streams io);
int cmd_hilbert(const ExperimentConfig& config, int r, int intervals, int horizon, const std::filesystem::path& out,
                Streams io);

struct OracleFlags {
  int budget = 100;
  bool corrupt_transfer = false;  // test hook
};
int cmd_oracle(const ExperimentConfig& config, const OracleFlags& flags, const std::filesystem::path& out, Streams io);

}  // namespace pinlab
