#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pinning/lattice.hpp"
#include "pinning/potential.hpp"

namespace pinning {

/// The sign sequence omega_n = B_n(omega) in {-1, +1}, answered on a finite
/// time range. Values are a pure function of (seed, origin_offset + n), so an
/// Environment is an immutable value that can be shared freely.
///
/// Sign formula for the hashed source:
///   z = seed + t * 0x9E3779B97F4A7C15 (mod 2^64), t = origin_offset + n
///   z = mix64(z); sign = (z & 1) ? +1 : -1
class Environment {
 public:
  static Environment hashed(std::uint64_t seed, std::int64_t n_lo, std::int64_t n_hi);
  /// Every sign equal to `sign` (deterministic controls such as the all-plus case).
  static Environment constant(int sign, std::int64_t n_lo, std::int64_t n_hi);

  /// Copy with individual signs replaced; keys are times relative to this environment.
  Environment with_overrides(const std::map<std::int64_t, int>& signs) const;

  /// Throws RangeError outside [n_lo, n_hi].
  int sign(std::int64_t n) const;
  bool covers(std::int64_t n) const noexcept { return n >= n_lo_ && n <= n_hi_; }

  /// theta^k: the returned environment answers sign'(n) = sign(k + n).
  Environment shift(std::int64_t k) const;

  std::int64_t n_lo() const noexcept { return n_lo_; }
  std::int64_t n_hi() const noexcept { return n_hi_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t origin_offset() const noexcept { return offset_; }
  bool is_constant() const noexcept { return constant_sign_ != 0; }

 private:
  Environment() = default;

  std::uint64_t seed_ = 0;
  std::int64_t offset_ = 0;
  std::int64_t n_lo_ = 0;
  std::int64_t n_hi_ = 0;
  int constant_sign_ = 0;  // 0 = hashed source
  // keyed by absolute counter origin_offset + n
  std::shared_ptr<const std::map<std::int64_t, int>> overrides_;
};

Environment sample_environment(std::uint64_t seed, std::int64_t n_lo, std::int64_t n_hi);
Environment shift(const Environment& env, std::int64_t k);

/// xi_m = M0 if omega_m = +1, -M1 if omega_m = -1.
double xi(const Environment& env, const PotentialSpec& spec, std::int64_t m);

enum class Direction { forward, backward };

/// Finite-horizon stand-in for nu^+ (forward) / nu^- (backward): the smallest
/// nu in [1, horizon] with S_k > k (ln(2d+1) + M1 + lambda) for every
/// k in [nu, horizon], where S_k sums xi over m in [1, k] (forward) or
/// [-k+1, 0] (backward). std::nullopt means no such nu within the horizon.
/// Throws ParameterError unless 0 < lambda < lambda0 and horizon >= 1.
std::optional<int> estimate_nu(const Environment& env, const PotentialSpec& spec, double lambda,
                               Direction direction, int horizon);

struct RegenerationOptions {
  /// Stand-in for the existential constant K1 in the spacing condition.
  double k1_hat = 1.0;
  /// Horizon used when certifying nu = 1 at a candidate time.
  int nu_horizon = 1000;
};

struct RegenerationReport {
  int r = 1;
  std::vector<std::int64_t> times;  // n_1 > n_2 > ...
  std::vector<int> nu_plus_at;
  std::vector<int> nu_minus_at;
  int horizon = 0;     // search range [-horizon, 0]
  int nu_horizon = 0;  // certification range for nu
  double k1_hat = 1.0;
  double min_spacing = 0;  // 2 * n0(lambda, r, 2 K1_hat); consecutive times differ by more
  bool complete = false;   // `count` times were found
};

/// Scans t = 0, -1, -2, ..., -horizon for times with omega = +1 on
/// (t - r, t + r], nu^+(theta^{t+r} omega) = 1, nu^-(theta^{t-r} omega) = 1,
/// and spacing from the previously accepted time greater than min_spacing.
RegenerationReport find_regeneration_times(const Environment& env, const PotentialSpec& spec, double lambda, int r,
                                           int count, int horizon, const RegenerationOptions& options = {});

/// gamma*(n) = 0 where omega_n = +1 and e_1 where omega_n = -1 for n in
/// (n1, n2]; gamma*(n1) repeats gamma*(n1 + 1).
PathSegment optimal_path(const Environment& env, int dim, std::int64_t n1, std::int64_t n2);

}  // namespace pinning
