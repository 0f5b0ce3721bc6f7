#include "pinning/environment.hpp"

#include <cmath>
#include <string>

#include "pinning/errors.hpp"
#include "pinning/hash.hpp"
#include "pinning/hilbert.hpp"

namespace pinning {

Environment Environment::hashed(std::uint64_t seed, std::int64_t n_lo, std::int64_t n_hi) {
  if (n_lo > n_hi) throw ParameterError("Environment: n_lo > n_hi");
  Environment e;
  e.seed_ = seed;
  e.n_lo_ = n_lo;
  e.n_hi_ = n_hi;
  return e;
}

Environment Environment::constant(int sign, std::int64_t n_lo, std::int64_t n_hi) {
  if (sign != 1 && sign != -1) throw ParameterError("Environment: constant sign must be +1 or -1");
  Environment e = hashed(0, n_lo, n_hi);
  e.constant_sign_ = sign;
  return e;
}

Environment Environment::with_overrides(const std::map<std::int64_t, int>& signs) const {
  auto merged = overrides_ ? std::map<std::int64_t, int>(*overrides_) : std::map<std::int64_t, int>{};
  for (const auto& [n, s] : signs) {
    if (s != 1 && s != -1) throw ParameterError("Environment: override sign must be +1 or -1");
    if (!covers(n)) throw RangeError("Environment: override time " + std::to_string(n) + " outside range");
    merged[offset_ + n] = s;
  }
  Environment e = *this;
  e.overrides_ = std::make_shared<const std::map<std::int64_t, int>>(std::move(merged));
  return e;
}

int Environment::sign(std::int64_t n) const {
  if (!covers(n))
    throw RangeError("Environment: time " + std::to_string(n) + " outside [" + std::to_string(n_lo_) + ", " +
                     std::to_string(n_hi_) + "]");
  const std::int64_t t = offset_ + n;
  if (overrides_) {
    const auto it = overrides_->find(t);
    if (it != overrides_->end()) return it->second;
  }
  if (constant_sign_ != 0) return constant_sign_;
  return (counter_hash(seed_, t) & 1U) ? 1 : -1;
}

Environment Environment::shift(std::int64_t k) const {
  Environment e = *this;
  e.offset_ = offset_ + k;
  e.n_lo_ = n_lo_ - k;
  e.n_hi_ = n_hi_ - k;
  return e;
}

Environment sample_environment(std::uint64_t seed, std::int64_t n_lo, std::int64_t n_hi) {
  return Environment::hashed(seed, n_lo, n_hi);
}

Environment shift(const Environment& env, std::int64_t k) { return env.shift(k); }

double xi(const Environment& env, const PotentialSpec& spec, std::int64_t m) {
  return env.sign(m) == 1 ? spec.m0() : -spec.m1();
}

namespace {

void check_lambda(const PotentialSpec& spec, double lambda) {
  const auto report = check_conditions(spec);
  if (!(lambda > 0) || !(lambda < report.lambda0))
    throw ParameterError("lambda must lie in (0, lambda0) with lambda0 = " + std::to_string(report.lambda0));
}

// Largest k in [1, horizon] where the partial-sum inequality fails, 0 if none.
int last_failure(const Environment& env, const PotentialSpec& spec, double lambda, Direction direction,
                 int horizon) {
  const double rate = spec.log_branching() + spec.m1() + lambda;
  double sum = 0;
  int last = 0;
  for (int k = 1; k <= horizon; ++k) {
    const std::int64_t m = direction == Direction::forward ? k : -k + 1;
    sum += xi(env, spec, m);
    if (!(sum > k * rate)) last = k;
  }
  return last;
}

// nu == 1 check with early exit.
bool nu_is_one(const Environment& env, const PotentialSpec& spec, double lambda, Direction direction,
               int horizon) {
  const double rate = spec.log_branching() + spec.m1() + lambda;
  double sum = 0;
  for (int k = 1; k <= horizon; ++k) {
    const std::int64_t m = direction == Direction::forward ? k : -k + 1;
    sum += xi(env, spec, m);
    if (!(sum > k * rate)) return false;
  }
  return true;
}

}  // namespace

std::optional<int> estimate_nu(const Environment& env, const PotentialSpec& spec, double lambda,
                               Direction direction, int horizon) {
  check_lambda(spec, lambda);
  if (horizon < 1) throw ParameterError("estimate_nu: horizon must be >= 1");
  const int last = last_failure(env, spec, lambda, direction, horizon);
  if (last == horizon) return std::nullopt;
  return last + 1;
}

RegenerationReport find_regeneration_times(const Environment& env, const PotentialSpec& spec, double lambda, int r,
                                           int count, int horizon, const RegenerationOptions& options) {
  check_lambda(spec, lambda);
  if (r < 1) throw ParameterError("find_regeneration_times: r must be >= 1");
  if (count < 1) throw ParameterError("find_regeneration_times: count must be >= 1");
  if (horizon < 0) throw ParameterError("find_regeneration_times: horizon must be >= 0");
  if (options.nu_horizon < 1) throw ParameterError("find_regeneration_times: nu_horizon must be >= 1");
  if (!(options.k1_hat >= 0.5)) throw ParameterError("find_regeneration_times: k1_hat must be >= 1/2");

  RegenerationReport report;
  report.r = r;
  report.horizon = horizon;
  report.nu_horizon = options.nu_horizon;
  report.k1_hat = options.k1_hat;
  report.min_spacing = 2 * n0_threshold(lambda, r, 2 * options.k1_hat);

  std::optional<std::int64_t> previous;
  for (std::int64_t t = 0; t >= -static_cast<std::int64_t>(horizon); --t) {
    if (previous && !(static_cast<double>(*previous - t) > report.min_spacing)) continue;
    bool pluses = true;
    for (std::int64_t n = t - r + 1; n <= t + r && pluses; ++n) pluses = env.sign(n) == 1;
    if (!pluses) continue;
    if (!nu_is_one(env.shift(t + r), spec, lambda, Direction::forward, options.nu_horizon)) continue;
    if (!nu_is_one(env.shift(t - r), spec, lambda, Direction::backward, options.nu_horizon)) continue;
    report.times.push_back(t);
    report.nu_plus_at.push_back(1);
    report.nu_minus_at.push_back(1);
    previous = t;
    if (static_cast<int>(report.times.size()) == count) break;
  }
  report.complete = static_cast<int>(report.times.size()) == count;
  return report;
}

PathSegment optimal_path(const Environment& env, int dim, std::int64_t n1, std::int64_t n2) {
  if (!(n1 < n2)) throw ParameterError("optimal_path: requires n1 < n2");
  PathSegment seg;
  seg.n1 = n1;
  seg.n2 = n2;
  seg.positions.reserve(static_cast<std::size_t>(n2 - n1 + 1));
  seg.positions.push_back({});
  for (std::int64_t n = n1 + 1; n <= n2; ++n)
    seg.positions.push_back(env.sign(n) == 1 ? origin(dim) : unit_e1(dim));
  seg.positions[0] = seg.positions[1];
  return seg;
}

}  // namespace pinning
