#include "pinning/potential.hpp"

#include <cmath>
#include <string>

#include "pinning/environment.hpp"
#include "pinning/errors.hpp"

namespace pinning {

PotentialSpec::PotentialSpec(int dim, std::map<Point, double> v0_table, double lambda_pin, double m1_bound)
    : dim_(dim), v0_(std::move(v0_table)), lambda_pin_(lambda_pin), m1_(m1_bound) {
  if (dim < 1) throw ParameterError("PotentialSpec: dimension must be >= 1");
  if (!(lambda_pin >= 0)) throw ParameterError("PotentialSpec: lambda_pin must be >= 0");
  if (!(m1_bound >= 0)) throw ParameterError("PotentialSpec: m1_bound must be >= 0");
  for (const auto& [x, v] : v0_) {
    if (static_cast<int>(x.size()) != dim)
      throw ParameterError("PotentialSpec: v0 entry " + to_string(x) + " has wrong dimension");
    if (!std::isfinite(v) || std::abs(v) > m1_bound)
      throw ParameterError("PotentialSpec: |v0" + to_string(x) + "| = " + std::to_string(std::abs(v)) +
                           " exceeds m1_bound " + std::to_string(m1_bound));
  }
  if (m0() < 0) throw ParameterError("PotentialSpec: V(0) must be nonnegative (negative pinning is not supported)");
}

double PotentialSpec::v0(const Point& x) const {
  const auto it = v0_.find(x);
  return it == v0_.end() ? 0.0 : it->second;
}

double PotentialSpec::value(const Point& x) const {
  double v = v0(x);
  if (sup_norm(x) == 0) v += lambda_pin_;
  return v;
}

double PotentialSpec::log_branching() const noexcept { return std::log(2.0 * dim_ + 1.0); }

ConditionReport check_conditions(const PotentialSpec& spec) {
  ConditionReport r;
  r.m0 = spec.m0();
  r.m1 = spec.m1();
  r.log_branching = spec.log_branching();
  r.lambda0 = (r.m0 - 3 * r.m1) / 2 - r.log_branching;
  r.lambda1 = 2 * r.m1 + r.log_branching;
  r.lambda2 = 2 * (r.m0 - r.m1 - r.log_branching);
  r.cond3_ok = r.lambda0 > 0;
  r.cond4_ok = r.lambda1 < r.lambda0;
  return r;
}

double evaluate_potential(const PotentialSpec& spec, const Environment& env, const Point& x, std::int64_t n) {
  return spec.value(x) * env.sign(n);
}

}  // namespace pinning
