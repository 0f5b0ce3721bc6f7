#pragma once

#include <cstdint>
#include <map>

#include "pinning/lattice.hpp"

namespace pinning {

class Environment;

/// V(x) = V0(x) + Lambda * delta_0(x) on Z^d. V0 is a finite table with
/// default 0; m1_bound is the declared bound on |V0| (and on |V| away from 0).
class PotentialSpec {
 public:
  /// Throws ParameterError when d < 1, Lambda < 0, M1 < 0, |V0| > M1
  /// somewhere in the table, a table key has the wrong dimension, or V(0) < 0.
  PotentialSpec(int dim, std::map<Point, double> v0_table, double lambda_pin, double m1_bound);

  int dim() const noexcept { return dim_; }
  double lambda_pin() const noexcept { return lambda_pin_; }
  double m1() const noexcept { return m1_; }
  /// M0 = V(0).
  double m0() const noexcept { return v0(origin(dim_)) + lambda_pin_; }
  const std::map<Point, double>& v0_table() const noexcept { return v0_; }

  double v0(const Point& x) const;
  double value(const Point& x) const;

  /// ln(2d+1), the entropy per lazy step.
  double log_branching() const noexcept;

 private:
  int dim_;
  std::map<Point, double> v0_;
  double lambda_pin_;
  double m1_;
};

struct ConditionReport {
  double m0 = 0;
  double m1 = 0;
  double lambda0 = 0;
  double lambda1 = 0;
  double lambda2 = 0;
  bool cond3_ok = false;  // lambda0 > 0
  bool cond4_ok = false;  // lambda1 < lambda0

  bool ok() const noexcept { return cond3_ok && cond4_ok; }
  /// (M0 - M1)/2 - M1 - ln(2d+1) - lambda, the large-deviation margin.
  double epsilon_of(double lambda) const noexcept { return (m0 - m1) / 2 - m1 - log_branching - lambda; }

  double log_branching = 0;
};

ConditionReport check_conditions(const PotentialSpec& spec);

/// phi_n(x) = V(x) * omega_n.
double evaluate_potential(const PotentialSpec& spec, const Environment& env, const Point& x, std::int64_t n);

}  // namespace pinning
