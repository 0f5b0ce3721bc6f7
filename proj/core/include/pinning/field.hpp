#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "pinning/lattice.hpp"

namespace pinning {

/// Nonnegative function on a window, stored as mantissa values times
/// exp(log_scale). Rebalancing only ever multiplies by powers of two, so it
/// is exact.
class Field {
 public:
  explicit Field(Window window);
  Field(Window window, std::vector<double> values, double log_scale = 0.0);

  static Field delta(Window window, const Point& x);
  static Field constant(Window window, double value);

  const Window& window() const noexcept { return window_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double log_scale() const noexcept { return log_scale_; }
  void set_log_scale(double s) noexcept { log_scale_ = s; }

  /// Materialized value mantissa * exp(log_scale).
  double at(const Point& x) const;
  double materialized(std::size_t index) const { return values_[index] * std::exp(log_scale_); }
  /// ln of the materialized value; -inf for zero entries.
  double log_value(std::size_t index) const;

  double mantissa_sup() const noexcept;
  /// ln of the sup norm of the materialized field; -inf when identically zero.
  double log_sup() const noexcept;
  bool is_zero() const noexcept { return mantissa_sup() == 0.0; }

  /// Copy scaled so that sup = 1 and log_scale = 0. Throws DomainError when zero.
  Field normalized() const;

  /// Rescale mantissas by a power of two so the sup lies in [2^-512, 2^512].
  void rebalance() noexcept;

 private:
  Window window_;
  std::vector<double> values_;
  double log_scale_ = 0.0;
};

/// sup_x |a(x) - b(x)| of materialized values; windows must match.
double sup_distance(const Field& a, const Field& b);

/// max over x of |a(x) - b(x)| / |b(x)| on entries where either is nonzero;
/// an entry that is zero in exactly one field counts as relative error 1.
double max_relative_error(const Field& a, const Field& b);

}  // namespace pinning
