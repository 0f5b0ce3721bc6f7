#include "pinning/field.hpp"

#include <algorithm>
#include <limits>

#include "pinning/errors.hpp"

namespace pinning {

namespace {
constexpr double kLn2 = 0.693147180559945309417232121458176568;
constexpr int kRebalanceExponent = 512;
}  // namespace

Field::Field(Window window) : window_(std::move(window)), values_(window_.size(), 0.0) {}

Field::Field(Window window, std::vector<double> values, double log_scale)
    : window_(std::move(window)), values_(std::move(values)), log_scale_(log_scale) {
  if (values_.size() != window_.size()) throw ShapeError("Field: value count does not match window size");
  for (double v : values_)
    if (!(v >= 0) || !std::isfinite(v)) throw DomainError("Field: values must be finite and nonnegative");
}

Field Field::delta(Window window, const Point& x) {
  Field f(std::move(window));
  f.values_[f.window_.index(x)] = 1.0;
  return f;
}

Field Field::constant(Window window, double value) {
  const auto n = window.size();
  return Field(std::move(window), std::vector<double>(n, value));
}

double Field::at(const Point& x) const { return materialized(window_.index(x)); }

double Field::log_value(std::size_t index) const {
  const double v = values_[index];
  return v > 0 ? std::log(v) + log_scale_ : -std::numeric_limits<double>::infinity();
}

double Field::mantissa_sup() const noexcept {
  double m = 0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

double Field::log_sup() const noexcept {
  const double m = mantissa_sup();
  return m > 0 ? std::log(m) + log_scale_ : -std::numeric_limits<double>::infinity();
}

Field Field::normalized() const {
  const double m = mantissa_sup();
  if (!(m > 0)) throw DomainError("Field: cannot normalize an identically zero field");
  Field out(window_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] / m;
  return out;
}

void Field::rebalance() noexcept {
  const double m = mantissa_sup();
  if (!(m > 0)) return;
  int e = 0;
  std::frexp(m, &e);
  if (e > kRebalanceExponent || e < -kRebalanceExponent) {
    for (double& v : values_) v = std::ldexp(v, -e);
    log_scale_ += e * kLn2;
  }
}

double sup_distance(const Field& a, const Field& b) {
  if (!(a.window() == b.window())) throw ShapeError("sup_distance: windows differ");
  const double sa = std::exp(a.log_scale());
  const double sb = std::exp(b.log_scale());
  double d = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] * sa - b.values()[i] * sb));
  return d;
}

double max_relative_error(const Field& a, const Field& b) {
  if (!(a.window() == b.window())) throw ShapeError("max_relative_error: windows differ");
  double worst = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const bool za = a.values()[i] == 0.0;
    const bool zb = b.values()[i] == 0.0;
    if (za && zb) continue;
    if (za != zb) return 1.0;
    const double ratio = a.values()[i] / b.values()[i] * std::exp(a.log_scale() - b.log_scale());
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

}  // namespace pinning
