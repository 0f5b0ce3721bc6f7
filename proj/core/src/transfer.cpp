#include "pinning/transfer.hpp"

#include <cmath>
#include <string>

#include "pinning/errors.hpp"

namespace pinning {

double ScaledValue::log() const {
  return mantissa > 0 ? std::log(mantissa) + log_scale : -std::numeric_limits<double>::infinity();
}

double ScaledValue::value() const { return mantissa * std::exp(log_scale); }

Propagator::Propagator(PotentialSpec spec, Environment env, Window window)
    : spec_(std::move(spec)), env_(std::move(env)), window_(std::move(window)) {
  if (window_.dim() != spec_.dim()) throw ShapeError("Propagator: window and potential dimensions differ");
  const double inv_branch = 1.0 / (2.0 * spec_.dim() + 1.0);
  weight_plus_.resize(window_.size());
  weight_minus_.resize(window_.size());
  for (std::size_t i = 0; i < window_.size(); ++i) {
    const double v = spec_.value(window_.point(i));
    weight_plus_[i] = std::exp(v) * inv_branch;
    weight_minus_[i] = std::exp(-v) * inv_branch;
  }
}

const std::vector<double>& Propagator::weights(std::int64_t time) const {
  return env_.sign(time) == 1 ? weight_plus_ : weight_minus_;
}

Field Propagator::step(const Field& f, std::int64_t n) const {
  if (!(f.window() == window_)) throw ShapeError("Propagator: field window differs from operator window");
  const auto& w = weights(n + 1);
  const auto in = f.values();
  Field out(window_);
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    double s = 0;
    for (auto j : window_.neighbors(i)) s += in[j];
    dst[i] = w[i] * s;
  }
  out.set_log_scale(f.log_scale());
  out.rebalance();
  return out;
}

Field Propagator::range(const Field& f, std::int64_t n1, std::int64_t n2) const {
  if (n1 > n2) throw ParameterError("Propagator::range: n1 > n2");
  Field g = f;
  for (std::int64_t n = n1; n < n2; ++n) g = step(g, n);
  return g;
}

Field Propagator::adjoint_step(const Field& f, std::int64_t n) const {
  if (!(f.window() == window_)) throw ShapeError("Propagator: field window differs from operator window");
  const auto& w = weights(n + 1);
  const auto in = f.values();
  std::vector<double> weighted(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) weighted[i] = w[i] * in[i];
  Field out(window_);
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    double s = 0;
    for (auto j : window_.neighbors(i)) s += weighted[j];
    dst[i] = s;
  }
  out.set_log_scale(f.log_scale());
  out.rebalance();
  return out;
}

Field Propagator::adjoint_range(const Field& f, std::int64_t n1, std::int64_t n2) const {
  if (n1 > n2) throw ParameterError("Propagator::adjoint_range: n1 > n2");
  Field g = f;
  for (std::int64_t n = n2 - 1; n >= n1; --n) g = adjoint_step(g, n);
  return g;
}

double path_energy(const PathSegment& seg, const PotentialSpec& spec, const Environment& env) {
  seg.validate();
  double phi = 0;
  for (std::int64_t n = seg.n1 + 1; n <= seg.n2; ++n) phi += evaluate_potential(spec, env, seg.at(n), n);
  return phi;
}

Field apply_transfer(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n) {
  return Propagator(spec, env, f.window()).step(f, n);
}

Field apply_transfer_range(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                           std::int64_t n2) {
  return Propagator(spec, env, f.window()).range(f, n1, n2);
}

NormalizedImage apply_normalized(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                                 std::int64_t n2) {
  if (f.is_zero()) throw DomainError("apply_normalized: input field is identically zero");
  const Field g = apply_transfer_range(spec, env, f, n1, n2);
  if (g.is_zero()) throw DomainError("apply_normalized: image is identically zero");
  return {g.normalized(), g.log_sup()};
}

ScaledValue partition_function(const PotentialSpec& spec, const Environment& env, const Window& window,
                               const Point& x1, const Point& x2, std::int64_t n1, std::int64_t n2) {
  if (n1 > n2) throw ParameterError("partition_function: n1 > n2");
  const auto target = window.index(x2);
  const Field g = apply_transfer_range(spec, env, Field::delta(window, x1), n1, n2);
  return {g.values()[target], g.log_scale() + static_cast<double>(n2 - n1) * spec.log_branching()};
}

namespace {

struct Enumerator {
  const PotentialSpec& spec;
  const Environment& env;
  const Window& window;
  std::int64_t n1, n2;
  std::size_t target;
  bool keep;
  std::vector<std::size_t> trail;
  std::vector<double> potential;  // V at window points
  OracleResult result;

  void visit(std::size_t pos, std::int64_t n, double phi) {
    if (n == n2) {
      if (pos != target) return;
      result.value += std::exp(static_cast<long double>(phi));
      if (keep) {
        PathSegment seg{n1, n2, {}};
        for (auto i : trail) seg.positions.push_back(window.point(i));
        result.paths.push_back(std::move(seg));
        result.energies.push_back(phi);
      }
      return;
    }
    // prune: the target must stay reachable
    const Point here = window.point(pos);
    const Point goal = window.point(target);
    if (l1_distance(here, goal) > n2 - n) return;
    const int s = env.sign(n + 1);
    for (auto next : window.neighbors(pos)) {
      trail.push_back(next);
      visit(next, n + 1, phi + potential[next] * s);
      trail.pop_back();
    }
  }
};

}  // namespace

OracleResult enumerate_paths_oracle(const PotentialSpec& spec, const Environment& env, const Point& x1,
                                    const Point& x2, std::int64_t n1, std::int64_t n2, const Window& window,
                                    bool keep_paths, const EnumerationBudget& budget) {
  if (n1 > n2) throw ParameterError("enumerate_paths_oracle: n1 > n2");
  if (n2 - n1 > budget.max_length)
    throw SizeError("enumerate_paths_oracle: length " + std::to_string(n2 - n1) + " exceeds budget " +
                    std::to_string(budget.max_length));
  if (std::pow(2.0 * spec.dim() + 1.0, static_cast<double>(n2 - n1)) > budget.max_paths)
    throw SizeError("enumerate_paths_oracle: (2d+1)^(n2-n1) exceeds path budget");
  Enumerator e{spec, env, window, n1, n2, window.index(x2), keep_paths, {}, {}, {}};
  e.potential.resize(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) e.potential[i] = spec.value(window.point(i));
  const auto start = window.index(x1);
  e.trail.push_back(start);
  e.visit(start, n1, 0.0);
  return std::move(e.result);
}

SplitImage truncated_transfer(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                              std::int64_t n2, int r) {
  const Window& w = f.window();
  if (r < 0 || r > w.radius()) throw ParameterError("truncated_transfer: r must lie in [0, window radius]");
  std::vector<double> inner(w.size(), 0.0), outer(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) (w.sup_norm_at(i) <= r ? inner : outer)[i] = f.values()[i];
  const Propagator op(spec, env, w);
  return {op.range(Field(w, std::move(inner), f.log_scale()), n1, n2),
          op.range(Field(w, std::move(outer), f.log_scale()), n1, n2)};
}

}  // namespace pinning
