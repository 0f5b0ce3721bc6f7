#include "pinning/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pinning/errors.hpp"
#include "pinning/transfer.hpp"

namespace pinning {

namespace {

// Normalized forward run from `from` for `steps` steps; optionally records
// the ln-norm increments.
Field run_normalized(const Propagator& op, const Field& v0, std::int64_t from, int steps,
                     std::vector<double>* increments) {
  Field f = v0.normalized();
  for (int k = 0; k < steps; ++k) {
    Field g = op.step(f, from + k);
    if (g.is_zero()) throw DomainError("normalized cocycle: image vanished at time " + std::to_string(from + k + 1));
    if (increments) increments->push_back(g.log_sup());
    f = g.normalized();
  }
  return f;
}

void require_conditions(const PotentialSpec& spec) {
  const auto report = check_conditions(spec);
  if (!report.ok())
    throw PreconditionError("potential violates the standing conditions (lambda0 = " +
                            std::to_string(report.lambda0) + ", lambda1 = " + std::to_string(report.lambda1) + ")");
}

}  // namespace

Field pullback_at(const PotentialSpec& spec, const Environment& env, const Field& v0, std::int64_t time, int depth) {
  if (depth < 0) throw ParameterError("pullback_at: depth must be >= 0");
  if (v0.is_zero()) throw DomainError("pullback_at: start field is identically zero");
  const Propagator op(spec, env, v0.window());
  return run_normalized(op, v0, time - depth, depth, nullptr);
}

CocycleEigenpair pullback_eigenfunction(const PotentialSpec& spec, const Environment& env, const Field& v0, double tol,
                                        int max_depth) {
  require_conditions(spec);
  if (v0.is_zero()) throw DomainError("pullback_eigenfunction: start field is identically zero");
  if (max_depth < 1) throw ParameterError("pullback_eigenfunction: max_depth must be >= 1");
  const Propagator op(spec, env, v0.window());

  int depth = std::min(8, max_depth);
  Field current = run_normalized(op, v0, -depth, depth, nullptr);
  bool converged = false;
  while (2 * depth <= max_depth) {
    const int next = 2 * depth;
    Field candidate = run_normalized(op, v0, -next, next, nullptr);
    const double gap = sup_distance(candidate, current);
    current = std::move(candidate);
    depth = next;
    if (gap < tol) {
      converged = true;
      break;
    }
  }

  CocycleEigenpair pair{current, {}, 0, depth, 0, converged, v0};
  // replay the final depth recording the kappa increments
  pair.u = run_normalized(op, v0, -depth, depth, &pair.kappa_log);
  pair.lyapunov_estimate =
      std::accumulate(pair.kappa_log.begin(), pair.kappa_log.end(), 0.0) / static_cast<double>(pair.kappa_log.size());
  const Field image = op.step(pair.u, 0).normalized();
  pair.residual = sup_distance(image, run_normalized(op, v0, 1 - depth, depth, nullptr));
  return pair;
}

std::vector<double> verify_eigen_relation(const CocycleEigenpair& pair, const PotentialSpec& spec,
                                          const Environment& env, int steps) {
  if (!pair.converged) throw DomainError("verify_eigen_relation: eigenpair did not converge");
  const Propagator op(spec, env, pair.u.window());
  std::vector<double> residuals;
  residuals.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  Field previous = run_normalized(op, pair.start, -pair.pullback_depth, pair.pullback_depth, nullptr);
  for (int k = 1; k <= steps; ++k) {
    Field current = run_normalized(op, pair.start, k - pair.pullback_depth, pair.pullback_depth, nullptr);
    residuals.push_back(sup_distance(op.step(previous, k - 1).normalized(), current));
    previous = std::move(current);
  }
  return residuals;
}

EigenSource pullback_source(const PotentialSpec& spec, const Environment& env, const Field& v0, double tol,
                            int max_depth) {
  return [spec, env, v0, tol, max_depth](std::int64_t time) {
    return pullback_eigenfunction(spec, env.shift(time), v0, tol, max_depth).u;
  };
}

std::vector<double> forward_attraction_test(const PotentialSpec& spec, const Environment& env, const Field& v,
                                            const EigenSource& source, int horizon) {
  if (v.is_zero()) throw DomainError("forward_attraction_test: start field is identically zero");
  const Propagator op(spec, env, v.window());
  std::vector<double> residuals;
  Field f = v.normalized();
  for (int n = 1; n <= horizon; ++n) {
    f = op.step(f, n - 1).normalized();
    residuals.push_back(sup_distance(f, source(n)));
  }
  return residuals;
}

LocalizationFit localization_fit(const Field& u, double lambda_target) {
  const Window& w = u.window();
  LocalizationFit fit;
  fit.fit_lo = 2;
  fit.fit_hi = w.radius() - 2;
  fit.lambda_target = lambda_target;
  if (fit.fit_hi < fit.fit_lo + 1) throw ParameterError("localization_fit: window radius must be at least 5");
  if (!(u.values()[w.origin_index()] > 0)) throw DomainError("localization_fit: u(0) must be positive");

  std::vector<double> t, y;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int r = w.sup_norm_at(i);
    if (r < fit.fit_lo || r > fit.fit_hi) continue;
    if (!(u.values()[i] > 0)) {
      ++fit.excluded_zeros;
      continue;
    }
    t.push_back(r);
    y.push_back(u.log_value(i));
  }
  if (t.size() < 2) throw DomainError("localization_fit: fewer than two positive points in the fit range");
  const double n = static_cast<double>(t.size());
  const double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    sxy += (t[k] - tm) * (y[k] - ym);
    sxx += (t[k] - tm) * (t[k] - tm);
  }
  if (!(sxx > 0)) throw DomainError("localization_fit: fit points share a single radius");
  const double slope = sxy / sxx;
  const double intercept = ym - slope * tm;
  fit.lambda_hat = -slope;
  fit.c_hat = std::exp(intercept);
  fit.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k)
    fit.max_excess = std::max(fit.max_excess, y[k] - (intercept - lambda_target * t[k]));
  return fit;
}

LyapunovEstimate lyapunov_exponent(std::span<const double> kappa_log) {
  if (kappa_log.size() < 2) throw ParameterError("lyapunov_exponent: need at least two increments");
  LyapunovEstimate est;
  const std::size_t n = kappa_log.size();
  est.mean = std::accumulate(kappa_log.begin(), kappa_log.end(), 0.0) / static_cast<double>(n);
  const std::size_t blocks = std::min<std::size_t>(32, n);
  const std::size_t width = n / blocks;
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto first = kappa_log.begin() + static_cast<std::ptrdiff_t>(b * width);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(width), 0.0) / static_cast<double>(width);
  }
  const double bm = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(blocks);
  double ss = 0;
  for (double m : means) ss += (m - bm) * (m - bm);
  est.blocks = static_cast<int>(blocks);
  est.standard_error = std::sqrt(ss / static_cast<double>(blocks - 1) / static_cast<double>(blocks));
  return est;
}

std::vector<double> forward_kappa_series(const PotentialSpec& spec, const Environment& env, const Field& v,
                                         std::int64_t n0, int steps) {
  if (v.is_zero()) throw DomainError("forward_kappa_series: start field is identically zero");
  const Propagator op(spec, env, v.window());
  std::vector<double> increments;
  increments.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  // increments are ln ||T f|| for normalized f; the start itself may carry any scale
  run_normalized(op, v, n0, steps, &increments);
  return increments;
}

UniquenessProbe uniqueness_condition_probe(const PotentialSpec& spec, const Environment& env, const Window& window,
                                           std::span<const int> depths, double tol, int max_depth) {
  UniquenessProbe probe;
  const Field ones = Field::constant(window, 1.0);
  for (int n : depths) {
    if (n <= 0) throw ParameterError("uniqueness_condition_probe: depths must be positive");
    const auto pair = pullback_eigenfunction(spec, env.shift(-n), ones, tol, max_depth);
    probe.depths.push_back(n);
    probe.origin_values.push_back(pair.u.values()[window.origin_index()]);
  }
  if (!probe.origin_values.empty())
    probe.limsup_proxy = *std::max_element(probe.origin_values.begin(), probe.origin_values.end());
  return probe;
}

double empirical_k1(const PotentialSpec& spec, const Environment& env, const Field& phi, double lambda, double c,
                    int max_depth) {
  if (!(lambda > 0)) throw ParameterError("empirical_k1: lambda must be positive");
  const Propagator op(spec, env, phi.window());
  const Window& w = phi.window();
  double worst = 0;
  for (int n = 1; n <= max_depth; ++n) {
    const Field g = op.range(phi, -n, 0);
    const double at0 = g.values()[w.origin_index()];
    if (!(at0 > 0)) continue;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double envelope = std::exp(-lambda * w.sup_norm_at(i)) + c * std::exp(-lambda * n);
      worst = std::max(worst, g.values()[i] / at0 / envelope);
    }
  }
  return worst;
}

}  // namespace pinning
