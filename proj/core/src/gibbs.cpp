#include "pinning/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "pinning/errors.hpp"
#include "pinning/hash.hpp"
#include "pinning/transfer.hpp"

namespace pinning {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> log_values(const Field& f) {
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.log_value(i);
  return out;
}

// exp-normalize a vector of log weights into probabilities
std::vector<double> normalize_logs(std::span<const double> logs, const char* what) {
  double top = kNegInf;
  for (double v : logs) top = std::max(top, v);
  if (top == kNegInf) throw DomainError(std::string(what) + ": boundary condition is unreachable");
  std::vector<double> p(logs.size());
  double total = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) total += p[i] = std::exp(logs[i] - top);
  for (double& v : p) v /= total;
  return p;
}

Field start_field(const Window& w, const Boundary& b, bool at_start) {
  if (const auto* pin = std::get_if<Pinned>(&b)) return Field::delta(w, at_start ? pin->x1 : pin->x2);
  return Field::constant(w, 1.0);
}

}  // namespace

std::vector<double> TwoPointDistribution::first_marginal() const {
  const std::size_t n = window.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out[x] += probabilities[x * n + y];
  return out;
}

double gibbs_path_probability(const PathSegment& seg, const PotentialSpec& spec, const Environment& env,
                              const std::optional<Window>& window) {
  seg.validate();
  const Point& x1 = seg.positions.front();
  const Point& x2 = seg.positions.back();
  const Window w = window ? *window : Window(spec.dim(), std::max(1, sup_norm(x1) + static_cast<int>(seg.length())));
  for (const auto& p : seg.positions)
    if (!w.contains(p)) throw RangeError("gibbs_path_probability: path leaves the window at " + to_string(p));
  const ScaledValue z = partition_function(spec, env, w, x1, x2, seg.n1, seg.n2);
  if (!(z.mantissa > 0)) throw DomainError("gibbs_path_probability: zero partition function");
  return std::exp(path_energy(seg, spec, env) - z.log());
}

GibbsMarginal marginal_at(const PotentialSpec& spec, const Environment& env, const Window& window, std::int64_t n,
                          std::int64_t n1, std::int64_t n2, const Boundary& boundary) {
  if (!(n1 <= n && n <= n2)) throw RangeError("marginal_at: requires n1 <= n <= n2");
  const Propagator op(spec, env, window);
  const Field forward = op.range(start_field(window, boundary, true), n1, n);
  const Field backward = op.adjoint_range(start_field(window, boundary, false), n, n2);
  std::vector<double> logs(window.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = forward.log_value(i) + backward.log_value(i);
  return {window, n, normalize_logs(logs, "marginal_at")};
}

GibbsMarginal pinned_approximant_marginal(const PotentialSpec& spec, const Environment& env, const Window& window,
                                          int m, std::int64_t n) {
  if (m < 0 || n < -m || n > m) throw RangeError("pinned_approximant_marginal: requires |n| <= m");
  const Point o = origin(spec.dim());
  return marginal_at(spec, env, window, n, -m, m, Pinned{o, o});
}

TwoPointDistribution two_point_boundary(const PotentialSpec& spec, const Environment& env, const Window& window, int l,
                                        int m) {
  if (l < 0 || l > m) throw RangeError("two_point_boundary: requires 0 <= l <= m");
  const Propagator op(spec, env, window);
  const Point o = origin(spec.dim());
  const auto forward = log_values(op.range(Field::delta(window, o), -m, -l));
  const auto backward = log_values(op.adjoint_range(Field::delta(window, o), l, m));
  const std::size_t n = window.size();
  std::vector<double> logs(n * n, kNegInf);
  for (std::size_t x = 0; x < n; ++x) {
    if (forward[x] == kNegInf) continue;
    const auto middle = log_values(op.range(Field::delta(window, window.point(x)), -l, l));
    for (std::size_t y = 0; y < n; ++y) logs[x * n + y] = forward[x] + middle[y] + backward[y];
  }
  return {window, -l, l, normalize_logs(logs, "two_point_boundary")};
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("tv_distance: supports differ in size");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / 2;
}

double tail_mass(const GibbsMarginal& marginal, int r) {
  double s = 0;
  for (std::size_t i = 0; i < marginal.probabilities.size(); ++i)
    if (marginal.window.sup_norm_at(i) > r) s += marginal.probabilities[i];
  return s;
}

double tail_log_slope(const GibbsMarginal& marginal, int r_lo, int r_hi) {
  if (!(r_lo < r_hi)) throw ParameterError("tail_log_slope: requires r_lo < r_hi");
  if (r_hi >= marginal.window.radius()) throw ParameterError("tail_log_slope: r_hi must be below the window radius");
  std::vector<double> t, y;
  for (int r = r_lo; r <= r_hi; ++r) {
    const double m = tail_mass(marginal, r);
    if (!(m > 0)) throw DomainError("tail_log_slope: zero tail mass at r = " + std::to_string(r));
    t.push_back(r);
    y.push_back(std::log(m));
  }
  const double n = static_cast<double>(t.size());
  const double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    sxy += (t[k] - tm) * (y[k] - ym);
    sxx += (t[k] - tm) * (t[k] - tm);
  }
  return sxy / sxx;
}

CouplingProbe coupling_constant_probe(const PotentialSpec& spec, const Environment& env, const Window& window, int r,
                                      int n_half) {
  CouplingProbe probe;
  if (r < 0 || r > window.radius()) throw ParameterError("coupling_constant_probe: r outside the window");
  if (n_half < 1) throw ParameterError("coupling_constant_probe: n_half must be >= 1");
  for (std::int64_t n = -n_half + 1; n <= n_half; ++n) {
    if (env.sign(n) != 1) {
      probe.note = "no all-plus block on (-n_half, n_half]; first minus at time " + std::to_string(n);
      return probe;
    }
  }
  probe.applicable = true;

  const Propagator op(spec, env, window);
  std::vector<std::size_t> ball;
  for (std::size_t i = 0; i < window.size(); ++i)
    if (window.sup_norm_at(i) <= r) ball.push_back(i);

  // log F_{x1}(x) = ln Z_{-n,0}(x1, x), log B_{x2}(x) = ln Z_{0,n}(x, x2), up to constants
  const std::size_t o = window.origin_index();
  std::vector<double> worst_forward(window.size(), std::numeric_limits<double>::infinity());
  std::vector<double> worst_backward(window.size(), std::numeric_limits<double>::infinity());
  for (auto b : ball) {
    const auto f = log_values(op.range(Field::delta(window, window.point(b)), -n_half, 0));
    const auto g = log_values(op.adjoint_range(Field::delta(window, window.point(b)), 0, n_half));
    for (std::size_t x = 0; x < window.size(); ++x) {
      worst_forward[x] = std::min(worst_forward[x], f[o] - f[x]);
      worst_backward[x] = std::min(worst_backward[x], g[o] - g[x]);
    }
  }
  double log_c = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < window.size(); ++x) {
    if (x == o) continue;
    const double v = worst_forward[x] + worst_backward[x];
    if (v == std::numeric_limits<double>::infinity()) {
      ++probe.excluded;
      continue;
    }
    log_c = std::min(log_c, v);
  }
  probe.c = std::exp(log_c);
  if (probe.excluded) probe.note = std::to_string(probe.excluded) + " points with zero mass excluded";
  return probe;
}

UniquenessDiagnostic uniqueness_diagnostic(const PotentialSpec& spec, const Environment& env, const Window& window,
                                           int m1, int m2, int l, int probe_r, int n_half, int search) {
  if (!(l < std::min(m1, m2))) throw RangeError("uniqueness_diagnostic: requires l < min(m1, m2)");
  UniquenessDiagnostic d;
  d.l = l;
  d.m1 = m1;
  d.m2 = m2;
  d.probe_r = probe_r;
  d.tv = m1 == m2 ? 0.0
                  : tv_distance(two_point_boundary(spec, env, window, l, m1).probabilities,
                                two_point_boundary(spec, env, window, l, m2).probabilities);

  for (std::int64_t k = 0; k <= 2 * static_cast<std::int64_t>(search); ++k) {
    const std::int64_t t = (k % 2 == 0) ? -(k / 2) : (k + 1) / 2;
    const Environment shifted = env.shift(t);
    bool block = true;
    for (std::int64_t n = -n_half + 1; n <= n_half && block; ++n) block = shifted.sign(n) == 1;
    if (!block) continue;
    const CouplingProbe probe = coupling_constant_probe(spec, shifted, window, probe_r, n_half);
    const double points = std::pow(2.0 * probe_r + 1.0, spec.dim());
    const double q = std::pow(probe.c / (points - 1.0 + probe.c), 2);
    d.probe_time = t;
    d.coupling_c = probe.c;
    d.minorization = q;
    d.iteration_factor = 1.0 - q;
    break;
  }
  return d;
}

std::vector<PathSegment> sample_path(const PotentialSpec& spec, const Environment& env, const Window& window,
                                     std::int64_t n1, std::int64_t n2, const Boundary& boundary, std::uint64_t seed,
                                     int count) {
  if (n1 > n2) throw ParameterError("sample_path: n1 > n2");
  if (count < 0) throw ParameterError("sample_path: count must be >= 0");
  const Propagator op(spec, env, window);

  // backward[k][x] = ln Z_{n1+k, n2}(x, end) up to a constant per k
  const std::size_t steps = static_cast<std::size_t>(n2 - n1);
  std::vector<std::vector<double>> backward(steps + 1);
  Field b = start_field(window, boundary, false);
  backward[steps] = log_values(b);
  for (std::size_t k = steps; k-- > 0;) {
    b = op.adjoint_step(b, n1 + static_cast<std::int64_t>(k));
    backward[k] = log_values(b);
  }
  std::vector<double> potential(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) potential[i] = spec.value(window.point(i));

  std::vector<std::size_t> start_candidates;
  std::vector<double> start_logs;
  if (const auto* pin = std::get_if<Pinned>(&boundary)) {
    start_candidates.push_back(window.index(pin->x1));
    start_logs.push_back(backward[0][start_candidates[0]]);
  } else {
    for (std::size_t i = 0; i < window.size(); ++i) {
      start_candidates.push_back(i);
      start_logs.push_back(backward[0][i]);
    }
  }
  if (*std::max_element(start_logs.begin(), start_logs.end()) == kNegInf)
    throw DomainError("sample_path: boundary condition is unreachable");

  const auto draw = [](std::span<const double> logs, double u) {
    double top = kNegInf;
    for (double v : logs) top = std::max(top, v);
    std::vector<double> cdf(logs.size());
    double acc = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) cdf[i] = acc += std::exp(logs[i] - top);
    const double target = u * acc;
    for (std::size_t i = 0; i < cdf.size(); ++i)
      if (target < cdf[i] && logs[i] != kNegInf) return i;
    // u * acc rounds up to acc: take the last candidate with positive weight
    for (std::size_t i = logs.size(); i-- > 0;)
      if (logs[i] != kNegInf) return i;
    return std::size_t{0};
  };

  const HashStream root(seed);
  std::vector<PathSegment> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<double> logs;
  for (int p = 0; p < count; ++p) {
    HashStream stream = root.substream(static_cast<std::uint64_t>(p));
    PathSegment seg{n1, n2, {}};
    std::size_t pos = start_candidates[start_candidates.size() == 1 ? 0 : draw(start_logs, stream.uniform())];
    seg.positions.push_back(window.point(pos));
    for (std::size_t k = 0; k < steps; ++k) {
      const int s = env.sign(n1 + static_cast<std::int64_t>(k) + 1);
      const auto nbrs = window.neighbors(pos);
      logs.assign(nbrs.size(), kNegInf);
      for (std::size_t j = 0; j < nbrs.size(); ++j) logs[j] = potential[nbrs[j]] * s + backward[k + 1][nbrs[j]];
      pos = nbrs[draw(logs, stream.uniform())];
      seg.positions.push_back(window.point(pos));
    }
    out.push_back(std::move(seg));
  }
  return out;
}

ChiSquareResult chi_square_test(std::span<const long> observed, std::span<const double> expected_probabilities) {
  if (observed.size() != expected_probabilities.size() || observed.size() < 2)
    throw ShapeError("chi_square_test: need matching category lists of length >= 2");
  const double mass = std::accumulate(expected_probabilities.begin(), expected_probabilities.end(), 0.0);
  if (!(std::abs(mass - 1.0) <= 1e-9)) throw ParameterError("chi_square_test: probabilities must sum to 1");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), 0L));
  ChiSquareResult res;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_probabilities[i];
    if (!(e > 0)) throw DomainError("chi_square_test: expected count must be positive");
    const double diff = static_cast<double>(observed[i]) - e;
    res.statistic += diff * diff / e;
  }
  res.dof = static_cast<int>(observed.size()) - 1;
  const boost::math::chi_squared dist(res.dof);
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

}  // namespace pinning
