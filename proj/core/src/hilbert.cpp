#include "pinning/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinning/errors.hpp"
#include "pinning/transfer.hpp"

namespace pinning {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> ball_indices(const Window& w, int r) {
  if (r < 0 || r > w.radius()) throw ParameterError("ball radius " + std::to_string(r) + " exceeds window radius");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.sup_norm_at(i) <= r) idx.push_back(i);
  return idx;
}

// log mantissas of f on B_r; DomainError on a nonpositive entry. The metric is
// projective, so the field's log scale is dropped rather than added and
// cancelled later at the cost of its magnitude times epsilon.
std::vector<double> ball_logs(const Field& f, const std::vector<std::size_t>& ball) {
  std::vector<double> out;
  out.reserve(ball.size());
  for (auto i : ball) {
    if (!(f.values()[i] > 0))
      throw DomainError("hilbert_metric: field not strictly positive at " + to_string(f.window().point(i)));
    out.push_back(std::log(f.values()[i]));
  }
  return out;
}

double log_metric(std::span<const double> lf, std::span<const double> lg) {
  double up = -kInf, down = -kInf;
  for (std::size_t i = 0; i < lf.size(); ++i) {
    up = std::max(up, lf[i] - lg[i]);
    down = std::max(down, lg[i] - lf[i]);
  }
  return std::max(0.0, up + down);
}

}  // namespace

double n0_threshold(double lambda, int r, double c) {
  if (!(lambda > 0)) throw ParameterError("n0_threshold: lambda must be positive");
  if (!(c >= 1)) throw ParameterError("n0_threshold: c must be >= 1");
  return std::log(c) / lambda + r + 1;
}

double hilbert_metric(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw ShapeError("hilbert_metric: size mismatch");
  if (f.empty()) throw ShapeError("hilbert_metric: empty vectors");
  std::vector<double> lf(f.size()), lg(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0) || !(g[i] > 0)) throw DomainError("hilbert_metric: entries must be strictly positive");
    lf[i] = std::log(f[i]);
    lg[i] = std::log(g[i]);
  }
  return log_metric(lf, lg);
}

double hilbert_metric(const Field& f, const Field& g, int r) {
  if (!(f.window() == g.window())) throw ShapeError("hilbert_metric: windows differ");
  const auto ball = ball_indices(f.window(), r);
  return log_metric(ball_logs(f, ball), ball_logs(g, ball));
}

double projective_diameter(std::span<const Field> fields, int r) {
  if (fields.empty()) throw ShapeError("projective_diameter: empty list");
  const auto ball = ball_indices(fields.front().window(), r);
  std::vector<std::vector<double>> logs;
  for (const auto& f : fields) {
    if (!(f.window() == fields.front().window())) throw ShapeError("projective_diameter: windows differ");
    logs.push_back(ball_logs(f, ball));
  }
  double diam = 0;
  for (std::size_t a = 0; a < logs.size(); ++a)
    for (std::size_t b = a + 1; b < logs.size(); ++b) diam = std::max(diam, log_metric(logs[a], logs[b]));
  return diam;
}

KernelMatrix::KernelMatrix(int r, std::size_t size, std::vector<double> log_entries,
                           std::vector<double> row_log_scales)
    : r_(r), size_(size), log_entries_(std::move(log_entries)), row_log_scales_(std::move(row_log_scales)) {
  if (log_entries_.size() != size * size) throw ShapeError("KernelMatrix: expected size^2 entries");
  if (row_log_scales_.empty()) row_log_scales_.assign(size, 0.0);
  if (row_log_scales_.size() != size) throw ShapeError("KernelMatrix: expected one row offset per row");
}

KernelMatrix KernelMatrix::from_entries(std::size_t size, std::span<const double> entries) {
  std::vector<double> logs(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) logs[i] = entries[i] > 0 ? std::log(entries[i]) : -kInf;
  return KernelMatrix(0, size, std::move(logs));
}

std::vector<double> KernelMatrix::apply(std::span<const double> f) const {
  if (f.size() != size_) throw ShapeError("KernelMatrix::apply: size mismatch");
  std::vector<double> lf(size_);
  for (std::size_t x = 0; x < size_; ++x) {
    if (!(f[x] > 0)) throw DomainError("KernelMatrix::apply: input must be strictly positive");
    lf[x] = std::log(f[x]);
  }
  std::vector<double> out(size_);
  for (std::size_t y = 0; y < size_; ++y) {
    double top = -kInf;
    for (std::size_t x = 0; x < size_; ++x) top = std::max(top, log_at(x, y) + lf[x]);
    double s = 0;
    for (std::size_t x = 0; x < size_; ++x) s += std::exp(log_at(x, y) + lf[x] - top);
    out[y] = s * std::exp(top);
  }
  return out;
}

KernelMatrix build_kernel(const PotentialSpec& spec, const Environment& env, const Window& window, int r,
                          std::int64_t n1, std::int64_t n2) {
  const auto ball = ball_indices(window, r);
  const Propagator op(spec, env, window);
  const std::size_t n = ball.size();
  std::vector<double> logs(n * n), scales(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Field row = op.range(Field::delta(window, window.point(ball[a])), n1, n2);
    scales[a] = row.log_scale();
    for (std::size_t b = 0; b < n; ++b) {
      const double v = row.values()[ball[b]];
      logs[a * n + b] = v > 0 ? std::log(v) : -kInf;
    }
  }
  return KernelMatrix(r, n, std::move(logs), std::move(scales));
}

double contraction_coefficient(const KernelMatrix& kernel) {
  const std::size_t n = kernel.size();
  for (double v : kernel.log_entries())
    if (!(v > -kInf)) throw DomainError("contraction_coefficient: kernel has a nonpositive entry");
  // row offsets cancel in the cross ratio, so only the relative entries are used
  const auto rel = [&](std::size_t x, std::size_t y) { return kernel.log_entries()[x * n + y]; };
  double worst = 0;  // log L, at most 0
  for (std::size_t x1 = 0; x1 < n; ++x1) {
    for (std::size_t x2 = x1 + 1; x2 < n; ++x2) {
      double lo12 = kInf, lo21 = kInf;
      for (std::size_t y = 0; y < n; ++y) {
        const double d = rel(x1, y) - rel(x2, y);
        lo12 = std::min(lo12, d);
        lo21 = std::min(lo21, -d);
      }
      worst = std::min(worst, lo12 + lo21);
    }
  }
  return std::exp(worst);
}

double birkhoff_bound(double L) {
  if (!(L > 0) || !(L <= 1)) throw DomainError("birkhoff_bound: L must lie in (0, 1]");
  const double s = std::sqrt(L);
  return (1 - s) / (1 + s);
}

namespace {

std::optional<Point> argmax_point(const Field& f) {
  const auto v = f.values();
  const auto it = std::max_element(v.begin(), v.end());
  return f.window().point(static_cast<std::size_t>(it - v.begin()));
}

Membership check_f(const Field& f, double c) {
  const auto o = f.window().origin_index();
  if (!(f.mantissa_sup() <= c * f.values()[o])) return {false, argmax_point(f), "sup > c * f(0)"};
  return {true, std::nullopt, {}};
}

Membership check_g(const Field& f, int r, double k1_hat) {
  if (auto m = check_f(f, 2 * k1_hat); !m.member) return m;
  const Window& w = f.window();
  double inside = 0, outside = 0;
  std::size_t out_arg = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = f.values()[i];
    if (w.sup_norm_at(i) <= r) {
      inside = std::max(inside, v);
    } else if (v > outside) {
      outside = v;
      out_arg = i;
    }
  }
  if (outside > inside) return {false, w.point(out_arg), "sup outside B_r > sup inside B_r"};
  return {true, std::nullopt, {}};
}

}  // namespace

Membership class_membership(const Field& f, const ClassQuery& query) {
  return std::visit(
      [&](const auto& q) -> Membership {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, FClass>) {
          return check_f(f, q.c);
        } else if constexpr (std::is_same_v<Q, GClass>) {
          return check_g(f, q.r, q.k1_hat);
        } else {
          if (auto m = check_g(f, q.r, q.k1_hat); !m.member) return m;
          if (std::abs(f.mantissa_sup() * std::exp(f.log_scale()) - 1.0) > 1e-12)
            return {false, argmax_point(f), "sup norm != 1"};
          const Window& w = f.window();
          for (std::size_t i = 0; i < w.size(); ++i)
            if (w.sup_norm_at(i) <= q.r && f.materialized(i) < q.lower_bound)
              return {false, w.point(i), "value on B_r below lower_bound"};
          return {true, std::nullopt, {}};
        }
      },
      query);
}

ContractionAudit contraction_audit(const PotentialSpec& spec, const Environment& env,
                                   const RegenerationReport& times, int r, std::vector<Field> trial_fields) {
  if (times.times.size() < 2) throw ParameterError("contraction_audit: need at least two regeneration times");
  if (trial_fields.empty()) throw ParameterError("contraction_audit: no trial fields");
  const Window window = trial_fields.front().window();
  const auto ball = ball_indices(window, r);
  const Propagator op(spec, env, window);

  ContractionAudit audit;
  audit.r = r;
  // times are stored newest first; walk from the oldest interval forward
  for (std::size_t k = times.times.size() - 1; k >= 1; --k) {
    IntervalAudit rec;
    rec.n_start = times.times[k];
    rec.n_end = times.times[k - 1];

    const KernelMatrix kernel = build_kernel(spec, env, window, r, rec.n_start, rec.n_end);
    for (double v : kernel.log_entries())
      if (!(v > -kInf))
        throw DomainError("contraction_audit: nonpositive kernel on [" + std::to_string(rec.n_start) + ", " +
                          std::to_string(rec.n_end) + "]; interval shorter than the positivity reach");
    rec.contraction_L = contraction_coefficient(kernel);
    rec.bound = birkhoff_bound(rec.contraction_L);

    std::vector<Field> full, inner;
    for (const auto& f : trial_fields) {
      auto split = truncated_transfer(spec, env, f, rec.n_start, rec.n_end, r);
      // full image = inner + outer, merged at a common scale
      const double shift = split.outer.log_scale() - split.inner.log_scale();
      std::vector<double> sum(window.size());
      for (std::size_t i = 0; i < window.size(); ++i) {
        sum[i] = split.inner.values()[i] + split.outer.values()[i] * std::exp(shift);
        if (split.inner.values()[i] > 0 && window.sup_norm_at(i) <= r) {
          const double ratio = split.outer.values()[i] / split.inner.values()[i] * std::exp(shift);
          rec.influx = std::max(rec.influx, ratio);
        }
      }
      Field image(window, std::move(sum), split.inner.log_scale());
      double lo = kInf, hi = 0;
      for (auto i : ball) {
        lo = std::min(lo, image.values()[i]);
        hi = std::max(hi, image.values()[i]);
      }
      rec.empirical_k2 = std::max(rec.empirical_k2, hi / lo);
      full.push_back(std::move(image));
      inner.push_back(std::move(split.inner));
    }

    rec.diam_before = projective_diameter(trial_fields, r);
    rec.diam_after_full = projective_diameter(full, r);
    rec.diam_after_truncated = projective_diameter(inner, r);
    rec.truncated_factor = rec.diam_before > 0 ? rec.diam_after_truncated / rec.diam_before : 0.0;
    rec.min_slack = kInf;
    for (std::size_t a = 0; a < trial_fields.size(); ++a) {
      for (std::size_t b = a + 1; b < trial_fields.size(); ++b) {
        const double before = hilbert_metric(trial_fields[a], trial_fields[b], r);
        const double after = hilbert_metric(inner[a], inner[b], r);
        const double slack = rec.bound * before - after;
        rec.min_slack = std::min(rec.min_slack, slack);
        if (slack < -kBirkhoffRoundoff) rec.birkhoff_holds = false;
      }
    }
    if (trial_fields.size() < 2) rec.min_slack = 0;
    audit.all_hold = audit.all_hold && rec.birkhoff_holds;
    audit.intervals.push_back(rec);

    for (auto& f : full) f = f.normalized();
    trial_fields = std::move(full);
  }
  return audit;
}

TerminalAudit terminal_segment_audit(const PotentialSpec& spec, const Environment& env, const Field& phi,
                                     const Field& psi, std::int64_t n_start, int r) {
  if (n_start > 0) throw ParameterError("terminal_segment_audit: n_start must be <= 0");
  const Propagator op(spec, env, phi.window());
  TerminalAudit t;
  t.n_start = n_start;
  t.rho_before = hilbert_metric(phi, psi, r);
  t.rho_after = hilbert_metric(op.range(phi, n_start, 0), op.range(psi, n_start, 0), r);
  t.growth = t.rho_after - t.rho_before;
  t.reference_decay = std::exp(-check_conditions(spec).lambda2 * r);
  return t;
}

}  // namespace pinning
