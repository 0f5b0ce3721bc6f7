#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pinning/environment.hpp"
#include "pinning/field.hpp"
#include "pinning/potential.hpp"

namespace pinning {

/// n0(lambda, r, c) = ln(c) / lambda + r + 1.
double n0_threshold(double lambda, int r, double c);

/// rho(f, g) = ln(max f/g * max g/f) over all entries. Throws DomainError
/// unless every entry of both vectors is strictly positive.
double hilbert_metric(std::span<const double> f, std::span<const double> g);

/// rho_r restricted to the ball B_r of the fields' window.
double hilbert_metric(const Field& f, const Field& g, int r);

/// Largest pairwise rho_r; 0 for a single field.
double projective_diameter(std::span<const Field> fields, int r);

/// Positive kernel over a finite index set, stored as logarithms of entries.
/// Row = starting point x, column = end point y: (K f)(y) = sum_x K(x, y) f(x).
/// An optional per-row log offset keeps large row scales out of the entries;
/// row-projective quantities never touch it.
class KernelMatrix {
 public:
  KernelMatrix(int r, std::size_t size, std::vector<double> log_entries, std::vector<double> row_log_scales = {});
  /// From plain entries (row-major, row = start); zero or negative entries
  /// become -inf and are rejected by contraction_coefficient.
  static KernelMatrix from_entries(std::size_t size, std::span<const double> entries);

  int r() const noexcept { return r_; }
  std::size_t size() const noexcept { return size_; }
  double log_at(std::size_t x, std::size_t y) const { return log_entries_[x * size_ + y] + row_log_scales_[x]; }
  /// Entries relative to their row offsets.
  std::span<const double> log_entries() const noexcept { return log_entries_; }
  std::span<const double> row_log_scales() const noexcept { return row_log_scales_; }

  /// (K f)(y) for strictly positive f; evaluated with a per-column max shift.
  std::vector<double> apply(std::span<const double> f) const;

 private:
  int r_;
  std::size_t size_;
  std::vector<double> log_entries_;
  std::vector<double> row_log_scales_;
};

/// (2d+1)^{-(n2-n1)} Z_{n1,n2}(x, y) for x, y in B_r, with paths confined to
/// `window` (whose radius must be at least r).
KernelMatrix build_kernel(const PotentialSpec& spec, const Environment& env, const Window& window, int r,
                          std::int64_t n1, std::int64_t n2);

/// L = min over (x1, x2, y1, y2) of K(x1,y1) K(x2,y2) / (K(x2,y1) K(x1,y2)),
/// reduced to pairs of rows. Throws DomainError on a nonpositive entry.
double contraction_coefficient(const KernelMatrix& kernel);

/// (1 - sqrt L) / (1 + sqrt L). Throws DomainError unless 0 < L <= 1.
double birkhoff_bound(double L);

struct FClass {
  double c = 1;
};
struct GClass {
  double lambda = 0;
  int r = 1;
  double k1_hat = 1;  // G(lambda, r) requires membership in F(2 K1)
};
struct HClass {
  double lambda = 0;
  int r = 1;
  double lower_bound = 0;  // stand-in for 1 / K2(lambda, r)
  double k1_hat = 1;
};
using ClassQuery = std::variant<FClass, GClass, HClass>;

struct Membership {
  bool member = false;
  std::optional<Point> witness;  // point where the defining inequality fails
  std::string failed;            // which inequality failed, empty when member
};

Membership class_membership(const Field& f, const ClassQuery& query);

struct IntervalAudit {
  std::int64_t n_start = 0;  // n_i
  std::int64_t n_end = 0;    // n_{i-1}
  double contraction_L = 0;
  double bound = 0;
  double diam_before = 0;
  double diam_after_full = 0;
  double diam_after_truncated = 0;
  double truncated_factor = 0;  // diam_after_truncated / diam_before (0 when diam_before == 0)
  double min_slack = 0;         // min over pairs of bound*rho(f,g) - rho(T_r f, T_r g)
  bool birkhoff_holds = true;
  double influx = 0;        // max over fields and |y| <= r of hat T_r f(y) / T_r f(y)
  double empirical_k2 = 1;  // max over fields of max_{B_r} T f / min_{B_r} T f
};

struct ContractionAudit {
  int r = 0;
  std::vector<IntervalAudit> intervals;
  bool all_hold = true;
};

/// Absolute allowance for round-off in the Birkhoff inequality check.
inline constexpr double kBirkhoffRoundoff = 1e-12;

/// Walks the regeneration intervals oldest first, pushing the trial fields
/// through the full operator and auditing the truncated one. Throws
/// ParameterError for fewer than two times or r beyond the window, and
/// DomainError when an interval is too short for a positive kernel.
ContractionAudit contraction_audit(const PotentialSpec& spec, const Environment& env,
                                   const RegenerationReport& times, int r, std::vector<Field> trial_fields);

struct TerminalAudit {
  std::int64_t n_start = 0;
  double rho_before = 0;
  double rho_after = 0;
  double growth = 0;          // rho_after - rho_before
  double reference_decay = 0;  // exp(-lambda2 r)
};

/// rho_r growth of two fields pushed through T^{n_start, 0}.
TerminalAudit terminal_segment_audit(const PotentialSpec& spec, const Environment& env, const Field& phi,
                                     const Field& psi, std::int64_t n_start, int r);

}  // namespace pinning
