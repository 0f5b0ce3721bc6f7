#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pinning/environment.hpp"
#include "pinning/lattice.hpp"
#include "pinning/potential.hpp"

namespace pinning {

/// Endpoints fixed at gamma(n1) = x1, gamma(n2) = x2.
struct Pinned {
  Point x1;
  Point x2;
};
/// Both endpoints summed over every window point.
struct Free {};
using Boundary = std::variant<Pinned, Free>;

struct GibbsMarginal {
  Window window;
  std::int64_t time = 0;
  std::vector<double> probabilities;  // indexed like window points
};

struct TwoPointDistribution {
  Window window;
  std::int64_t time_a = 0;
  std::int64_t time_b = 0;
  std::vector<double> probabilities;  // row-major: (x at time_a, y at time_b)

  /// Marginal of the first coordinate.
  std::vector<double> first_marginal() const;
};

/// exp(Phi(gamma)) / Z(gamma(n1), gamma(n2)) in log space. Without a window,
/// one large enough to hold every path with these endpoints is used.
double gibbs_path_probability(const PathSegment& seg, const PotentialSpec& spec, const Environment& env,
                              const std::optional<Window>& window = std::nullopt);

/// mu{alpha_n = x} proportional to Z_{n1,n}(x1, x) Z_{n,n2}(x, x2) (free
/// boundaries sum over the window). Throws DomainError when unreachable.
GibbsMarginal marginal_at(const PotentialSpec& spec, const Environment& env, const Window& window, std::int64_t n,
                          std::int64_t n1, std::int64_t n2, const Boundary& boundary);

/// Time-n marginal of mu^m, the measure pinned at the origin at times -m and m.
GibbsMarginal pinned_approximant_marginal(const PotentialSpec& spec, const Environment& env, const Window& window,
                                          int m, std::int64_t n);

/// Joint law of (alpha_{-l}, alpha_l) under mu^m, for 0 <= l <= m.
TwoPointDistribution two_point_boundary(const PotentialSpec& spec, const Environment& env, const Window& window, int l,
                                        int m);

/// (1/2) sum |a - b|. Throws ShapeError for different lengths.
double tv_distance(std::span<const double> a, std::span<const double> b);

/// mu{|alpha| > r}.
double tail_mass(const GibbsMarginal& marginal, int r);

/// Least-squares slope of ln tail_mass(r) over r in [r_lo, r_hi].
double tail_log_slope(const GibbsMarginal& marginal, int r_lo, int r_hi);

struct CouplingProbe {
  bool applicable = false;
  double c = 0;  // min over boundaries in B_r and x != 0 of mu{gamma_0 = 0} / mu{gamma_0 = x}
  int excluded = 0;  // points x with zero mass
  std::string note;
};

/// Measured minorization constant on [-n_half, n_half] with both boundary
/// positions ranging over B_r (worst case). Requires omega = +1 on
/// (-n_half, n_half]; otherwise reported inapplicable.
CouplingProbe coupling_constant_probe(const PotentialSpec& spec, const Environment& env, const Window& window, int r,
                                      int n_half);

struct UniquenessDiagnostic {
  double tv = 0;
  int l = 0, m1 = 0, m2 = 0;
  // reference envelope from the measured coupling constant
  std::optional<std::int64_t> probe_time;  // centre of the all-plus block used by the probe
  std::optional<double> coupling_c;
  std::optional<double> minorization;  // (c / ((2r+1)^d - 1 + c))^2
  std::optional<double> iteration_factor;  // 1 - minorization
  int probe_r = 0;
  std::string ball_count_convention = "(2r+1)^d";
};

/// TV distance between two_point_boundary(l, m1) and two_point_boundary(l, m2),
/// plus the iteration-bound envelope measured at the all-plus block of
/// half-width n_half nearest to time 0 (within +/- search).
UniquenessDiagnostic uniqueness_diagnostic(const PotentialSpec& spec, const Environment& env, const Window& window,
                                           int m1, int m2, int l, int probe_r = 1, int n_half = 4,
                                           int search = 10000);

/// i.i.d. exact draws from the finite-volume Gibbs measure on [n1, n2]. Path
/// p uses the hash sub-stream HashStream(seed).substream(p); each step draws
/// one uniform and inverts the CDF over the in-window lazy successors in
/// ascending window order.
std::vector<PathSegment> sample_path(const PotentialSpec& spec, const Environment& env, const Window& window,
                                     std::int64_t n1, std::int64_t n2, const Boundary& boundary, std::uint64_t seed,
                                     int count);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson goodness of fit of observed counts against exact probabilities.
ChiSquareResult chi_square_test(std::span<const long> observed, std::span<const double> expected_probabilities);

}  // namespace pinning
