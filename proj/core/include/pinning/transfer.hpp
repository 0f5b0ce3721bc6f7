#pragma once

#include <cstdint>
#include <vector>

#include "pinning/environment.hpp"
#include "pinning/field.hpp"
#include "pinning/lattice.hpp"
#include "pinning/potential.hpp"

namespace pinning {

/// Positive real kept as mantissa * exp(log_scale).
struct ScaledValue {
  double mantissa = 0;
  double log_scale = 0;

  double log() const;
  double value() const;
};

/// Feynman-Kac transfer operator on a window with hard truncation: paths may
/// not leave the window. One step n -> n+1 maps
///   g(x) = (2d+1)^{-1} exp(V(x) omega_{n+1}) sum_{y in N(x) cap W} f(y),
/// where N(x) is x and its 2d nearest neighbours. The weight tables for both
/// signs are computed once per propagator.
class Propagator {
 public:
  Propagator(PotentialSpec spec, Environment env, Window window);

  /// T^{n, n+1} f.
  Field step(const Field& f, std::int64_t n) const;
  /// T^{n1, n2} f; identity when n1 == n2. Throws ParameterError when n1 > n2.
  Field range(const Field& f, std::int64_t n1, std::int64_t n2) const;

  /// Transpose of T^{n, n+1}: h(y) = sum_{x in N(y)} w_{n+1}(x) f(x).
  Field adjoint_step(const Field& f, std::int64_t n) const;
  /// Transpose of T^{n1, n2}, applied latest step first.
  Field adjoint_range(const Field& f, std::int64_t n1, std::int64_t n2) const;

  const PotentialSpec& spec() const noexcept { return spec_; }
  const Environment& environment() const noexcept { return env_; }
  const Window& window() const noexcept { return window_; }

 private:
  const std::vector<double>& weights(std::int64_t time) const;

  PotentialSpec spec_;
  Environment env_;
  Window window_;
  std::vector<double> weight_plus_;   // exp(+V(x)) / (2d+1)
  std::vector<double> weight_minus_;  // exp(-V(x)) / (2d+1)
};

/// Phi_{n1,n2}(gamma) = sum_{n=n1+1}^{n2} V(gamma(n)) omega_n. Throws
/// ValidationError for a non-lazy segment.
double path_energy(const PathSegment& seg, const PotentialSpec& spec, const Environment& env);

Field apply_transfer(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n);
Field apply_transfer_range(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                           std::int64_t n2);

struct NormalizedImage {
  Field field;      // sup = 1, log_scale = 0
  double log_norm;  // ln ||T^{n1,n2} f||, the ln kappa increment
};

/// Normalized cocycle T^{n1,n2} f / ||T^{n1,n2} f||. Throws DomainError for a zero image.
NormalizedImage apply_normalized(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                                 std::int64_t n2);

/// Z_{n1,n2}(x1, x2) = (2d+1)^{n2-n1} (T^{n1,n2} delta_{x1})(x2) on `window`.
ScaledValue partition_function(const PotentialSpec& spec, const Environment& env, const Window& window,
                               const Point& x1, const Point& x2, std::int64_t n1, std::int64_t n2);

struct EnumerationBudget {
  int max_length = 12;
  double max_paths = 16777216.0;  // bound on (2d+1)^{n2-n1}
};

struct OracleResult {
  long double value = 0;  // sum of exp(Phi) over in-window admissible paths
  std::vector<PathSegment> paths;
  std::vector<double> energies;
};

/// Brute-force enumeration of every admissible path x1 -> x2 on [n1, n2]
/// that stays in `window`. Energies are summed directly from the potential,
/// independently of the transfer sweep. Throws SizeError over budget.
OracleResult enumerate_paths_oracle(const PotentialSpec& spec, const Environment& env, const Point& x1,
                                    const Point& x2, std::int64_t n1, std::int64_t n2, const Window& window,
                                    bool keep_paths = false, const EnumerationBudget& budget = {});

struct SplitImage {
  Field inner;  // T (f 1_{B_r})
  Field outer;  // T (f 1_{B_r^c})
};

SplitImage truncated_transfer(const PotentialSpec& spec, const Environment& env, const Field& f, std::int64_t n1,
                              std::int64_t n2, int r);

}  // namespace pinning
