#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pinning/environment.hpp"
#include "pinning/field.hpp"
#include "pinning/potential.hpp"

namespace pinning {

struct CocycleEigenpair {
  Field u;                          // normalized eigenfunction at time 0
  std::vector<double> kappa_log;    // ln kappa increments along the deepest pullback run
  double lyapunov_estimate = 0;     // mean of kappa_log
  int pullback_depth = 0;           // depth at which the Cauchy criterion was met
  double residual = 0;              // || normalized T^{0,1} u - (depth-n pullback at time 1) ||
  bool converged = false;
  Field start;                      // initial data v0 the pullback started from
};

/// Normalized T^{time - depth, time} v0.
Field pullback_at(const PotentialSpec& spec, const Environment& env, const Field& v0, std::int64_t time, int depth);

/// Pullback iteration with doubling depths 8, 16, 32, ... up to max_depth,
/// stopping when consecutive depths differ by less than tol in sup norm.
/// Throws PreconditionError when the potential violates the standing
/// conditions, DomainError for a zero start. An unconverged result has
/// converged == false.
CocycleEigenpair pullback_eigenfunction(const PotentialSpec& spec, const Environment& env, const Field& v0,
                                        double tol = 1e-10, int max_depth = 4096);

/// For k = 1..steps: || normalized T^{k-1,k} u_{k-1} - u_k ||, where u_k is the
/// pullback at time k from the pair's start and depth. Throws DomainError for
/// an unconverged pair.
std::vector<double> verify_eigen_relation(const CocycleEigenpair& pair, const PotentialSpec& spec,
                                          const Environment& env, int steps);

/// Eigenfunction at a given time.
using EigenSource = std::function<Field(std::int64_t time)>;

/// Source that solves pullback_eigenfunction on the shifted environment.
EigenSource pullback_source(const PotentialSpec& spec, const Environment& env, const Field& v0, double tol = 1e-10,
                            int max_depth = 4096);

/// residual[n-1] = || normalized T^{0,n} v - u(n) || for n = 1..horizon.
std::vector<double> forward_attraction_test(const PotentialSpec& spec, const Environment& env, const Field& v,
                                            const EigenSource& source, int horizon);

struct LocalizationFit {
  double lambda_hat = 0;
  double c_hat = 0;
  int fit_lo = 2;
  int fit_hi = 0;
  double lambda_target = 0;
  /// max over fitted points of ln u(x) - (ln c_hat - lambda_target |x|)
  double max_excess = 0;
  int excluded_zeros = 0;
};

/// Least squares of ln u(x) against |x| over 2 <= |x| <= R - 2.
LocalizationFit localization_fit(const Field& u, double lambda_target);

struct LyapunovEstimate {
  double mean = 0;
  double standard_error = 0;
  int blocks = 0;
};

/// Mean of the increments and the standard error of up to 32 block means.
LyapunovEstimate lyapunov_exponent(std::span<const double> kappa_log);

/// ln kappa increments of the normalized forward run from v starting at n0.
std::vector<double> forward_kappa_series(const PotentialSpec& spec, const Environment& env, const Field& v,
                                         std::int64_t n0, int steps);

struct UniquenessProbe {
  std::vector<int> depths;
  std::vector<double> origin_values;  // u^{theta^{-n} omega}(0)
  double limsup_proxy = 0;            // max of origin_values
};

UniquenessProbe uniqueness_condition_probe(const PotentialSpec& spec, const Environment& env, const Window& window,
                                           std::span<const int> depths, double tol = 1e-10, int max_depth = 4096);

/// Running max over depths n in [1, max_depth] and window points y of
///   T^{-n,0} phi(y) / T^{-n,0} phi(0) / (exp(-lambda |y|) + c exp(-lambda n)),
/// the measured counterpart of K1(lambda).
double empirical_k1(const PotentialSpec& spec, const Environment& env, const Field& phi, double lambda, double c,
                    int max_depth);

}  // namespace pinning
