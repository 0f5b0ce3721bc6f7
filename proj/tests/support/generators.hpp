#pragma once

#include <map>
#include <vector>

#include <pinning/field.hpp>
#include <pinning/hash.hpp>
#include <pinning/potential.hpp>

namespace testsupport {

/// Random valid potential on a window: M1 in [0, m1_max], Lambda >= M1.
inline pinning::PotentialSpec random_spec(pinning::HashStream& rng, int dim, int radius, double m1_max = 1.0,
                                          double lambda_extra = 3.0) {
  const double m1 = rng.uniform(0.0, m1_max);
  const double lambda_pin = m1 + rng.uniform(0.0, lambda_extra);
  std::map<pinning::Point, double> v0;
  const pinning::Window w(dim, radius);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (rng.uniform() < 0.5) v0[w.point(i)] = rng.uniform(-m1, m1);
  return pinning::PotentialSpec(dim, v0, lambda_pin, m1);
}

/// Field with entries in [lo, hi].
inline pinning::Field random_field(pinning::HashStream& rng, const pinning::Window& w, double lo = 0.05,
                                   double hi = 1.0) {
  std::vector<double> v(w.size());
  for (auto& x : v) x = rng.uniform(lo, hi);
  return pinning::Field(w, v);
}

/// The reference configuration: d = 1, M0 = 6, M1 = 0.1.
inline pinning::PotentialSpec reference_spec() {
  return pinning::PotentialSpec(1, {{{-2}, 0.05}, {{-1}, -0.1}, {{1}, 0.1}, {{2}, -0.05}}, 6.0, 0.1);
}

inline constexpr std::uint64_t kReferenceSeed = 20240611;

}  // namespace testsupport
