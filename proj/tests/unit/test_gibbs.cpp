#include <doctest.h>

#include <cmath>
#include <map>

#include <pinning/environment.hpp>
#include <pinning/errors.hpp>
#include <pinning/gibbs.hpp>
#include <pinning/hash.hpp>
#include <pinning/transfer.hpp>

#include "support/generators.hpp"

using namespace pinning;

namespace {

const PotentialSpec kFree(1, {}, 0.0, 0.0);
const PotentialSpec kPin2(1, {}, 2.0, 0.0);
const Environment kPlus = Environment::constant(1, -1000, 1000);

double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("gibbs_path_probability examples") {
  const auto env = sample_environment(1, -10, 10);
  for (const auto& mid : {Point{-1}, Point{0}, Point{1}}) {
    PathSegment seg{0, 2, {{0}, mid, {0}}};
    CHECK(gibbs_path_probability(seg, kFree, env) == doctest::Approx(1.0 / 3));
  }
  const double e2 = std::exp(2.0), e4 = std::exp(4.0);
  CHECK(gibbs_path_probability({0, 2, {{0}, {0}, {0}}}, kPin2, kPlus) == doctest::Approx(e4 / (e4 + 2 * e2)));
  CHECK(gibbs_path_probability({0, 2, {{0}, {1}, {0}}}, kPin2, kPlus) == doctest::Approx(e2 / (e4 + 2 * e2)));
  CHECK_THROWS_AS(gibbs_path_probability({0, 1, {{0}, {2}}}, kFree, env), ValidationError);
}

TEST_CASE("marginal_at examples") {
  const Window w(1, 3);
  const auto env = sample_environment(1, -10, 10);
  const auto uni = marginal_at(kFree, env, w, 1, 0, 2, Pinned{{0}, {0}});
  for (int x = -1; x <= 1; ++x) CHECK(uni.probabilities[w.index({x})] == doctest::Approx(1.0 / 3));
  CHECK(uni.probabilities[w.index({2})] == 0.0);

  const auto pin = marginal_at(kPin2, kPlus, w, 1, 0, 2, Pinned{{0}, {0}});
  const double e2 = std::exp(2.0);
  CHECK(pin.probabilities[w.index({0})] == doctest::Approx(e2 / (e2 + 2)));
  CHECK(pin.probabilities[w.index({0})] == doctest::Approx(0.78699).epsilon(1e-5));
  CHECK(pin.probabilities[w.index({1})] == doctest::Approx(1 / (e2 + 2)));
  CHECK(pin.probabilities[w.index({-1})] == doctest::Approx(0.10650).epsilon(1e-4));

  const auto start = marginal_at(kPin2, kPlus, w, 0, 0, 2, Pinned{{1}, {0}});
  CHECK(start.probabilities[w.index({1})] == 1.0);

  CHECK_THROWS_AS(marginal_at(kFree, env, w, 1, 0, 2, Pinned{{0}, {3}}), DomainError);
  CHECK_THROWS_AS(marginal_at(kFree, env, w, 5, 0, 2, Free{}), RangeError);
}

TEST_CASE("pinned approximant marginals") {
  const Window w(1, 6);
  const auto env = sample_environment(4, -100, 100);
  const auto spec = testsupport::reference_spec();
  for (int n : {-5, 5}) {
    const auto m = pinned_approximant_marginal(spec, env, w, 5, n);
    CHECK(m.probabilities[w.origin_index()] == 1.0);
  }

  // free walk, m = 2: proportional to (#paths -2 -> x at 0) * (#paths 0 -> 2 ending at 0)
  const auto free_m = pinned_approximant_marginal(kFree, env, w, 2, 0);
  const auto counts = [&](int x) {
    return static_cast<double>(enumerate_paths_oracle(kFree, env, {0}, {x}, -2, 0, w).value *
                               enumerate_paths_oracle(kFree, env, {x}, {0}, 0, 2, w).value);
  };
  double total = 0;
  for (int x = -2; x <= 2; ++x) total += counts(x);
  for (int x = -2; x <= 2; ++x) CHECK(free_m.probabilities[w.index({x})] == doctest::Approx(counts(x) / total));
  CHECK(sum(free_m.probabilities) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reference marginal is localized with the expected tail decay") {
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(testsupport::kReferenceSeed, -1000, 1000);
  const Window w(1, 16);
  const auto m = pinned_approximant_marginal(spec, env, w, 40, 0);
  CHECK(std::abs(sum(m.probabilities) - 1) < 1e-12);
  for (int r = 1; r <= 12; ++r) CHECK(tail_mass(m, r) <= tail_mass(m, r - 1));
  const double slope = tail_log_slope(m, 3, 12);
  CHECK(slope <= -2 * 0.9 * check_conditions(spec).lambda0);
}

TEST_CASE("two_point_boundary against enumeration") {
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(3, -20, 20);
  const Window w(1, 4);
  const auto same = two_point_boundary(spec, env, w, 3, 3);
  CHECK(same.probabilities[w.origin_index() * w.size() + w.origin_index()] == 1.0);

  const int l = 1, m = 3;
  const auto dist = two_point_boundary(spec, env, w, l, m);
  const auto all = enumerate_paths_oracle(spec, env, {0}, {0}, -m, m, w, true);
  std::map<std::pair<Point, Point>, long double> mass;
  for (std::size_t p = 0; p < all.paths.size(); ++p)
    mass[{all.paths[p].at(-l), all.paths[p].at(l)}] += std::exp(static_cast<long double>(all.energies[p]));
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b < w.size(); ++b) {
      const auto it = mass.find({w.point(a), w.point(b)});
      const double want = it == mass.end() ? 0.0 : static_cast<double>(it->second / all.value);
      CHECK(dist.probabilities[a * w.size() + b] == doctest::Approx(want).epsilon(1e-12));
    }
  const auto first = dist.first_marginal();
  const auto direct = pinned_approximant_marginal(spec, env, w, m, -l);
  for (std::size_t a = 0; a < w.size(); ++a)
    CHECK(first[a] == doctest::Approx(direct.probabilities[a]).epsilon(1e-12));
  CHECK_THROWS_AS(two_point_boundary(spec, env, w, 4, 3), RangeError);
}

TEST_CASE("tv_distance examples") {
  const std::vector<double> a{0.2, 0.3, 0.5}, b{0.5, 0.5}, c{1.0, 0.0}, d{0.0, 1.0};
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(c, d) == 1.0);
  CHECK(tv_distance(b, c) == doctest::Approx(0.5));
  CHECK_THROWS_AS(tv_distance(a, b), ShapeError);
}

TEST_CASE("Chapman-Kolmogorov for partition functions") {
  HashStream rng(9);
  for (int t = 0; t < 20; ++t) {
    const int d = static_cast<int>(rng.integer(1, 2));
    const Window w(d, 2);
    const auto spec = testsupport::random_spec(rng, d, 2);
    const auto env = sample_environment(rng.next_u64(), -30, 30);
    const auto x1 = w.point(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(w.size()) - 1)));
    const auto x2 = w.point(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(w.size()) - 1)));
    const std::int64_t n1 = -6, n2 = 6;
    const double direct = partition_function(spec, env, w, x1, x2, n1, n2).log();
    for (std::int64_t m = n1; m <= n2; ++m) {
      long double s = 0;
      for (std::size_t y = 0; y < w.size(); ++y) {
        const auto a = partition_function(spec, env, w, x1, w.point(y), n1, m);
        const auto b = partition_function(spec, env, w, w.point(y), x2, m, n2);
        s += std::exp(static_cast<long double>(a.log() + b.log() - direct));
      }
      CHECK(std::abs(static_cast<double>(s) - 1) < 1e-12);
    }
  }
}

TEST_CASE("finite DLR consistency: conditioning a path measure on a point reproduces marginals") {
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(12, -20, 20);
  const Window w(1, 3);
  const auto all = enumerate_paths_oracle(spec, env, {0}, {1}, 0, 5, w, true);
  // mu{alpha_2 = y, alpha_4 = z} = mu{alpha_2 = y} * mu_{pinned(y at 2)}{alpha_4 = z}
  const auto at2 = marginal_at(spec, env, w, 2, 0, 5, Pinned{{0}, {1}});
  for (std::size_t y = 0; y < w.size(); ++y) {
    if (at2.probabilities[y] == 0) continue;
    const auto cond = marginal_at(spec, env, w, 4, 2, 5, Pinned{w.point(y), {1}});
    for (std::size_t z = 0; z < w.size(); ++z) {
      long double joint = 0;
      for (std::size_t p = 0; p < all.paths.size(); ++p)
        if (all.paths[p].at(2) == w.point(y) && all.paths[p].at(4) == w.point(z))
          joint += std::exp(static_cast<long double>(all.energies[p]));
      CHECK(at2.probabilities[y] * cond.probabilities[z] ==
            doctest::Approx(static_cast<double>(joint / all.value)).epsilon(1e-12));
    }
  }
}

TEST_CASE("coupling constant probe") {
  const Window w(1, 6);
  const auto strong = coupling_constant_probe(PotentialSpec(1, {}, 20.0, 0.0), kPlus, w, 1, 3);
  CHECK(strong.applicable);
  CHECK(strong.c > 1e3);

  // free walk: compare with the path-count ratios directly
  const int n_half = 2, r = 1;
  const auto probe = coupling_constant_probe(kFree, kPlus, w, r, n_half);
  CHECK(probe.applicable);
  const auto z = [&](int a, int b, std::int64_t n1, std::int64_t n2) {
    return static_cast<double>(enumerate_paths_oracle(kFree, kPlus, {a}, {b}, n1, n2, w).value);
  };
  double c = 1e300;
  int excluded = 0;
  for (int x = -6; x <= 6; ++x) {
    if (x == 0) continue;
    // a boundary giving x zero mass imposes no constraint
    double fwd = 1e300, bwd = 1e300;
    for (int b = -r; b <= r; ++b) {
      if (z(b, x, -n_half, 0) > 0) fwd = std::min(fwd, z(b, 0, -n_half, 0) / z(b, x, -n_half, 0));
      if (z(x, b, 0, n_half) > 0) bwd = std::min(bwd, z(0, b, 0, n_half) / z(x, b, 0, n_half));
    }
    if (fwd == 1e300 || bwd == 1e300) {
      ++excluded;
      continue;
    }
    c = std::min(c, fwd * bwd);
  }
  CHECK(probe.c == doctest::Approx(c));
  CHECK(probe.excluded == excluded);
  CHECK(probe.excluded > 0);
  CHECK_FALSE(probe.note.empty());

  const auto minus = coupling_constant_probe(kFree, Environment::constant(-1, -10, 10), w, 1, 2);
  CHECK_FALSE(minus.applicable);
}

TEST_CASE("uniqueness diagnostic") {
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(testsupport::kReferenceSeed, -20000, 20000);
  const Window w(1, 16);
  CHECK(uniqueness_diagnostic(spec, env, w, 20, 20, 2).tv == 0.0);
  const auto d = uniqueness_diagnostic(spec, env, w, 20, 40, 2);
  CHECK(d.tv < 1e-6);
  REQUIRE(d.coupling_c.has_value());
  CHECK(*d.minorization > 0);
  CHECK(*d.iteration_factor < 1);

  const auto t10 = uniqueness_diagnostic(spec, env, w, 10, 20, 2).tv;
  CHECK(t10 > d.tv);

  // without pinning the diagnostic still reports
  const auto free_d = uniqueness_diagnostic(kFree, env, Window(1, 6), 4, 8, 1);
  CHECK(free_d.tv >= 0);
  CHECK(free_d.tv <= 1);
}

TEST_CASE("sampler: free walk frequencies, degenerate geometry and determinism") {
  const Window w(1, 2);
  const auto env = sample_environment(5, -10, 10);
  const auto draws = sample_path(kFree, env, w, 0, 2, Pinned{{0}, {0}}, 42, 30000);
  REQUIRE(draws.size() == 30000);
  std::map<int, long> freq;
  for (const auto& p : draws) {
    CHECK(p.admissible());
    ++freq[p.positions[1][0]];
  }
  for (int x = -1; x <= 1; ++x) CHECK(std::abs(freq[x] / 30000.0 - 1.0 / 3) <= 0.01);

  const auto forced = sample_path(kFree, env, w, 0, 2, Pinned{{0}, {2}}, 1, 50);
  for (const auto& p : forced) CHECK(p.positions == std::vector<Point>{{0}, {1}, {2}});

  const auto again = sample_path(kFree, env, w, 0, 2, Pinned{{0}, {0}}, 42, 100);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == draws[i]);
  CHECK(sample_path(kFree, env, w, 0, 2, Pinned{{0}, {0}}, 43, 100) != again);
}

TEST_CASE("sampler goodness of fit against exact probabilities") {
  const Window w(1, 2);
  const auto draws = sample_path(kPin2, kPlus, w, 0, 2, Pinned{{0}, {0}}, 7, 30000);
  std::vector<long> counts(3, 0);
  for (const auto& p : draws) ++counts[static_cast<std::size_t>(p.positions[1][0] + 1)];
  const double e2 = std::exp(2.0), e4 = std::exp(4.0), z = e4 + 2 * e2;
  const std::vector<double> probs{e2 / z, e4 / z, e2 / z};
  const auto gof = chi_square_test(counts, probs);
  CHECK(gof.dof == 2);
  CHECK(gof.p_value > 0.001);

  // a free-boundary, longer instance over all paths
  const Window w3(1, 1);
  const auto env = sample_environment(8, -10, 10);
  const auto spec = testsupport::reference_spec();
  const auto paths = sample_path(spec, env, w3, 0, 3, Free{}, 11, 20000);
  std::map<std::vector<Point>, long> seen;
  for (const auto& p : paths) ++seen[p.positions];
  long double total = 0;
  std::map<std::vector<Point>, long double> weight;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      const auto all = enumerate_paths_oracle(spec, env, {a}, {b}, 0, 3, w3, true);
      for (std::size_t p = 0; p < all.paths.size(); ++p) {
        const auto wgt = std::exp(static_cast<long double>(all.energies[p]));
        weight[all.paths[p].positions] += wgt;
        total += wgt;
      }
    }
  // categories with fewer than 5 expected draws are pooled
  std::vector<long> obs{0};
  std::vector<double> exp_p{0.0};
  for (const auto& [path, wgt] : weight) {
    const long o = seen.count(path) ? seen[path] : 0;
    const double q = static_cast<double>(wgt / total);
    if (q * 20000 < 5) {
      obs[0] += o;
      exp_p[0] += q;
    } else {
      obs.push_back(o);
      exp_p.push_back(q);
    }
  }
  REQUIRE(obs.size() > 3);
  CHECK(chi_square_test(obs, exp_p).p_value > 0.001);
}

TEST_CASE("chi-square guards") {
  const std::vector<long> obs{10, 20};
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(chi_square_test(obs, bad), ParameterError);
  const std::vector<double> short_p{1.0};
  CHECK_THROWS_AS(chi_square_test(obs, short_p), ShapeError);
}
