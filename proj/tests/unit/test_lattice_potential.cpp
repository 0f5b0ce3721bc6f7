#include <doctest.h>

#include <cmath>
#include <set>

#include <pinning/environment.hpp>
#include <pinning/errors.hpp>
#include <pinning/hash.hpp>
#include <pinning/lattice.hpp>
#include <pinning/potential.hpp>

using namespace pinning;

TEST_CASE("evaluate_potential examples") {
  const PotentialSpec spec(1, {{{0}, 4.0}}, 2.0, 4.0);
  const auto plus = Environment::constant(1, -5, 5);
  const auto minus = Environment::constant(-1, -5, 5);
  CHECK(evaluate_potential(spec, plus, {0}, 0) == 6.0);
  CHECK(evaluate_potential(spec, minus, {0}, 3) == -6.0);
  CHECK(evaluate_potential(spec, minus, {3}, 1) == 0.0);

  const PotentialSpec free_walk(2, {}, 0.0, 0.0);
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y) CHECK(evaluate_potential(free_walk, plus, {x, y}, 0) == 0.0);
}

TEST_CASE("check_conditions examples") {
  const auto ref = check_conditions(PotentialSpec(1, {}, 6.0, 0.1));
  CHECK(ref.lambda0 == doctest::Approx(1.75139).epsilon(1e-5));
  CHECK(ref.lambda1 == doctest::Approx(1.29861).epsilon(1e-5));
  CHECK(ref.lambda2 == doctest::Approx(9.60278).epsilon(1e-5));
  CHECK(ref.cond3_ok);
  CHECK(ref.cond4_ok);
  CHECK(ref.ok());

  const auto bad = check_conditions(PotentialSpec(1, {}, 2.0, 0.5));
  CHECK(bad.lambda0 == doctest::Approx(-0.84861).epsilon(1e-5));
  CHECK_FALSE(bad.cond3_ok);
  CHECK_FALSE(bad.ok());

  const auto m1zero = check_conditions(PotentialSpec(1, {}, 5.0, 0.0));
  CHECK(m1zero.lambda0 == doctest::Approx(2.5 - std::log(3.0)));
  CHECK(m1zero.lambda1 == doctest::Approx(std::log(3.0)));
}

TEST_CASE("epsilon(lambda) equals lambda0 - lambda") {
  HashStream rng(4);
  for (int t = 0; t < 500; ++t) {
    const int d = static_cast<int>(rng.integer(1, 4));
    const double m1 = rng.uniform(0, 2);
    const PotentialSpec spec(d, {}, m1 + rng.uniform(0, 20), m1);
    const auto rep = check_conditions(spec);
    const double lambda = rng.uniform(-5, 5);
    CHECK(std::abs(rep.epsilon_of(lambda) - (rep.lambda0 - lambda)) < 1e-12);
  }
}

TEST_CASE("PotentialSpec validation") {
  CHECK_THROWS_AS(PotentialSpec(0, {}, 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(PotentialSpec(1, {}, -1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(PotentialSpec(1, {}, 1.0, -0.1), ParameterError);
  CHECK_THROWS_AS(PotentialSpec(1, {{{1}, 0.5}}, 1.0, 0.1), ParameterError);   // |v0| > M1
  CHECK_THROWS_AS(PotentialSpec(1, {{{1, 0}, 0.0}}, 1.0, 0.1), ParameterError);  // wrong key dimension
  CHECK_THROWS_AS(PotentialSpec(1, {{{0}, -0.3}}, 0.2, 0.3), ParameterError);  // V(0) < 0
  const PotentialSpec ok(2, {{{0, 0}, -0.3}, {{1, -1}, 0.2}}, 1.0, 0.3);
  CHECK(ok.m0() == doctest::Approx(0.7));
  CHECK(ok.value({1, -1}) == doctest::Approx(0.2));
  CHECK(ok.value({5, 5}) == 0.0);
}

TEST_CASE("window enumeration is a bijection onto the cube") {
  for (int d = 1; d <= 3; ++d) {
    for (int r = 0; r <= 3; ++r) {
      const Window w(d, r);
      CHECK(w.size() == static_cast<std::size_t>(std::pow(2 * r + 1, d)));
      std::set<Point> seen;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const Point x = w.point(i);
        CHECK(sup_norm(x) <= r);
        CHECK(w.index(x) == i);
        seen.insert(x);
      }
      CHECK(seen.size() == w.size());
      CHECK(w.point(w.origin_index()) == origin(d));
    }
  }
}

TEST_CASE("window neighbours are the in-window lazy steps") {
  const Window w(2, 2);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Point x = w.point(i);
    std::size_t expected = 0;
    for (std::size_t j = 0; j < w.size(); ++j) expected += l1_distance(x, w.point(j)) <= 1;
    const auto nb = w.neighbors(i);
    CHECK(nb.size() == expected);
    for (auto j : nb) CHECK(l1_distance(x, w.point(j)) <= 1);
    for (std::size_t k = 1; k < nb.size(); ++k) CHECK(nb[k - 1] < nb[k]);
  }
  CHECK_FALSE(w.contains({3, 0}));
  CHECK_THROWS_AS(w.index({3, 0}), RangeError);
}

TEST_CASE("path segments validate lazy steps") {
  PathSegment ok{0, 2, {{0}, {1}, {1}}};
  CHECK(ok.admissible());
  CHECK(ok.at(1) == Point{1});
  PathSegment jump{0, 1, {{0}, {2}}};
  CHECK_FALSE(jump.admissible());
  CHECK_THROWS_AS(jump.validate(), ValidationError);
  PathSegment diag{0, 1, {{0, 0}, {1, 1}}};
  CHECK_FALSE(diag.admissible());
}
