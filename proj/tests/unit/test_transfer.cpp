#include <doctest.h>

#include <cmath>

#include <pinning/environment.hpp>
#include <pinning/errors.hpp>
#include <pinning/hash.hpp>
#include <pinning/transfer.hpp>

#include "support/generators.hpp"

using namespace pinning;

namespace {

const PotentialSpec kFree(1, {}, 0.0, 0.0);

double rel(double a, double b) { return b == 0 ? std::abs(a) : std::abs(a / b - 1); }

}  // namespace

TEST_CASE("path_energy examples") {
  const PotentialSpec spec(1, {}, 6.0, 0.0);
  const auto plus = Environment::constant(1, -10, 10);
  PathSegment stay{0, 5, std::vector<Point>(6, Point{0})};
  CHECK(path_energy(stay, spec, plus) == doctest::Approx(5 * 6.0));
  PathSegment walk{0, 3, {{0}, {1}, {2}, {1}}};
  CHECK(path_energy(walk, kFree, sample_environment(1, -10, 10)) == 0.0);
}

TEST_CASE("apply_transfer examples") {
  const Window w(1, 3);
  const auto env = sample_environment(2, -10, 10);

  const auto ones = apply_transfer(kFree, env, Field::constant(w, 1.0), 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double expected = w.sup_norm_at(i) == 3 ? 2.0 / 3.0 : 1.0;  // missing neighbour at the edge
    CHECK(ones.materialized(i) == doctest::Approx(expected).epsilon(1e-15));
  }

  const auto spread = apply_transfer(kFree, env, Field::delta(w, {0}), 0);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(spread.materialized(i) == doctest::Approx(w.sup_norm_at(i) <= 1 ? 1.0 / 3.0 : 0.0).epsilon(1e-15));

  const PotentialSpec pin(1, {}, 2.0, 0.0);
  const auto plus = Environment::constant(1, -10, 10);
  const auto g = apply_transfer(pin, plus, Field::delta(w, {0}), 0);
  CHECK(g.at({0}) == doctest::Approx(std::exp(2.0) / 3).epsilon(1e-14));
  CHECK(g.at({0}) == doctest::Approx(2.46302).epsilon(1e-5));
  CHECK(g.at({1}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(g.at({-1}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(g.at({2}) == 0.0);
}

TEST_CASE("single-step range equals apply_transfer") {
  HashStream rng(8);
  const Window w(2, 2);
  const auto spec = testsupport::random_spec(rng, 2, 2);
  const auto env = sample_environment(3, -20, 20);
  const auto f = testsupport::random_field(rng, w);
  const auto a = apply_transfer(spec, env, f, 4);
  const auto b = apply_transfer_range(spec, env, f, 4, 5);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(a.materialized(i) == b.materialized(i));
}

TEST_CASE("apply_normalized on the free walk keeps constants") {
  const Window w(1, 4);
  // the free walk only loses mass at the edge; restrict attention to the interior
  const auto img = apply_normalized(kFree, sample_environment(1, -5, 5), Field::constant(w, 1.0), 0, 1);
  CHECK(img.log_norm == doctest::Approx(0.0));
  CHECK(img.field.at({0}) == 1.0);
  CHECK(img.field.at({4}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("partition_function examples") {
  const Window w(1, 3);
  const auto env = sample_environment(1, -5, 5);
  CHECK(partition_function(kFree, env, w, {0}, {0}, 0, 1).value() == doctest::Approx(1.0));
  CHECK(partition_function(kFree, env, w, {0}, {0}, 0, 2).value() == doctest::Approx(3.0));
  CHECK(partition_function(kFree, env, w, {0}, {3}, 0, 2).value() == 0.0);
}

TEST_CASE("transfer range is linear for nonnegative combinations") {
  HashStream rng(21);
  for (int t = 0; t < 40; ++t) {
    const int d = static_cast<int>(rng.integer(1, 3));
    const int r = static_cast<int>(rng.integer(1, d == 3 ? 2 : 4));
    const Window w(d, r);
    const auto spec = testsupport::random_spec(rng, d, r);
    const auto env = sample_environment(rng.next_u64(), -50, 50);
    const auto f = testsupport::random_field(rng, w), g = testsupport::random_field(rng, w);
    const double a = rng.uniform(0, 3), b = rng.uniform(0, 3);
    std::vector<double> combo(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) combo[i] = a * f.values()[i] + b * g.values()[i];
    const std::int64_t n1 = rng.integer(-20, 0), n2 = n1 + rng.integer(1, 20);
    const auto lhs = apply_transfer_range(spec, env, Field(w, combo), n1, n2);
    const auto tf = apply_transfer_range(spec, env, f, n1, n2), tg = apply_transfer_range(spec, env, g, n1, n2);
    for (std::size_t i = 0; i < w.size(); ++i)
      CHECK(rel(lhs.materialized(i), a * tf.materialized(i) + b * tg.materialized(i)) < 1e-12);
  }
}

TEST_CASE("nonnegative nonzero fields become positive after 2Rd steps") {
  HashStream rng(5);
  for (int t = 0; t < 40; ++t) {
    const int d = static_cast<int>(rng.integer(1, 3));
    const int r = static_cast<int>(rng.integer(1, 3));
    const Window w(d, r);
    const auto spec = testsupport::random_spec(rng, d, r);
    const auto env = sample_environment(rng.next_u64(), -50, 50);
    const auto corner = w.point(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(w.size()) - 1)));
    const auto img = apply_transfer_range(spec, env, Field::delta(w, corner), 0, 2 * r * d);
    for (double v : img.values()) CHECK(v > 0);
  }
}

TEST_CASE("cocycle identity at every split point") {
  HashStream rng(77);
  const Window w(1, 6);
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(12, -400, 400);
  const auto f = testsupport::random_field(rng, w);
  const auto direct = apply_transfer_range(spec, env, f, -150, 150);
  for (std::int64_t m = -150; m <= 150; m += 7) {
    const auto composed = apply_transfer_range(spec, env, apply_transfer_range(spec, env, f, -150, m), m, 150);
    CHECK(max_relative_error(composed, direct) < 1e-13);
  }
}

TEST_CASE("rebalancing keeps long runs finite and exact in scale") {
  const Window w(1, 2);
  const PotentialSpec spec(1, {}, 6.0, 0.0);
  const auto plus = Environment::constant(1, -2000, 2000);
  const auto img = apply_transfer_range(spec, plus, Field::delta(w, {0}), 0, 1500);
  CHECK(std::isfinite(img.log_sup()));
  CHECK(img.log_sup() > 1500 * (6.0 - std::log(3.0)) - 1);
  CHECK(img.mantissa_sup() <= std::ldexp(1.0, 512));
  CHECK(img.mantissa_sup() >= std::ldexp(1.0, -512));
  // the rebalanced field and a manual power-of-two rescale agree exactly
  Field g = img;
  g.values()[0] *= std::ldexp(1.0, 600);
  g.rebalance();
  CHECK(g.values()[0] * std::exp(g.log_scale() - img.log_scale()) == doctest::Approx(img.values()[0] * std::ldexp(1.0, 600)));
}

TEST_CASE("Z equals (2d+1)^n times the transfer range of a delta") {
  HashStream rng(31);
  for (int t = 0; t < 30; ++t) {
    const int d = static_cast<int>(rng.integer(1, 2));
    const int r = static_cast<int>(rng.integer(1, 2));
    const Window w(d, r);
    const auto spec = testsupport::random_spec(rng, d, r);
    const auto env = sample_environment(rng.next_u64(), -20, 20);
    const std::int64_t n1 = rng.integer(-5, 5), n2 = n1 + rng.integer(1, 4);
    const auto x1 = w.point(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(w.size()) - 1)));
    const auto img = apply_transfer_range(spec, env, Field::delta(w, x1), n1, n2);
    for (std::size_t b = 0; b < w.size(); ++b) {
      const auto oracle = enumerate_paths_oracle(spec, env, x1, w.point(b), n1, n2, w);
      const double scaled =
          img.materialized(b) * std::pow(2.0 * d + 1, static_cast<double>(n2 - n1));
      CHECK(rel(scaled, static_cast<double>(oracle.value)) < 1e-13);
    }
  }
}

TEST_CASE("enumeration oracle guards its budget") {
  const Window w(1, 3);
  const auto env = sample_environment(1, -30, 30);
  EnumerationBudget tight;
  tight.max_length = 4;
  CHECK_THROWS_AS(enumerate_paths_oracle(kFree, env, {0}, {0}, 0, 5, w, false, tight), SizeError);
  const auto paths = enumerate_paths_oracle(kFree, env, {0}, {0}, 0, 2, w, true);
  CHECK(paths.paths.size() == 3);
  CHECK(paths.value == doctest::Approx(3.0));
}

TEST_CASE("truncated transfer splits by support") {
  HashStream rng(2);
  const Window w(1, 6);
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(9, -50, 50);
  std::vector<double> in(w.size(), 0.0), out(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) (w.sup_norm_at(i) <= 2 ? in : out)[i] = rng.uniform(0.1, 1);

  const auto a = truncated_transfer(spec, env, Field(w, in), 0, 10, 2);
  CHECK(a.outer.is_zero());
  CHECK_FALSE(a.inner.is_zero());
  const auto b = truncated_transfer(spec, env, Field(w, out), 0, 10, 2);
  CHECK(b.inner.is_zero());

  // the two parts add up to the full operator
  std::vector<double> all(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) all[i] = in[i] + out[i];
  const auto c = truncated_transfer(spec, env, Field(w, all), 0, 10, 2);
  const auto full = apply_transfer_range(spec, env, Field(w, all), 0, 10);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double sum = c.inner.materialized(i) + c.outer.materialized(i);
    CHECK(rel(sum, full.materialized(i)) < 1e-12);
  }
}

TEST_CASE("window truncation is stable for localized pullbacks") {
  // R and R + 4 agree after normalization once the field is concentrated
  const auto spec = testsupport::reference_spec();
  const auto env = sample_environment(testsupport::kReferenceSeed, -200, 200);
  const Window small(1, 12), large(1, 16);
  const auto a = apply_normalized(spec, env, Field::constant(small, 1.0), -100, 0).field;
  const auto b = apply_normalized(spec, env, Field::constant(large, 1.0), -100, 0).field;
  double diff = 0;
  for (std::size_t i = 0; i < small.size(); ++i)
    diff = std::max(diff, std::abs(a.materialized(i) - b.at(small.point(i))));
  CHECK(diff < 1e-8);
}

TEST_CASE("argument guards") {
  const Window w(1, 2);
  const auto env = sample_environment(1, -5, 5);
  CHECK_THROWS_AS(apply_transfer_range(kFree, env, Field::constant(w, 1.0), 3, 2), ParameterError);
  CHECK_THROWS_AS(apply_transfer(kFree, env, Field::constant(w, 1.0), 5), RangeError);
  CHECK_THROWS_AS(apply_transfer(PotentialSpec(2, {}, 0.0, 0.0), env, Field::constant(w, 1.0), 0), ShapeError);
}
