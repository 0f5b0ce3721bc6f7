#include "pinning/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pinning/environment.hpp"
#include "pinning/gibbs.hpp"
#include "pinning/hash.hpp"
#include "pinning/transfer.hpp"

namespace pinning {

namespace {

double rel_error(double got, long double want) {
  if (want == 0) return got == 0 ? 0.0 : 1.0;
  return static_cast<double>(std::abs(static_cast<long double>(got) / want - 1.0L));
}

struct Instance {
  int dim = 1;
  int radius = 1;
  double lambda_pin = 0;
  double m1 = 0;
  std::map<Point, double> v0;
  std::uint64_t env_seed = 0;
  std::int64_t n1 = 0, n2 = 0;

  std::string dump() const {
    std::ostringstream os;
    os.precision(17);
    os << "d=" << dim << " R=" << radius << " lambda_pin=" << lambda_pin << " m1=" << m1 << " env_seed=" << env_seed
       << " n1=" << n1 << " n2=" << n2 << " v0={";
    for (const auto& [x, v] : v0) os << to_string(x) << ":" << v << " ";
    os << "}";
    return os.str();
  }
};

Instance make_instance(HashStream& rng, int index, int total) {
  Instance in;
  in.dim = index < (total + 1) / 2 ? 1 : 2;
  in.radius = static_cast<int>(rng.integer(1, in.dim == 1 ? 3 : 2));
  in.m1 = rng.uniform(0.0, 1.0);
  in.lambda_pin = in.m1 + rng.uniform(0.0, 3.0);
  const Window w(in.dim, in.radius);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (rng.uniform() < 0.5) in.v0[w.point(i)] = rng.uniform(-in.m1, in.m1);
  in.env_seed = rng.next_u64();
  in.n1 = rng.integer(-10, 10);
  in.n2 = in.n1 + rng.integer(1, in.dim == 1 ? 6 : 4);
  return in;
}

}  // namespace

OracleSuiteReport run_oracle_suite(const OracleSuiteOptions& options) {
  OracleSuiteReport report;
  report.instances = std::max(0, options.instances);
  report.vacuous = report.instances == 0;
  HashStream rng(options.seed);

  auto note = [&](int index, const Instance& in, const std::string& check, double err, double& slot) {
    slot = std::max(slot, err);
    report.max_error = std::max(report.max_error, err);
    if (err > options.tolerance) report.mismatches.push_back({index, check, err, in.dump()});
  };

  for (int k = 0; k < report.instances; ++k) {
    HashStream local = rng.substream(static_cast<std::uint64_t>(k));
    const Instance in = make_instance(local, k, report.instances);
    const PotentialSpec spec(in.dim, in.v0, in.lambda_pin, in.m1);
    const Environment env = sample_environment(in.env_seed, in.n1 - 1, in.n2 + 1);
    const Window w(in.dim, in.radius);
    const std::size_t n = w.size();
    const auto steps = static_cast<double>(in.n2 - in.n1);

    // oracle partition functions for every endpoint pair
    std::vector<long double> z(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        z[a * n + b] = enumerate_paths_oracle(spec, env, w.point(a), w.point(b), in.n1, in.n2, w).value;

    // transfer range on a random positive field
    std::vector<double> fv(n);
    for (auto& v : fv) v = local.uniform(0.05, 1.0);
    Field f(w, fv);
    Field tf = apply_transfer_range(spec, env, f, in.n1, in.n2);
    if (options.corrupt_transfer)
      for (auto& v : tf.values()) v *= 1.0 + 1e-9;
    double worst = 0;
    const long double norm = std::pow(2.0L * in.dim + 1.0L, static_cast<long double>(steps));
    for (std::size_t b = 0; b < n; ++b) {
      long double want = 0;
      for (std::size_t a = 0; a < n; ++a) want += z[a * n + b] * static_cast<long double>(fv[a]);
      worst = std::max(worst, rel_error(tf.materialized(b), want / norm));
    }
    note(k, in, "transfer_range", worst, report.max_transfer_error);

    // partition function through the transfer operator
    worst = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        worst = std::max(worst, rel_error(partition_function(spec, env, w, w.point(a), w.point(b), in.n1, in.n2).value(),
                                          z[a * n + b]));
    note(k, in, "partition_function", worst, report.max_partition_error);

    // Gibbs path probabilities and pinned marginal for a random reachable pair
    std::size_t a = 0, b = 0;
    do {
      a = static_cast<std::size_t>(local.integer(0, static_cast<std::int64_t>(n) - 1));
      b = static_cast<std::size_t>(local.integer(0, static_cast<std::int64_t>(n) - 1));
    } while (z[a * n + b] == 0);
    const auto paths = enumerate_paths_oracle(spec, env, w.point(a), w.point(b), in.n1, in.n2, w, true);
    worst = 0;
    const std::size_t stride = std::max<std::size_t>(1, paths.paths.size() / 50);
    for (std::size_t p = 0; p < paths.paths.size(); p += stride) {
      const long double want = std::exp(static_cast<long double>(paths.energies[p])) / paths.value;
      worst = std::max(worst, rel_error(gibbs_path_probability(paths.paths[p], spec, env, w), want));
    }
    note(k, in, "gibbs_path_probability", worst, report.max_path_probability_error);

    const std::int64_t t = local.integer(in.n1, in.n2);
    std::vector<long double> grouped(n, 0.0L);
    for (std::size_t p = 0; p < paths.paths.size(); ++p)
      grouped[w.index(paths.paths[p].at(t))] += std::exp(static_cast<long double>(paths.energies[p]));
    const auto marg = marginal_at(spec, env, w, t, in.n1, in.n2, Pinned{w.point(a), w.point(b)});
    worst = 0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, rel_error(marg.probabilities[i], grouped[i] / paths.value));

    // free boundary marginal from the full pair table is only checked at the end times
    const auto free_end = marginal_at(spec, env, w, in.n2, in.n1, in.n2, Free{});
    long double total = 0;
    std::vector<long double> end_mass(n, 0.0L);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        end_mass[y] += z[x * n + y];
        total += z[x * n + y];
      }
    for (std::size_t y = 0; y < n; ++y) worst = std::max(worst, rel_error(free_end.probabilities[y], end_mass[y] / total));
    note(k, in, "marginal", worst, report.max_marginal_error);
  }

  if (options.include_sampler && options.sampler_draws > 0) {
    // three paths 0 -> {-1, 0, 1} -> 0 under V = 2 delta_0 and all-plus signs
    const PotentialSpec spec(1, {}, 2.0, 0.0);
    const Environment env = Environment::constant(1, -4, 4);
    const Window w(1, 2);
    const auto draws = sample_path(spec, env, w, 0, 2, Pinned{{0}, {0}}, options.seed, options.sampler_draws);
    std::vector<long> counts(3, 0);
    for (const auto& p : draws) ++counts[static_cast<std::size_t>(p.positions[1][0] + 1)];
    const auto oracle = enumerate_paths_oracle(spec, env, {0}, {0}, 0, 2, w, true);
    std::vector<double> probs(3, 0.0);
    for (std::size_t p = 0; p < oracle.paths.size(); ++p)
      probs[static_cast<std::size_t>(oracle.paths[p].positions[1][0] + 1)] =
          static_cast<double>(std::exp(static_cast<long double>(oracle.energies[p])) / oracle.value);
    report.sampler_run = true;
    report.sampler_p_value = chi_square_test(counts, probs).p_value;
    if (report.sampler_p_value < options.sampler_significance)
      report.mismatches.push_back({-1, "sampler_gof", report.sampler_p_value, "three-path instance, V = 2 delta_0"});
  }

  report.passed = report.mismatches.empty();
  return report;
}

}  // namespace pinning
