#include <doctest.h>

#include <pinning/oracle_suite.hpp>

using namespace pinning;

TEST_CASE("oracle suite passes on the default budget") {
  OracleSuiteOptions opts;
  const auto rep = run_oracle_suite(opts);
  CHECK(rep.passed);
  CHECK(rep.instances == 100);
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.max_error < 1e-12);
  CHECK(rep.max_partition_error < 1e-13);
  CHECK(rep.sampler_run);
  CHECK(rep.sampler_p_value > 0.001);
  CHECK(rep.mismatches.empty());
}

TEST_CASE("corrupted transfer is caught with an instance dump") {
  OracleSuiteOptions opts;
  opts.instances = 6;
  opts.include_sampler = false;
  opts.corrupt_transfer = true;
  const auto rep = run_oracle_suite(opts);
  CHECK_FALSE(rep.passed);
  REQUIRE_FALSE(rep.mismatches.empty());
  CHECK(rep.mismatches.front().check == "transfer_range");
  CHECK(rep.mismatches.front().dump.find("env_seed=") != std::string::npos);
}

TEST_CASE("zero instances is a flagged vacuous pass") {
  OracleSuiteOptions opts;
  opts.instances = 0;
  opts.include_sampler = false;
  const auto rep = run_oracle_suite(opts);
  CHECK(rep.passed);
  CHECK(rep.vacuous);
  CHECK(rep.max_error == 0.0);
}

TEST_CASE("different seeds draw different instances, each passing") {
  for (std::uint64_t seed : {2ULL, 3ULL}) {
    OracleSuiteOptions opts;
    opts.instances = 20;
    opts.seed = seed;
    opts.include_sampler = false;
    CHECK(run_oracle_suite(opts).passed);
  }
}
