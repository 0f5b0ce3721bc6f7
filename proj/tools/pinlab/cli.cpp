#include "pinlab/cli.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <pinning/version.hpp>

#include "pinlab/commands.hpp"

namespace pinlab {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pinlab: random pinning transfer operators, eigenfunctions and Gibbs measures"};
  app.set_version_flag("--version", std::string(pinning::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    auto* o = cmd->add_option("--out", out_dir, "output directory");
    if (needs_out) o->required();
  };

  auto* check = app.add_subcommand("check", "evaluate the standing conditions");
  add_common(check, false);

  bool all_plus = false;
  auto* eigen = app.add_subcommand("eigen", "pullback eigenfunction at time 0 (eigen.json, kappa.csv)");
  add_common(eigen, true);
  eigen->add_flag("--all-plus", all_plus, "use omega = +1 instead of the hashed signs");

  int horizon = 10000;
  auto* lyap = app.add_subcommand("lyapunov", "forward log-norm increments from the eigenfunction");
  add_common(lyap, true);
  lyap->add_option("--horizon", horizon, "number of forward steps")->capture_default_str();
  lyap->add_flag("--all-plus", all_plus, "use omega = +1 instead of the hashed signs");

  auto* gibbs = app.add_subcommand("gibbs", "finite-volume Gibbs measures");
  gibbs->require_subcommand(1);
  int n = 0, m = 20, l = 2, m1 = 20, m2 = 40, count = 1000, probe_r = 1;
  auto* marginal = gibbs->add_subcommand("marginal", "time-n marginal of the measure pinned at -m and m");
  add_common(marginal, true);
  marginal->add_option("--n", n)->capture_default_str();
  marginal->add_option("--m", m)->capture_default_str();
  auto* boundary = gibbs->add_subcommand("boundary", "joint law of positions at -l and l");
  add_common(boundary, true);
  boundary->add_option("--l", l)->capture_default_str();
  boundary->add_option("--m", m)->capture_default_str();
  auto* uniq = gibbs->add_subcommand("uniqueness", "TV distance between two approximants");
  add_common(uniq, true);
  uniq->add_option("--l", l)->capture_default_str();
  uniq->add_option("--m1", m1)->capture_default_str();
  uniq->add_option("--m2", m2)->capture_default_str();
  uniq->add_option("--r", probe_r, "ball radius of the coupling probe")->capture_default_str();
  auto* sample = gibbs->add_subcommand("sample", "exact path samples pinned at the origin at -m and m");
  add_common(sample, true);
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--m", m)->capture_default_str();

  int r = 4, intervals = 3, search = 100000;
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert-metric contraction audit between regeneration times");
  add_common(hilbert, true);
  hilbert->add_option("--r", r)->capture_default_str();
  hilbert->add_option("--intervals", intervals)->capture_default_str();
  hilbert->add_option("--horizon", search, "search range [-horizon, 0] for regeneration times")->capture_default_str();

  OracleFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "randomized comparison against brute-force enumeration");
  add_common(oracle, true);
  oracle->add_option("--budget", oracle_flags.budget, "number of random instances")->capture_default_str();
  oracle->add_flag("--corrupt-transfer", oracle_flags.corrupt_transfer)->group("");  // test hook

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const Streams io{out, err};
  try {
    ExperimentConfig config = load_config(config_path);
    if (all_plus) config.all_plus = true;
    const std::filesystem::path dir = out_dir;

    if (*check) return cmd_check(config, out_dir.empty() ? OutDir{} : OutDir{dir}, io);
    if (*eigen) return cmd_eigen(config, dir, io);
    if (*lyap) return cmd_lyapunov(config, horizon, dir, io);
    if (*marginal) return cmd_gibbs_marginal(config, n, m, dir, io);
    if (*boundary) return cmd_gibbs_boundary(config, l, m, dir, io);
    if (*uniq) return cmd_gibbs_uniqueness(config, l, m1, m2, probe_r, dir, io);
    if (*sample) return cmd_gibbs_sample(config, count, m, dir, io);
    if (*hilbert) return cmd_hilbert(config, r, intervals, search, dir, io);
    if (*oracle) return cmd_oracle(config, oracle_flags, dir, io);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {  // parameter, validation and shape errors
    err << "invalid argument: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::out_of_range& e) {
    err << "out of range: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::length_error& e) {
    err << "size limit: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  }
  return kConfigError;
}

}  // namespace pinlab
