#include "pinlab/commands.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <pinning/errors.hpp>
#include <pinning/gibbs.hpp>
#include <pinning/hilbert.hpp>
#include <pinning/oracle_suite.hpp>
#include <pinning/spectral.hpp>
#include <pinning/version.hpp>

#include "pinlab/output.hpp"

namespace pinlab {

namespace fs = std::filesystem;
using namespace pinning;

namespace {

Json provenance(const std::string& command, const ExperimentConfig& c) {
  Json p;
  p["command"] = command;
  p["version"] = std::string(kVersion);
  p["config_hash"] = c.config_hash;
  p["seed"] = c.seed;
  p["all_plus"] = c.all_plus;
  return p;
}

std::string csv_header(const std::string& command, const ExperimentConfig& c) {
  return "# pinlab " + command + " version=" + std::string(kVersion) + " config_hash=" + c.config_hash +
         " seed=" + std::to_string(c.seed) + (c.all_plus ? " all_plus=true" : "") + "\n";
}

Json point_json(const Point& x) {
  Json a = Json::array();
  for (int v : x) a.push_back(v);
  return a;
}

Json report_json(const ConditionReport& r, double lambda) {
  Json j;
  j["m0"] = r.m0;
  j["m1"] = r.m1;
  j["lambda0"] = r.lambda0;
  j["lambda1"] = r.lambda1;
  j["lambda2"] = r.lambda2;
  j["lambda"] = lambda;
  j["epsilon"] = r.epsilon_of(lambda);
  j["cond3_ok"] = r.cond3_ok;
  j["cond4_ok"] = r.cond4_ok;
  j["ok"] = r.ok();
  return j;
}

// Commands that rely on the standing conditions refuse to run without them.
bool require_conditions(const ExperimentConfig& c, const ConditionReport& r, Streams io) {
  if (r.ok()) return true;
  io.err << "conditions not satisfied:\n" << dump(report_json(r, c.lambda_or_default(r)));
  return false;
}

std::string coordinate_columns(const std::string& prefix, int dim) {
  std::string s;
  for (int i = 1; i <= dim; ++i) s += prefix + std::to_string(i) + ",";
  return s;
}

std::string point_cells(const Point& x) {
  std::string s;
  for (int v : x) s += std::to_string(v) + ",";
  return s;
}

Json field_json(const Field& f) {
  Json a = Json::array();
  for (std::size_t i = 0; i < f.window().size(); ++i) {
    Json e;
    e["point"] = point_json(f.window().point(i));
    e["value"] = f.materialized(i);
    a.push_back(std::move(e));
  }
  return a;
}

CocycleEigenpair solve_eigen(const ExperimentConfig& c) {
  const Window w = c.window();
  return pullback_eigenfunction(c.spec(), c.environment(), Field::delta(w, origin(c.dimension)), c.tol_sup,
                                c.max_depth);
}

}  // namespace

int cmd_check(const ExperimentConfig& config, const OutDir& out, Streams io) {
  const auto report = check_conditions(config.spec());
  Json doc = provenance("check", config);
  doc["report"] = report_json(report, config.lambda_or_default(report));
  const std::string text = dump(doc);
  io.out << text;
  if (out) write_file(*out / "check.json", text);
  return report.ok() ? kOk : kConfigError;
}

int cmd_eigen(const ExperimentConfig& config, const fs::path& out, Streams io) {
  const auto report = check_conditions(config.spec());
  if (!require_conditions(config, report, io)) return kConfigError;
  const double lambda = config.lambda_or_default(report);
  const auto pair = solve_eigen(config);
  const auto fit = localization_fit(pair.u, lambda);
  const auto lyap = lyapunov_exponent(pair.kappa_log);

  Json doc = provenance("eigen", config);
  doc["converged"] = pair.converged;
  doc["partial"] = !pair.converged;
  doc["pullback_depth"] = pair.pullback_depth;
  doc["tol_sup"] = config.tol_sup;
  doc["residual"] = pair.residual;
  doc["lambda0"] = report.lambda0;
  Json loc;
  loc["lambda_target"] = fit.lambda_target;
  loc["lambda_hat"] = fit.lambda_hat;
  loc["c_hat"] = fit.c_hat;
  loc["fit_lo"] = fit.fit_lo;
  loc["fit_hi"] = fit.fit_hi;
  loc["max_excess"] = fit.max_excess;
  loc["excluded_zeros"] = fit.excluded_zeros;
  doc["localization"] = loc;
  Json ly;
  ly["mean"] = lyap.mean;
  ly["standard_error"] = lyap.standard_error;
  ly["blocks"] = lyap.blocks;
  ly["increments"] = pair.kappa_log.size();
  doc["lyapunov"] = ly;
  doc["field"] = field_json(pair.u);
  write_file(out / "eigen.json", dump(doc));

  std::string csv = csv_header("eigen", config) + "step,log_kappa\n";
  for (std::size_t k = 0; k < pair.kappa_log.size(); ++k)
    csv += std::to_string(k + 1) + "," + format_double(pair.kappa_log[k]) + "\n";
  write_file(out / "kappa.csv", csv);

  if (!pair.converged) {
    io.err << "pullback did not converge within max_depth " << config.max_depth << "; output flagged partial\n";
    return kNonConvergence;
  }
  io.out << "eigen: depth " << pair.pullback_depth << ", residual " << format_double(pair.residual) << "\n";
  return kOk;
}

int cmd_lyapunov(const ExperimentConfig& config, int horizon, const fs::path& out, Streams io) {
  if (horizon < 1) throw ParameterError("--horizon must be >= 1");
  const auto report = check_conditions(config.spec());
  if (!require_conditions(config, report, io)) return kConfigError;
  const auto pair = solve_eigen(config);
  if (!pair.converged) {
    io.err << "pullback did not converge; no forward start available\n";
    return kNonConvergence;
  }
  const auto series = forward_kappa_series(config.spec(), config.environment(), pair.u, 0, horizon);
  const auto est = lyapunov_exponent(series);

  Json doc = provenance("lyapunov", config);
  doc["horizon"] = horizon;
  doc["mean"] = est.mean;
  doc["standard_error"] = est.standard_error;
  doc["blocks"] = est.blocks;
  write_file(out / "lyapunov.json", dump(doc));

  std::string csv = csv_header("lyapunov", config) + "step,log_kappa\n";
  for (std::size_t k = 0; k < series.size(); ++k)
    csv += std::to_string(k + 1) + "," + format_double(series[k]) + "\n";
  write_file(out / "lyapunov_kappa.csv", csv);
  io.out << "lyapunov: " << format_double(est.mean) << " +- " << format_double(est.standard_error) << "\n";
  return kOk;
}

int cmd_gibbs_marginal(const ExperimentConfig& config, int n, int m, const fs::path& out, Streams io) {
  const auto marg = pinned_approximant_marginal(config.spec(), config.environment(), config.window(), m, n);
  std::string csv = csv_header("gibbs marginal", config) + coordinate_columns("x", config.dimension) + "probability\n";
  double total = 0;
  for (std::size_t i = 0; i < marg.window.size(); ++i) {
    csv += point_cells(marg.window.point(i)) + format_double(marg.probabilities[i]) + "\n";
    total += marg.probabilities[i];
  }
  write_file(out / "marginal.csv", csv);
  io.out << "marginal: n=" << n << " m=" << m << " total " << format_double(total) << "\n";
  return kOk;
}

int cmd_gibbs_boundary(const ExperimentConfig& config, int l, int m, const fs::path& out, Streams io) {
  const auto dist = two_point_boundary(config.spec(), config.environment(), config.window(), l, m);
  const std::size_t n = dist.window.size();
  std::string csv = csv_header("gibbs boundary", config) + coordinate_columns("a", config.dimension) +
                    coordinate_columns("b", config.dimension) + "probability\n";
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      csv += point_cells(dist.window.point(a)) + point_cells(dist.window.point(b)) +
             format_double(dist.probabilities[a * n + b]) + "\n";
  write_file(out / "boundary.csv", csv);
  io.out << "boundary: l=" << l << " m=" << m << "\n";
  return kOk;
}

int cmd_gibbs_uniqueness(const ExperimentConfig& config, int l, int m1, int m2, int probe_r, const fs::path& out,
                         Streams io) {
  const auto diag = uniqueness_diagnostic(config.spec(), config.environment(), config.window(), m1, m2, l, probe_r);
  Json doc = provenance("gibbs uniqueness", config);
  doc["l"] = l;
  doc["m1"] = m1;
  doc["m2"] = m2;
  doc["tv"] = diag.tv;
  Json env;
  env["probe_r"] = diag.probe_r;
  env["ball_count_convention"] = diag.ball_count_convention;
  env["probe_time"] = diag.probe_time ? Json(*diag.probe_time) : Json(nullptr);
  env["coupling_c"] = diag.coupling_c ? Json(*diag.coupling_c) : Json(nullptr);
  env["minorization"] = diag.minorization ? Json(*diag.minorization) : Json(nullptr);
  env["iteration_factor"] = diag.iteration_factor ? Json(*diag.iteration_factor) : Json(nullptr);
  doc["envelope"] = env;
  write_file(out / "uniqueness.json", dump(doc));
  io.out << "uniqueness: tv " << format_double(diag.tv) << "\n";
  return kOk;
}

int cmd_gibbs_sample(const ExperimentConfig& config, int count, int m, const fs::path& out, Streams io) {
  if (m < 0) throw ParameterError("--m must be >= 0");
  const Point o = origin(config.dimension);
  const auto paths =
      sample_path(config.spec(), config.environment(), config.window(), -m, m, Pinned{o, o}, config.seed, count);
  std::string csv = csv_header("gibbs sample", config) + "path";
  for (int t = -m; t <= m; ++t) csv += ",t" + std::to_string(t);
  csv += "\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    csv += std::to_string(p);
    for (const auto& x : paths[p].positions) csv += "," + format_point(x);
    csv += "\n";
  }
  write_file(out / "samples.csv", csv);
  io.out << "sample: " << paths.size() << " paths on [" << -m << ", " << m << "]\n";
  return kOk;
}

int cmd_hilbert(const ExperimentConfig& config, int r, int intervals, int horizon, const fs::path& out, Streams io) {
  if (r < 1 || r > config.window_radius)
    throw ParameterError("--r must lie in [1, window_radius = " + std::to_string(config.window_radius) + "]");
  if (intervals < 1) throw ParameterError("--intervals must be >= 1");
  const auto spec = config.spec();
  const auto report = check_conditions(spec);
  if (!require_conditions(config, report, io)) return kConfigError;
  const double lambda = config.lambda_or_default(report);
  const auto env = config.environment();

  RegenerationOptions opts;
  opts.nu_horizon = config.nu_horizon;
  opts.k1_hat = config.k1_hat;
  const auto times = find_regeneration_times(env, spec, lambda, r, intervals + 1, horizon, opts);

  Json doc = provenance("hilbert", config);
  doc["r"] = r;
  doc["lambda"] = lambda;
  doc["horizon"] = horizon;
  doc["nu_horizon"] = times.nu_horizon;
  doc["min_spacing"] = times.min_spacing;
  doc["times"] = times.times;
  doc["complete"] = times.complete;
  if (times.times.size() < 2) {
    doc["error"] = "fewer than two regeneration times within horizon";
    write_file(out / "hilbert.json", dump(doc));
    io.err << "hilbert: found " << times.times.size() << " regeneration time(s) in [-" << horizon
           << ", 0]; need at least two\n";
    return kNonConvergence;
  }

  // trial fields: constant and exp(-|x|)
  const Window w = config.window();
  std::vector<double> decay(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) decay[i] = std::exp(-static_cast<double>(w.sup_norm_at(i)));
  std::vector<Field> trial = {Field::constant(w, 1.0), Field(w, decay)};

  ContractionAudit audit;
  try {
    audit = contraction_audit(spec, env, times, r, trial);
  } catch (const DomainError& e) {
    doc["error"] = std::string("non-positive kernel: ") + e.what();
    write_file(out / "hilbert.json", dump(doc));
    io.err << "hilbert: " << e.what() << "\n";
    return kNonConvergence;
  }
  Json rows = Json::array();
  for (const auto& iv : audit.intervals) {
    Json j;
    j["n_start"] = iv.n_start;
    j["n_end"] = iv.n_end;
    j["contraction_L"] = iv.contraction_L;
    j["birkhoff_bound"] = iv.bound;
    j["diam_before"] = iv.diam_before;
    j["diam_after_full"] = iv.diam_after_full;
    j["diam_after_truncated"] = iv.diam_after_truncated;
    j["truncated_factor"] = iv.truncated_factor;
    j["min_slack"] = iv.min_slack;
    j["birkhoff_holds"] = iv.birkhoff_holds;
    j["influx"] = iv.influx;
    j["empirical_k2"] = iv.empirical_k2;
    rows.push_back(std::move(j));
  }
  doc["intervals"] = rows;
  doc["roundoff_allowance"] = kBirkhoffRoundoff;
  doc["all_hold"] = audit.all_hold;
  write_file(out / "hilbert.json", dump(doc));
  io.out << "hilbert: " << audit.intervals.size() << " interval(s), all_hold=" << (audit.all_hold ? "true" : "false")
         << "\n";
  return kOk;
}

int cmd_oracle(const ExperimentConfig& config, const OracleFlags& flags, const fs::path& out, Streams io) {
  if (flags.budget < 0) throw ParameterError("--budget must be >= 0");
  OracleSuiteOptions opts;
  opts.instances = flags.budget;
  opts.seed = config.seed;
  opts.corrupt_transfer = flags.corrupt_transfer;
  opts.include_sampler = flags.budget > 0;
  const auto rep = run_oracle_suite(opts);

  Json doc = provenance("oracle", config);
  doc["instances"] = rep.instances;
  doc["vacuous"] = rep.vacuous;
  doc["tolerance"] = opts.tolerance;
  doc["max_error"] = rep.max_error;
  doc["max_transfer_error"] = rep.max_transfer_error;
  doc["max_partition_error"] = rep.max_partition_error;
  doc["max_path_probability_error"] = rep.max_path_probability_error;
  doc["max_marginal_error"] = rep.max_marginal_error;
  doc["sampler_run"] = rep.sampler_run;
  doc["sampler_p_value"] = rep.sampler_p_value;
  doc["passed"] = rep.passed;
  Json bad = Json::array();
  for (const auto& m : rep.mismatches) {
    Json j;
    j["instance"] = m.instance;
    j["check"] = m.check;
    j["error"] = m.error;
    j["dump"] = m.dump;
    bad.push_back(std::move(j));
  }
  doc["mismatches"] = bad;
  write_file(out / "oracle.json", dump(doc));

  if (!rep.passed) {
    io.err << "oracle: " << rep.mismatches.size() << " mismatch(es)\n";
    for (const auto& m : rep.mismatches)
      io.err << "  instance " << m.instance << " " << m.check << " error " << format_double(m.error) << " : "
             << m.dump << "\n";
    return kOracleMismatch;
  }
  io.out << "oracle: " << (rep.vacuous ? "vacuous pass (0 instances)" : "pass") << ", max error "
         << format_double(rep.max_error) << "\n";
  return kOk;
}

}  // namespace pinlab
