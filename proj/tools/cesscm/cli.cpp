#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cesscm/error.hpp"
#include "cesscm/estimators.hpp"
#include "cesscm/matrix_io.hpp"
#include "cesscm/mc_verify.hpp"
#include "cesscm/presets.hpp"
#include "cesscm/report_json.hpp"
#include "cesscm/sampler.hpp"
#include "cesscm/theory.hpp"

namespace cesscm::cli {

namespace {

using nlohmann::json;

// Configuration problem detected after parsing; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool ci_mode() {
  const char* v = std::getenv(kCiEnvVar);
  return v != nullptr && std::string(v) == "1";
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, const char* command) {
  if (seed) return *seed;
  if (ci_mode()) {
    throw UsageError(std::string(command) + ": --seed is required when " + kCiEnvVar + "=1");
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

HermitianMatrix load_covariance(const std::string& spec, Index p, std::uint64_t seed) {
  HermitianMatrix m;
  if (parse_covariance_preset(spec, p, seed, m)) return m;
  const ComplexMatrix a = read_complex_csv(std::filesystem::path(spec));
  if (a.rows() != p || a.cols() != p) {
    throw UsageError("--cov file " + spec + " is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " but --p is " + std::to_string(p));
  }
  return HermitianMatrix(a);
}

ComplexVector load_mean(const std::string& spec, Index p) {
  if (spec == "zero") return ComplexVector::Zero(p);
  const ComplexMatrix a = read_complex_csv(std::filesystem::path(spec));
  if (a.size() != p || (a.rows() != 1 && a.cols() != 1)) {
    throw UsageError("--mu file " + spec + " must hold a 1x" + std::to_string(p) + " or " +
                     std::to_string(p) + "x1 vector to match --p");
  }
  return a.rows() == 1 ? ComplexVector(a.row(0).transpose()) : ComplexVector(a.col(0));
}

void require_positive(long long v, const char* flag) {
  if (v < 1) throw UsageError(std::string(flag) + " must be >= 1");
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// Writes to the --out path, or to `out` when the path is empty or "-".
template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::kIo, "cannot open " + path + " for writing");
  fn(file);
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string dist = "gaussian";
  long long n = 0;
  long long p = 0;
  std::string mu = "zero";
  std::string cov = "identity";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t workers = 1;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  require_positive(a.n, "--n");
  require_positive(a.p, "--p");
  const std::uint64_t seed = resolve_seed(a.seed, "sample");
  const DistributionFamily family = DistributionFamily::parse(a.dist);
  const HermitianMatrix cov = load_covariance(a.cov, a.p, seed);
  const CESModel model(load_mean(a.mu, a.p), cov, family);
  const Dataset data = sample_ces(model, a.n, RngStream{seed, 0}, a.workers);
  with_output(a.out, out, [&](std::ostream& o) { write_complex_csv(o, data.matrix()); });

  const ScaleSphericity ss = scale_and_sphericity(cov);
  emit(err, {{"schema_version", kJsonSchemaVersion},
             {"n", a.n},
             {"p", a.p},
             {"family", family.to_string()},
             {"kappa", model.kappa()},
             {"eta", ss.eta},
             {"gamma", ss.gamma},
             {"seed", seed}});
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct TheoryArgs {
  long long n = 0;
  long long p = 0;
  double kappa = 0.0;
  std::optional<double> gamma;
  std::optional<std::string> cov;
  bool json_out = false;
};

int cmd_theory(const TheoryArgs& a, std::ostream& out) {
  require_positive(a.p, "--p");
  if (a.kappa < kurtosis_lower_bound(a.p)) {
    throw UsageError("--kappa " + format_double(a.kappa, 12) + " is below -1/(p+1) = " +
                     format_double(kurtosis_lower_bound(a.p), 12) + " for --p " +
                     std::to_string(a.p));
  }
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (a.gamma.has_value() == a.cov.has_value()) {
    throw UsageError("exactly one of --gamma and --cov is required");
  }
  ShrinkageReport rep;
  if (a.gamma) {
    if (*a.gamma < 1.0 || *a.gamma > static_cast<double>(a.p)) {
      throw UsageError("--gamma must lie in [1, --p]");
    }
    rep = shrinkage_report(a.p, *a.gamma, a.n, a.kappa);
  } else {
    rep = shrinkage_report(load_covariance(*a.cov, a.p, 0), a.n, a.kappa);
  }
  const RadialStructure rs = scm_radial_structure(a.n, a.kappa, a.p);
  json j = to_json(rep);
  j["sigma"] = rs.sigma();
  j["tau1"] = rs.tau1();
  j["tau2"] = rs.tau2();
  j["schema_version"] = kJsonSchemaVersion;
  if (a.json_out) {
    emit(out, j);
  } else {
    for (const char* key : {"n", "p", "kappa", "eta", "gamma", "tau1", "tau2", "mse", "nmse",
                            "beta_o", "oracle_mse"}) {
      out << key << ": " << j[key].dump() << '\n';
    }
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  long long n = 10;
  long long p = 10;
  double gamma = 2.0;
  std::optional<double> kappa_min;
  double kappa_max = 3.0;
  int steps = 40;
  std::string out;
};

int cmd_curve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  require_positive(a.p, "--p");
  if (a.n < 2) throw UsageError("--n must be >= 2");
  const double lower = kurtosis_lower_bound(a.p);
  const double kmin = a.kappa_min.value_or(lower);
  if (kmin < lower) {
    throw UsageError("--kappa-min " + format_double(kmin, 12) + " is below -1/(p+1) = " +
                     format_double(lower, 12));
  }
  if (a.kappa_max < kmin) throw UsageError("--kappa-max is below --kappa-min");
  if (a.steps < 1) throw UsageError("--steps must be >= 1");
  if (a.gamma < 1.0 || a.gamma > static_cast<double>(a.p)) {
    throw UsageError("--gamma must lie in [1, --p]");
  }
  const auto curve = shrinkage_curve(a.n, a.p, a.gamma, linear_grid(kmin, a.kappa_max, a.steps));
  with_output(a.out, out, [&](std::ostream& o) {
    o << "kappa,beta_o\n";
    for (const auto& [kappa, beta] : curve) {
      o << format_double(kappa, 12) << ',' << format_double(beta, 12) << '\n';
    }
  });
  emit(err, {{"schema_version", kJsonSchemaVersion},
             {"expression", "beta_o = 1 / (1 + (p/gamma) (1/(n-1) + kappa/n) + kappa/n)"},
             {"n", a.n},
             {"p", a.p},
             {"gamma", a.gamma},
             {"kappa_min", kmin},
             {"kappa_max", a.kappa_max},
             {"rows", curve.size()}});
  return kExitPass;
}

// ---------------------------------------------------------------------------

struct McArgs {
  std::string target;
  std::optional<std::string> dist;
  std::optional<long long> n;
  long long p = 0;
  std::optional<std::string> cov;
  std::optional<std::string> statistic;
  std::optional<long long> reps;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  bool json_out = false;
};

void forbid(bool present, const char* flag, const std::string& target) {
  if (present) {
    throw UsageError(std::string(flag) + " cannot be combined with --target " + target);
  }
}

int cmd_mc_verify(const McArgs& a, std::ostream& out) {
  require_positive(a.p, "--p");
  if (a.workers < 1) throw UsageError("--workers must be >= 1");
  const std::uint64_t seed = resolve_seed(a.seed, "mc-verify");
  const auto started = std::chrono::steady_clock::now();

  json config = {{"target", a.target}, {"p", a.p}, {"workers", a.workers}};
  json extra = json::object();
  ComparisonReport report;

  if (a.target == "sphere") {
    forbid(a.dist.has_value(), "--dist", a.target);
    forbid(a.n.has_value(), "--n", a.target);
    forbid(a.cov.has_value(), "--cov", a.target);
    forbid(a.statistic.has_value(), "--statistic", a.target);
    const long long draws = a.reps.value_or(1000000);
    if (draws < 10000) throw UsageError("--reps must be >= 10000 for --target sphere");
    config["reps"] = draws;
    report = verify_sphere_moments(a.p, static_cast<std::size_t>(draws), seed, a.workers);
  } else if (a.target == "thm1" || a.target == "thm3" || a.target == "transport" ||
             a.target == "oracle") {
    if (!a.n) throw UsageError("--n is required for --target " + a.target);
    if (*a.n < 2) throw UsageError("--n must be >= 2");
    const DistributionFamily family = DistributionFamily::parse(a.dist.value_or("gaussian"));
    const double kappa = elliptical_kurtosis(family);
    const StatisticSpec statistic = StatisticSpec::parse(a.statistic.value_or("scm"));
    if (a.target != "thm1" && statistic.kind != StatisticKind::kScm) {
      throw UsageError("--statistic " + statistic.to_string() +
                       " cannot be combined with --target " + a.target +
                       " (closed forms exist for the SCM only)");
    }
    const bool spherical = a.target == "thm1" || a.target == "thm3";
    if (spherical) forbid(a.cov.has_value(), "--cov", a.target);
    if (a.target == "transport" && !a.cov) {
      throw UsageError("--cov is required for --target transport");
    }
    const HermitianMatrix cov =
        spherical ? HermitianMatrix::identity(a.p) : load_covariance(a.cov.value_or("identity"), a.p, seed);
    const long long reps = a.reps.value_or(kappa > 0.0 ? 500000 : 200000);
    if (reps < 2) throw UsageError("--reps must be >= 2");

    MCConfig cfg{static_cast<std::size_t>(reps), *a.n,
                 CESModel(ComplexVector::Zero(a.p), cov, family), statistic, seed, a.workers};
    config["dist"] = family.to_string();
    config["n"] = *a.n;
    config["reps"] = reps;
    config["statistic"] = statistic.to_string();
    config["cov"] = spherical ? "identity" : a.cov.value_or("identity");
    config["kappa"] = kappa;
    const Tolerances tol = Tolerances::for_kappa(kappa);

    if (a.target == "thm1") {
      const RadialEstimate est = estimate_radial_structure(cfg);
      report = compare_to_theory(
          est.moments, radial_var_structure(est.tau1, est.tau2, a.p), tol);
      extra["radial_estimate"] = to_json(est);
    } else if (a.target == "thm3") {
      const RadialEstimate est = estimate_radial_structure(cfg);
      const RadialStructure theory = scm_radial_structure(*a.n, kappa, a.p);
      report = compare_to_theory(est.moments, affine_equivariant_var(cov, theory), tol);
      add_radial_checks(report, est, theory);
      add_mse_check(report, est.moments, mse_scm(cov, *a.n, kappa).mse);
      extra["radial_estimate"] = to_json(est);
    } else if (a.target == "transport") {
      const EmpiricalMoments emp = empirical_moments(cfg);
      const RadialStructure theory = scm_radial_structure(*a.n, kappa, a.p);
      report = compare_to_theory(emp, affine_equivariant_var(cov, theory), tol);
      add_mse_check(report, emp, mse_scm(cov, *a.n, kappa).mse);
      const RadialStructure doubled(theory.sigma(), 2.0 * theory.tau1(), theory.tau2(), a.p);
      const ComparisonReport control =
          compare_to_theory(emp, affine_equivariant_var(cov, doubled), tol);
      Check neg;
      neg.name = "negative_control_rejected";
      neg.estimate = std::max(control.max_se_dev_var, control.max_se_dev_pvar);
      neg.target = tol.se_multiplier;
      neg.deviation = neg.estimate;
      neg.tolerance = tol.se_multiplier;
      neg.criterion = Criterion::kStandardErrors;
      neg.pass = !control.pass;
      neg.detail = "theory with tau1 doubled must fail";
      report.add(std::move(neg));
    } else {
      Tolerances otol = tol;
      otol.se_multiplier = 3.0;
      const ScaleSphericity ss = scale_and_sphericity(cov);
      report = verify_oracle_efficiency(cfg, ss.gamma, kappa, otol);
      extra["beta_o"] = beta_opt(nmse_from_sphericity(a.p, ss.gamma, *a.n, kappa));
      extra["gamma"] = ss.gamma;
    }
  } else {
    throw UsageError("unknown --target '" + a.target +
                     "' (expected thm1, thm3, transport, sphere or oracle)");
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json j = {{"schema_version", kJsonSchemaVersion},
            {"target", a.target},
            {"config", config},
            {"seed", seed},
            {"wall_time_s", wall},
            {"pass", report.pass},
            {"report", to_json(report)}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (a.json_out) {
    emit(out, j);
  } else {
    for (const Check& c : report.checks) {
      out << (c.informational ? "[info] " : c.pass ? "[pass] " : "[FAIL] ") << c.name
          << ": estimate " << format_double(c.estimate, 8) << ", target "
          << format_double(c.target, 8) << ", deviation " << format_double(c.deviation, 4)
          << " (tolerance " << format_double(c.tolerance, 4) << ", "
          << to_string(c.criterion) << ")\n";
    }
    out << (report.pass ? "PASS" : "FAIL") << " (seed " << seed << ", "
        << format_double(wall, 4) << " s)\n";
  }
  return report.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::string out_scm;
  bool json_out = false;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset data(read_complex_csv(std::filesystem::path(a.in)));
  json j = {{"schema_version", kJsonSchemaVersion}, {"n", data.n()}, {"p", data.p()}};
  int code = kExitPass;
  try {
    const ScmResult s = scm(data);
    j["mean"] = complex_matrix_json(s.mean.transpose());
    if (!a.out_scm.empty()) {
      write_complex_csv(std::filesystem::path(a.out_scm), s.scatter.matrix());
      j["scm_file"] = a.out_scm;
    } else {
      j["scm"] = complex_matrix_json(s.scatter.matrix());
    }
    const double kappa = estimate_kurtosis(data);
    j["kappa"] = kappa;
    const ScaleSphericity ss = scale_and_sphericity(s.scatter);
    j["eta"] = ss.eta;
    j["gamma"] = ss.gamma;
    const double gamma = std::clamp(ss.gamma, 1.0, static_cast<double>(data.p()));
    const double nmse = nmse_from_sphericity(data.p(), gamma, data.n(), kappa);
    j["nmse"] = nmse;
    j["beta_o"] = beta_opt(nmse);
    j["partial"] = false;
  } catch (const Error& e) {
    j["partial"] = true;
    j["error"] = e.what();
    err << "estimate: " << e.what() << '\n';
    code = kExitError;
  }
  if (a.json_out) {
    emit(out, j);
  } else {
    for (auto& [k, v] : j.items()) out << k << ": " << v.dump() << '\n';
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex elliptical sampling, SCM second-order theory and Monte Carlo checks",
               "cesscm"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Draw an n x p dataset from a CES model");
  sample->add_option("--dist", sa.dist, "gaussian | t:NU | k:ALPHA")->capture_default_str();
  sample->add_option("--n", sa.n, "Number of observations")->required();
  sample->add_option("--p", sa.p, "Dimension")->required();
  sample->add_option("--mu", sa.mu, "zero or complex CSV file")->capture_default_str();
  sample->add_option("--cov", sa.cov,
                     "identity | diag:a,b,... | spiked:gamma=G | random | CSV file")
      ->capture_default_str();
  sample->add_option("--seed", sa.seed, "Random seed");
  sample->add_option("--out", sa.out, "Output CSV path (stdout when omitted)");
  sample->add_option("--workers", sa.workers, "Worker threads")->capture_default_str();

  TheoryArgs ta;
  auto* theory = app.add_subcommand("theory", "Closed-form SCM MSE and oracle shrinkage");
  theory->add_option("--n", ta.n, "Sample size")->required();
  theory->add_option("--p", ta.p, "Dimension")->required();
  theory->add_option("--kappa", ta.kappa, "Elliptical kurtosis")->required();
  auto* tg = theory->add_option("--gamma", ta.gamma, "Sphericity in [1, p]");
  auto* tc = theory->add_option("--cov", ta.cov, "Covariance preset or CSV file");
  tg->excludes(tc);
  theory->add_flag("--json", ta.json_out, "Print JSON");

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "beta_o as a function of kappa (CSV)");
  curve->add_option("--n", ca.n, "Sample size")->capture_default_str();
  curve->add_option("--p", ca.p, "Dimension")->capture_default_str();
  curve->add_option("--gamma", ca.gamma, "Sphericity")->capture_default_str();
  curve->add_option("--kappa-min", ca.kappa_min, "Lower end (default -1/(p+1))");
  curve->add_option("--kappa-max", ca.kappa_max, "Upper end")->capture_default_str();
  curve->add_option("--steps", ca.steps, "Grid intervals")->capture_default_str();
  curve->add_option("--out", ca.out, "Output CSV path (stdout when omitted)");

  McArgs ma;
  auto* mc = app.add_subcommand("mc-verify", "Monte Carlo verification of a closed form");
  mc->add_option("--target", ma.target, "thm1 | thm3 | transport | sphere | oracle")
      ->required();
  mc->add_option("--dist", ma.dist, "gaussian | t:NU | k:ALPHA");
  mc->add_option("--n", ma.n, "Observations per replication");
  mc->add_option("--p", ma.p, "Dimension")->required();
  mc->add_option("--cov", ma.cov, "Covariance preset or CSV file");
  mc->add_option("--statistic", ma.statistic, "scm | wscm:unit | wscm:fobi (thm1)");
  mc->add_option("--reps", ma.reps, "Replications (draws for sphere)");
  mc->add_option("--seed", ma.seed, "Random seed");
  mc->add_option("--workers", ma.workers, "Worker threads")->capture_default_str();
  mc->add_flag("--json", ma.json_out, "Print JSON report");

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "Estimates from a dataset CSV");
  estimate->add_option("--in", ea.in, "Dataset CSV")->required();
  estimate->add_option("--out-scm", ea.out_scm, "Write the SCM to this CSV file");
  estimate->add_flag("--json", ea.json_out, "Print JSON");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (sample->parsed()) return cmd_sample(sa, out, err);
    if (theory->parsed()) return cmd_theory(ta, out);
    if (curve->parsed()) return cmd_curve(ca, out, err);
    if (mc->parsed()) return cmd_mc_verify(ma, out);
    if (estimate->parsed()) return cmd_estimate(ea, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cesscm::cli
