#include "cesscm/report_json.hpp"

#include <cmath>

namespace cesscm {

namespace {

// JSON has no infinity; unbounded deviations serialize as null.
nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json optional_number(const std::optional<double>& x) {
  return x ? number(*x) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const ShrinkageReport& r) {
  return {
      {"eta", r.eta},   {"gamma", r.gamma}, {"kappa", r.kappa},
      {"n", r.n},       {"p", r.p},         {"mse", r.mse},
      {"nmse", r.nmse}, {"beta_o", r.beta_o}, {"oracle_mse", r.oracle_mse},
  };
}

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::kStandardErrors: return "standard_errors";
    case Criterion::kRelative: return "relative";
    case Criterion::kAbsolute: return "absolute";
    case Criterion::kBelowTarget: return "below_target";
  }
  return "unknown";
}

nlohmann::json to_json(const Tolerances& tol) {
  return {{"se_multiplier", tol.se_multiplier},
          {"rel_tau", tol.rel_tau},
          {"rel_mse", tol.rel_mse},
          {"abs_floor", tol.abs_floor}};
}

nlohmann::json to_json(const Check& c) {
  nlohmann::json j = {
      {"name", c.name},
      {"estimate", number(c.estimate)},
      {"target", number(c.target)},
      {"standard_error", number(c.standard_error)},
      {"deviation", number(c.deviation)},
      {"tolerance", number(c.tolerance)},
      {"criterion", std::string(to_string(c.criterion))},
      {"informational", c.informational},
      {"pass", c.pass},
  };
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks) checks.push_back(to_json(c));
  return {
      {"max_abs_dev_var", number(r.max_abs_dev_var)},
      {"max_abs_dev_pvar", number(r.max_abs_dev_pvar)},
      {"max_se_dev_var", number(r.max_se_dev_var)},
      {"max_se_dev_pvar", number(r.max_se_dev_pvar)},
      {"rel_err_tau1", optional_number(r.rel_err_tau1)},
      {"rel_err_tau2", optional_number(r.rel_err_tau2)},
      {"rel_err_mse", optional_number(r.rel_err_mse)},
      {"tolerances", to_json(r.tolerances)},
      {"checks", checks},
      {"pass", r.pass},
  };
}

nlohmann::json to_json(const RadialEstimate& e) {
  return {{"sigma", e.sigma},       {"tau1", e.tau1},       {"tau2", e.tau2},
          {"se_sigma", e.se_sigma}, {"se_tau1", e.se_tau1}, {"se_tau2", e.se_tau2},
          {"replications", e.moments.replications},
          {"se_scale", e.moments.se_scale}};
}

nlohmann::json complex_matrix_json(const ComplexMatrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cesscm
