#pragma once

#include <nlohmann/json.hpp>

#include "cesscm/mc_verify.hpp"
#include "cesscm/theory.hpp"

namespace cesscm {

inline constexpr int kJsonSchemaVersion = 1;

/// Flat object with exactly the fields eta, gamma, kappa, n, p, mse, nmse,
/// beta_o, oracle_mse.
nlohmann::json to_json(const ShrinkageReport& report);

/// Deviations, tolerances, per-check results and the overall pass flag.
nlohmann::json to_json(const ComparisonReport& report);

nlohmann::json to_json(const Tolerances& tol);
nlohmann::json to_json(const Check& check);
std::string_view to_string(Criterion criterion);

/// sigma / tau estimates with standard errors (moment matrices omitted).
nlohmann::json to_json(const RadialEstimate& est);

nlohmann::json complex_matrix_json(const ComplexMatrix& a);

}  // namespace cesscm
