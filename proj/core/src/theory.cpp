#include "cesscm/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cesscm/error.hpp"
#include "cesscm/matrix_io.hpp"
#include "cesscm/sampler.hpp"

namespace cesscm {

namespace {

[[noreturn]] void domain_error(const std::string& message) {
  throw Error(ErrorKind::kInvalidArgument, message);
}

void check_kappa(double kappa, Index p) {
  if (!std::isfinite(kappa) || kappa < kurtosis_lower_bound(p)) {
    domain_error("kappa = " + format_double(kappa, 12) + " is below -1/(p+1) = " +
                 format_double(kurtosis_lower_bound(p), 12));
  }
}

void check_n(Index n) {
  if (n < 2) domain_error("n must be >= 2, got " + std::to_string(n));
}

void check_gamma(double gamma, Index p) {
  if (!std::isfinite(gamma) || gamma < 1.0 || gamma > static_cast<double>(p)) {
    domain_error("sphericity gamma = " + format_double(gamma, 12) +
                 " outside [1, p = " + std::to_string(p) + "]");
  }
}

double tau1_of(Index n, double kappa) {
  return 1.0 / static_cast<double>(n - 1) + kappa / static_cast<double>(n);
}

}  // namespace

RadialStructure::RadialStructure(double sigma, double tau1, double tau2, Index p)
    : sigma_(sigma), tau1_(tau1), tau2_(tau2), p_(p) {
  if (p < 1) domain_error("radial structure needs p >= 1");
  if (!std::isfinite(sigma) || !std::isfinite(tau1) || !std::isfinite(tau2)) {
    domain_error("radial structure constants must be finite");
  }
  if (tau1 < 0.0) domain_error("tau1 must be >= 0, got " + format_double(tau1, 12));
  // Exact boundary tau2 = -tau1/p must survive the division round-off.
  const double bound = -tau1 / static_cast<double>(p);
  if (tau2 < bound - 4.0 * std::numeric_limits<double>::epsilon() * std::abs(bound)) {
    domain_error("tau2 = " + format_double(tau2, 12) + " violates tau2 >= -tau1/p = " +
                 format_double(bound, 12));
  }
}

CovariancePair radial_var_structure(double tau1, double tau2, Index p) {
  const RadialStructure s(1.0, tau1, tau2, p);
  const Index q = p * p;
  const ComplexVector vi = vec(ComplexMatrix::Identity(p, p));
  const ComplexMatrix outer = vi * vi.transpose();
  CovariancePair out;
  out.var = s.tau1() * ComplexMatrix::Identity(q, q) + s.tau2() * outer;
  out.pvar = s.tau1() * commutation_matrix(p).cast<Complex>() + s.tau2() * outer;
  return out;
}

CovariancePair affine_equivariant_var(const HermitianMatrix& m, const RadialStructure& s) {
  if (m.dim() != s.p()) {
    throw Error(ErrorKind::kShapeMismatch,
                "matrix dimension " + std::to_string(m.dim()) +
                    " does not match radial structure p = " + std::to_string(s.p()));
  }
  const ComplexMatrix mk = kron(m.matrix().conjugate(), m.matrix());
  const ComplexVector vm = vec(m.matrix());
  CovariancePair out;
  out.var = s.tau1() * mk + s.tau2() * (vm * vm.adjoint());
  out.pvar = s.tau1() * (mk * commutation_matrix(m.dim()).cast<Complex>()) +
             s.tau2() * (vm * vm.transpose());
  // Exact Hermitian symmetry of var.
  out.var = (0.5 * (out.var + out.var.adjoint())).eval();
  return out;
}

RadialStructure scm_radial_structure(Index n, double kappa, Index p) {
  check_n(n);
  check_kappa(kappa, p);
  return RadialStructure(1.0, tau1_of(n, kappa), kappa / static_cast<double>(n), p);
}

MseResult mse_scm(const HermitianMatrix& m, Index n, double kappa) {
  check_n(n);
  check_kappa(kappa, m.dim());
  const double tr = m.trace();
  if (!(tr > 0.0)) {
    throw Error(ErrorKind::kZeroTrace, "MSE needs tr(M) > 0");
  }
  const double tr2 = m.trace_of_square();
  const double mse = tau1_of(n, kappa) * tr * tr + kappa / static_cast<double>(n) * tr2;
  return {mse, mse / tr2};
}

double nmse_from_sphericity(Index p, double gamma, Index n, double kappa) {
  check_n(n);
  check_kappa(kappa, p);
  check_gamma(gamma, p);
  return static_cast<double>(p) / gamma * tau1_of(n, kappa) +
         kappa / static_cast<double>(n);
}

double beta_opt(double nmse) {
  if (!std::isfinite(nmse) || !(nmse > 0.0)) {
    domain_error("NMSE must be positive, got " + format_double(nmse, 12));
  }
  return 1.0 / (nmse + 1.0);
}

double oracle_mse(double beta_o, double mse) {
  if (!(beta_o > 0.0 && beta_o < 1.0)) {
    domain_error("beta_o must lie in (0, 1), got " + format_double(beta_o, 12));
  }
  if (!(mse > 0.0) || !std::isfinite(mse)) {
    domain_error("MSE must be positive, got " + format_double(mse, 12));
  }
  return beta_o * mse;
}

double scaled_scm_mse(double beta, double mse, double fro_norm_sq) {
  return beta * beta * mse + (1.0 - beta) * (1.0 - beta) * fro_norm_sq;
}

double beta_opt_univariate(Index n, double kurt) {
  check_n(n);
  if (!std::isfinite(kurt) || kurt < -1.0) {
    domain_error("univariate kurtosis must be >= -1, got " + format_double(kurt, 12));
  }
  const auto nd = static_cast<double>(n);
  return nd * (nd - 1.0) / (kurt * (nd - 1.0) + nd * nd);
}

std::vector<std::pair<double, double>> shrinkage_curve(
    Index n, Index p, double gamma, const std::vector<double>& kappa_grid) {
  check_gamma(gamma, p);
  std::vector<std::pair<double, double>> out;
  out.reserve(kappa_grid.size());
  for (double kappa : kappa_grid) {
    out.emplace_back(kappa, beta_opt(nmse_from_sphericity(p, gamma, n, kappa)));
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (steps < 1) domain_error("grid needs at least one step");
  if (!(hi >= lo)) domain_error("grid upper end is below its lower end");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * t;
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ShrinkageReport shrinkage_report(const HermitianMatrix& m, Index n, double kappa) {
  const ScaleSphericity ss = scale_and_sphericity(m);
  const MseResult r = mse_scm(m, n, kappa);
  ShrinkageReport rep;
  rep.eta = ss.eta;
  rep.gamma = ss.gamma;
  rep.kappa = kappa;
  rep.n = n;
  rep.p = m.dim();
  rep.mse = r.mse;
  rep.nmse = r.nmse;
  rep.beta_o = beta_opt(r.nmse);
  rep.oracle_mse = oracle_mse(rep.beta_o, r.mse);
  return rep;
}

ShrinkageReport shrinkage_report(Index p, double gamma, Index n, double kappa, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorKind::kZeroTrace, "scale eta must be positive");
  }
  ShrinkageReport rep;
  rep.eta = eta;
  rep.gamma = gamma;
  rep.kappa = kappa;
  rep.n = n;
  rep.p = p;
  rep.nmse = nmse_from_sphericity(p, gamma, n, kappa);
  // ||M||_F^2 = tr(M^2) = gamma tr(M)^2 / p = gamma p eta^2
  const double fro_sq = gamma * static_cast<double>(p) * eta * eta;
  rep.mse = rep.nmse * fro_sq;
  rep.beta_o = beta_opt(rep.nmse);
  rep.oracle_mse = oracle_mse(rep.beta_o, rep.mse);
  return rep;
}

}  // namespace cesscm
