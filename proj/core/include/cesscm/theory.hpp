#pragma once

#include <utility>
#include <vector>

#include "cesscm/linalg.hpp"

namespace cesscm {

/// (sigma, tau1, tau2) describing the second-order structure of a radially
/// distributed Hermitian statistic in dimension p. Construction enforces
/// tau1 >= 0 and tau2 >= -tau1 / p.
class RadialStructure {
 public:
  RadialStructure(double sigma, double tau1, double tau2, Index p);

  double sigma() const { return sigma_; }
  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }
  Index p() const { return p_; }

 private:
  double sigma_;
  double tau1_;
  double tau2_;
  Index p_;
};

/// Covariance and pseudo-covariance of vec(M-hat), both p^2 x p^2.
struct CovariancePair {
  ComplexMatrix var;
  ComplexMatrix pvar;
};

/// var = tau1 I + tau2 vec(I) vec(I)^T, pvar = tau1 K_p + tau2 vec(I) vec(I)^T.
CovariancePair radial_var_structure(double tau1, double tau2, Index p);

/// Transport of the spherical-model structure to covariance M:
///   var  = tau1 (M^* (x) M) + tau2 vec(M) vec(M)^H
///   pvar = tau1 (M^* (x) M) K_p + tau2 vec(M) vec(M)^T
CovariancePair affine_equivariant_var(const HermitianMatrix& m, const RadialStructure& s);

/// SCM constants: sigma = 1, tau1 = 1/(n-1) + kappa/n, tau2 = kappa/n.
RadialStructure scm_radial_structure(Index n, double kappa, Index p);

struct MseResult {
  double mse = 0.0;
  double nmse = 0.0;
};

/// E||S - M||_F^2 and its normalization by ||M||_F^2.
MseResult mse_scm(const HermitianMatrix& m, Index n, double kappa);

/// NMSE expressed through sphericity only: (p/gamma)(1/(n-1) + kappa/n) + kappa/n.
double nmse_from_sphericity(Index p, double gamma, Index n, double kappa);

/// MSE-optimal scaling beta_o = 1 / (NMSE + 1).
double beta_opt(double nmse);

/// MSE of beta_o S, which equals beta_o * MSE(S).
double oracle_mse(double beta_o, double mse);

/// E||beta S - M||^2 = beta^2 MSE + (1 - beta)^2 ||M||_F^2 for any real beta.
double scaled_scm_mse(double beta, double mse, double fro_norm_sq);

/// p = 1 closed form n(n-1) / (kurt (n-1) + n^2), kurt >= -1.
double beta_opt_univariate(Index n, double kurt);

/// (kappa, beta_o) pairs over kappa_grid for fixed n, p, gamma.
std::vector<std::pair<double, double>> shrinkage_curve(
    Index n, Index p, double gamma, const std::vector<double>& kappa_grid);

/// Evenly spaced grid with `steps` intervals (steps + 1 points, endpoints exact).
std::vector<double> linear_grid(double lo, double hi, int steps);

struct ShrinkageReport {
  double eta = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  Index n = 0;
  Index p = 0;
  double mse = 0.0;
  double nmse = 0.0;
  double beta_o = 0.0;
  double oracle_mse = 0.0;
};

/// Report for a concrete covariance M.
ShrinkageReport shrinkage_report(const HermitianMatrix& m, Index n, double kappa);

/// Report from (p, gamma) alone at scale eta (MSE scales with eta^2).
ShrinkageReport shrinkage_report(Index p, double gamma, Index n, double kappa,
                                 double eta = 1.0);

}  // namespace cesscm
