#pragma once

#include <functional>

#include "cesscm/dataset.hpp"
#include "cesscm/linalg.hpp"

namespace cesscm {

/// Clip offset above -1/(p+1) applied by estimate_kurtosis.
inline constexpr double kKurtosisClipEpsilon = 1e-6;

struct ScmResult {
  HermitianMatrix scatter;  // unbiased SCM, divisor n - 1
  ComplexVector mean;
  Index n = 0;
};

ComplexVector sample_mean(const Dataset& x);

/// Unbiased sample covariance matrix (n >= 2), accumulated from deviations
/// about the sample mean.
ScmResult scm(const Dataset& x);

/// The same statistic in centering-matrix form (n - 1)^{-1} X^T H X^*.
/// Kept as an independent construction path for cross-checking scm().
HermitianMatrix scm_centering_form(const Dataset& x);

/// (n - 1)^{-1} sum |x_i - xbar|^2 for a complex sample, n >= 2.
double sample_variance(const ComplexVector& x);

using WeightFunction = std::function<double(double)>;

/// R = n^{-1} sum u(d_i) (x_i - xbar)(x_i - xbar)^H with Mahalanobis distances
/// d_i = (x_i - xbar)^H S^{-1} (x_i - xbar) taken against the unbiased SCM.
/// u(s) = s gives the FOBI fourth-moment matrix. Needs n > p.
HermitianMatrix weighted_scm(const Dataset& x, const WeightFunction& weight);

/// Mahalanobis distances d_i used by weighted_scm.
RealVector mahalanobis_distances(const Dataset& x);

/// Average over coordinates of the complex sample kurtosis
/// m4 / m2^2 - 2 (1/n sample moments), halved, and clipped below at
/// -1/(p+1) + kKurtosisClipEpsilon. Needs n >= 4.
double estimate_kurtosis(const Dataset& x);

}  // namespace cesscm
