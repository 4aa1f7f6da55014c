#include "cesscm/estimators.hpp"

#include <cmath>
#include <string>

#include "cesscm/error.hpp"
#include "cesscm/sampler.hpp"

namespace cesscm {

namespace {

void require_observations(Index n, Index needed, const char* what) {
  if (n < needed) {
    throw Error(ErrorKind::kTooFewObservations,
                std::string(what) + " needs n >= " + std::to_string(needed) +
                    ", got " + std::to_string(n));
  }
}

// Rows minus the sample mean, computed about the first row so that identical
// rows give exactly zero deviations.
ComplexMatrix deviations(const ComplexMatrix& x, ComplexVector* mean_out) {
  const Index n = x.rows();
  const Eigen::RowVectorXcd anchor = x.row(0);
  ComplexMatrix d = x.rowwise() - anchor;
  const Eigen::RowVectorXcd shift = d.colwise().sum() / static_cast<double>(n);
  d.rowwise() -= shift;
  if (mean_out != nullptr) *mean_out = (anchor + shift).transpose();
  return d;
}

}  // namespace

ComplexVector sample_mean(const Dataset& x) {
  return (x.matrix().colwise().sum() / static_cast<double>(x.n())).transpose();
}

ScmResult scm(const Dataset& x) {
  require_observations(x.n(), 2, "SCM");
  const ComplexMatrix d = deviations(x.matrix(), nullptr);
  const double inv = 1.0 / static_cast<double>(x.n() - 1);
  ComplexMatrix s = ComplexMatrix::Zero(x.p(), x.p());
  for (Index i = 0; i < x.n(); ++i) {
    const ComplexVector di = d.row(i).transpose();
    s.noalias() += di * di.adjoint();
  }
  s *= inv;
  return {HermitianMatrix(s), sample_mean(x), x.n()};
}

HermitianMatrix scm_centering_form(const Dataset& x) {
  require_observations(x.n(), 2, "SCM");
  const ComplexMatrix h = centering_matrix(x.n()).cast<Complex>();
  const ComplexMatrix s =
      x.matrix().transpose() * h * x.matrix().conjugate() /
      static_cast<double>(x.n() - 1);
  return HermitianMatrix(s);
}

double sample_variance(const ComplexVector& x) {
  require_observations(x.size(), 2, "sample variance");
  const ComplexMatrix d = deviations(x, nullptr);
  return d.squaredNorm() / static_cast<double>(x.size() - 1);
}

RealVector mahalanobis_distances(const Dataset& x) {
  if (x.n() <= x.p()) {
    throw Error(ErrorKind::kSingularScm,
                "SCM is singular when n <= p (n = " + std::to_string(x.n()) +
                    ", p = " + std::to_string(x.p()) + ")");
  }
  const ComplexMatrix d = deviations(x.matrix(), nullptr);
  const ComplexMatrix s = d.transpose() * d.conjugate() / static_cast<double>(x.n() - 1);
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  const RealVector& lambda = es.eigenvalues();
  const double tol = kDefaultPdRelTolerance * lambda.maxCoeff();
  if (!(lambda.maxCoeff() > 0.0) || lambda.minCoeff() <= tol) {
    throw Error(ErrorKind::kSingularScm,
                "SCM min eigenvalue " + std::to_string(lambda.minCoeff()) +
                    " <= pd_tol " + std::to_string(tol));
  }
  // d_i = sum_k |v_k^H (x_i - xbar)|^2 / lambda_k, with rows of d holding
  // (x_i - xbar)^T, so v_k^H (x_i - xbar) = (d v_k^*)_i.
  const ComplexMatrix proj = d * es.eigenvectors().conjugate();
  RealVector dist(x.n());
  for (Index i = 0; i < x.n(); ++i) {
    double acc = 0.0;
    for (Index k = 0; k < x.p(); ++k) acc += std::norm(proj(i, k)) / lambda(k);
    dist(i) = acc;
  }
  return dist;
}

HermitianMatrix weighted_scm(const Dataset& x, const WeightFunction& weight) {
  const RealVector dist = mahalanobis_distances(x);
  const ComplexMatrix d = deviations(x.matrix(), nullptr);
  ComplexMatrix r = ComplexMatrix::Zero(x.p(), x.p());
  for (Index i = 0; i < x.n(); ++i) {
    const double w = weight(dist(i));
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "weight function returned " + std::to_string(w) +
                      " (must be finite and nonnegative)");
    }
    const ComplexVector di = d.row(i).transpose();
    r.noalias() += w * (di * di.adjoint());
  }
  return HermitianMatrix(r / static_cast<double>(x.n()));
}

double estimate_kurtosis(const Dataset& x) {
  require_observations(x.n(), 4, "kurtosis estimate");
  const ComplexMatrix d = deviations(x.matrix(), nullptr);
  const auto n = static_cast<double>(x.n());
  double total = 0.0;
  for (Index j = 0; j < x.p(); ++j) {
    double m2 = 0.0;
    double m4 = 0.0;
    for (Index i = 0; i < x.n(); ++i) {
      const double a = std::norm(d(i, j));
      m2 += a;
      m4 += a * a;
    }
    m2 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) {
      throw Error(ErrorKind::kDegenerateCoordinate,
                  "coordinate " + std::to_string(j) + " has zero sample variance");
    }
    total += m4 / (m2 * m2) - 2.0;
  }
  const double kappa = 0.5 * total / static_cast<double>(x.p());
  return std::max(kappa, kurtosis_lower_bound(x.p()) + kKurtosisClipEpsilon);
}

}  // namespace cesscm
