#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "cesscm/dataset.hpp"
#include "cesscm/linalg.hpp"
#include "cesscm/rng.hpp"

namespace cesscm {

struct Gaussian {};

/// Complex multivariate t with nu > 4 degrees of freedom.
struct StudentT {
  double dof = 0.0;
};

/// Compound Gaussian with Gamma(alpha, 1/alpha) texture (K-distribution).
struct CompoundGaussianK {
  double shape = 0.0;
};

class DistributionFamily {
 public:
  using Variant = std::variant<Gaussian, StudentT, CompoundGaussianK>;

  DistributionFamily() = default;
  static DistributionFamily gaussian();
  static DistributionFamily student_t(double dof);
  static DistributionFamily compound_gaussian_k(double shape);

  /// Accepts `gaussian`, `t:NU`, `k:ALPHA`.
  static DistributionFamily parse(std::string_view text);
  std::string to_string() const;

  const Variant& variant() const { return v_; }
  bool is_gaussian() const { return std::holds_alternative<Gaussian>(v_); }

 private:
  explicit DistributionFamily(Variant v) : v_(v) {}
  Variant v_{Gaussian{}};
};

/// kappa = E[r^4] / (p(p+1)) - 1 for the normalized modular variate.
/// Gaussian 0, t(nu) 2/(nu - 4), K(alpha) 1/alpha; none depends on p.
double elliptical_kurtosis(const DistributionFamily& family);

/// Lower bound of the elliptical kurtosis in dimension p.
inline double kurtosis_lower_bound(Index p) {
  return -1.0 / (static_cast<double>(p) + 1.0);
}

/// Uniform draw from the complex unit sphere in C^p.
ComplexVector sample_sphere(Index p, RandomSource& rng);

/// Modular variate r with E[r^2] = p. r^2 = q * w with q ~ Gamma(p, 1) and a
/// unit-mean texture w: 1 (Gaussian), (nu - 2) / chi2_nu (t), or
/// Gamma(alpha, 1/alpha) (K).
double sample_modular(const DistributionFamily& family, Index p, RandomSource& rng);

/// Circular CES model x = mu + r M^{1/2} u with M equal to the covariance.
class CESModel {
 public:
  CESModel(ComplexVector mean, HermitianMatrix covariance, DistributionFamily family);

  /// Zero mean, identity covariance.
  static CESModel spherical(Index p, DistributionFamily family);

  Index p() const { return mean_.size(); }
  const ComplexVector& mean() const { return mean_; }
  const HermitianMatrix& covariance() const { return cov_; }
  const HermitianMatrix& covariance_sqrt() const { return cov_sqrt_; }
  const DistributionFamily& family() const { return family_; }
  double kappa() const { return kappa_; }

  bool is_spherical() const;

 private:
  ComplexVector mean_;
  HermitianMatrix cov_;
  HermitianMatrix cov_sqrt_;
  DistributionFamily family_;
  double kappa_ = 0.0;
};

/// n i.i.d. rows. Row i draws from RngStream{rng.seed, rng.stream_id + i},
/// so the result does not depend on `workers`.
Dataset sample_ces(const CESModel& model, Index n, RngStream rng,
                   std::size_t workers = 1);

/// One observation drawn from `stream`; sample_ces row i is
/// sample_observation(model, {seed, stream_id + i}).
ComplexVector sample_observation(const CESModel& model, RngStream stream);

}  // namespace cesscm
