#include "cesscm/sampler.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "cesscm/error.hpp"
#include "cesscm/matrix_io.hpp"
#include "parallel.hpp"

namespace cesscm {

namespace {

double parse_parameter(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::kInvalidFamily,
                "cannot parse distribution '" + std::string(whole) + "'");
  }
  return v;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DistributionFamily DistributionFamily::gaussian() {
  return DistributionFamily(Gaussian{});
}

DistributionFamily DistributionFamily::student_t(double dof) {
  if (!std::isfinite(dof) || !(dof > 4.0)) {
    throw Error(ErrorKind::kInvalidFamily,
                "t distribution needs nu > 4 for finite fourth-order moments, got " +
                    format_double(dof, 12));
  }
  return DistributionFamily(StudentT{dof});
}

DistributionFamily DistributionFamily::compound_gaussian_k(double shape) {
  if (!std::isfinite(shape) || !(shape > 0.0)) {
    throw Error(ErrorKind::kInvalidFamily,
                "K distribution needs shape alpha > 0, got " + format_double(shape, 12));
  }
  return DistributionFamily(CompoundGaussianK{shape});
}

DistributionFamily DistributionFamily::parse(std::string_view text) {
  if (text == "gaussian") return gaussian();
  if (text.size() > 2 && text[1] == ':') {
    const double v = parse_parameter(text.substr(2), text);
    if (text[0] == 't') return student_t(v);
    if (text[0] == 'k') return compound_gaussian_k(v);
  }
  throw Error(ErrorKind::kInvalidFamily,
              "unknown distribution '" + std::string(text) +
                  "' (expected gaussian, t:NU or k:ALPHA)");
}

std::string DistributionFamily::to_string() const {
  return std::visit(
      Overloaded{
          [](const Gaussian&) { return std::string("gaussian"); },
          [](const StudentT& t) { return "t:" + format_double(t.dof); },
          [](const CompoundGaussianK& k) { return "k:" + format_double(k.shape); },
      },
      v_);
}

double elliptical_kurtosis(const DistributionFamily& family) {
  return std::visit(
      Overloaded{
          [](const Gaussian&) { return 0.0; },
          [](const StudentT& t) { return 2.0 / (t.dof - 4.0); },
          [](const CompoundGaussianK& k) { return 1.0 / k.shape; },
      },
      family.variant());
}

ComplexVector sample_sphere(Index p, RandomSource& rng) {
  if (p < 1) throw Error(ErrorKind::kInvalidArgument, "sphere dimension must be >= 1");
  ComplexVector g(p);
  double norm = 0.0;
  do {
    for (Index i = 0; i < p; ++i) g(i) = rng.complex_normal();
    norm = g.norm();
  } while (norm == 0.0);
  return g / norm;
}

double sample_modular(const DistributionFamily& family, Index p, RandomSource& rng) {
  if (p < 1) throw Error(ErrorKind::kInvalidArgument, "dimension must be >= 1");
  // q = chi2_{2p} / 2, E[q] = p
  const double q = rng.gamma(static_cast<double>(p));
  const double w = std::visit(
      Overloaded{
          [](const Gaussian&) { return 1.0; },
          [&](const StudentT& t) { return (t.dof - 2.0) / rng.chi_square(t.dof); },
          [&](const CompoundGaussianK& k) { return rng.gamma(k.shape) / k.shape; },
      },
      family.variant());
  return std::sqrt(q * w);
}

CESModel::CESModel(ComplexVector mean, HermitianMatrix covariance,
                   DistributionFamily family)
    : mean_(std::move(mean)), cov_(std::move(covariance)), family_(family) {
  if (mean_.size() != cov_.dim() || cov_.dim() < 1) {
    throw Error(ErrorKind::kShapeMismatch,
                "mean has length " + std::to_string(mean_.size()) +
                    " but covariance is " + std::to_string(cov_.dim()) + "x" +
                    std::to_string(cov_.dim()));
  }
  require_finite(mean_, "mean vector");
  cov_sqrt_ = hermitian_sqrt(cov_);
  kappa_ = elliptical_kurtosis(family_);
  if (kappa_ < kurtosis_lower_bound(p())) {
    throw Error(ErrorKind::kInvalidFamily, "elliptical kurtosis below -1/(p+1)");
  }
}

CESModel CESModel::spherical(Index p, DistributionFamily family) {
  return CESModel(ComplexVector::Zero(p), HermitianMatrix::identity(p), family);
}

bool CESModel::is_spherical() const {
  return mean_.isZero(0.0) &&
         cov_.matrix() == ComplexMatrix::Identity(p(), p());
}

ComplexVector sample_observation(const CESModel& model, RngStream stream) {
  RandomSource rng(stream);
  const ComplexVector u = sample_sphere(model.p(), rng);
  const double r = sample_modular(model.family(), model.p(), rng);
  return model.mean() + r * (model.covariance_sqrt().matrix() * u);
}

Dataset sample_ces(const CESModel& model, Index n, RngStream rng, std::size_t workers) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "sample size n must be >= 1");
  ComplexMatrix x(n, model.p());
  constexpr Index kChunk = 4096;
  const auto chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  detail::parallel_for(chunks, workers, [&](std::size_t c) {
    const Index begin = static_cast<Index>(c) * kChunk;
    const Index end = std::min(n, begin + kChunk);
    for (Index i = begin; i < end; ++i) {
      x.row(i) = sample_observation(
                     model, RngStream{rng.seed, rng.stream_id + static_cast<std::uint64_t>(i)})
                     .transpose();
    }
  });
  return Dataset(std::move(x));
}

}  // namespace cesscm
