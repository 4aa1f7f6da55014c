#include "cesscm/presets.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "cesscm/error.hpp"
#include "cesscm/matrix_io.hpp"
#include "cesscm/rng.hpp"

namespace cesscm {

namespace {

double parse_number(std::string_view text, std::string_view context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kParse, "cannot parse number '" + std::string(text) + "' in '" +
                                       std::string(context) + "'");
  }
  return v;
}

}  // namespace

double spiked_sphericity(Index p, double weight) {
  const auto pd = static_cast<double>(p);
  const double top = 1.0 + weight;
  const double tr = pd + weight;
  return pd * ((pd - 1.0) + top * top) / (tr * tr);
}

HermitianMatrix spiked_covariance(Index p, double gamma) {
  if (p < 2) throw Error(ErrorKind::kInvalidArgument, "spiked preset needs p >= 2");
  const auto pd = static_cast<double>(p);
  if (!std::isfinite(gamma) || gamma < 1.0 || gamma >= pd) {
    throw Error(ErrorKind::kInvalidArgument,
                "spiked preset needs 1 <= gamma < p = " + std::to_string(p) + ", got " +
                    format_double(gamma, 12));
  }
  // Positive root of (p - gamma) w^2 - 2p(gamma - 1) w - p^2 (gamma - 1) = 0.
  const double g1 = gamma - 1.0;
  const double w = pd * (g1 + std::sqrt(g1 * (pd - 1.0))) / (pd - gamma);
  ComplexMatrix m = ComplexMatrix::Identity(p, p);
  m.array() += Complex(w / pd, 0.0);
  return HermitianMatrix(m);
}

HermitianMatrix random_covariance(Index p, std::uint64_t seed) {
  if (p < 1) throw Error(ErrorKind::kInvalidArgument, "random preset needs p >= 1");
  RandomSource rng(RngStream{seed, 0xC0FFEEULL});
  ComplexMatrix a(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) a(i, j) = rng.complex_normal();
  ComplexMatrix m = a * a.adjoint() / static_cast<double>(p);
  m.diagonal().array() += 0.5;
  return HermitianMatrix(m);
}

bool parse_covariance_preset(std::string_view spec, Index p, std::uint64_t seed,
                             HermitianMatrix& out) {
  if (spec == "identity") {
    out = HermitianMatrix::identity(p);
    return true;
  }
  if (spec == "random") {
    out = random_covariance(p, seed);
    return true;
  }
  if (spec.substr(0, 5) == "diag:") {
    std::vector<double> values;
    std::string_view rest = spec.substr(5);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_number(rest.substr(0, comma), spec));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (static_cast<Index>(values.size()) != p) {
      throw Error(ErrorKind::kInvalidArgument,
                  "preset '" + std::string(spec) + "' has " + std::to_string(values.size()) +
                      " entries but the dimension is " + std::to_string(p));
    }
    ComplexMatrix m = ComplexMatrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
    out = HermitianMatrix(m);
    return true;
  }
  if (spec.substr(0, 13) == "spiked:gamma=") {
    out = spiked_covariance(p, parse_number(spec.substr(13), spec));
    return true;
  }
  return false;
}

}  // namespace cesscm
