#pragma once

#include <cstdint>
#include <string_view>

#include "cesscm/linalg.hpp"

namespace cesscm {

/// M = I + w v v^H with v = 1/sqrt(p) and w >= 0 chosen in closed form so that
/// the sphericity of M equals gamma. Needs 1 <= gamma < p.
HermitianMatrix spiked_covariance(Index p, double gamma);

/// Sphericity of the spiked preset for spike weight w.
double spiked_sphericity(Index p, double weight);

/// Well-conditioned random Hermitian PD matrix A A^H / p + I / 2, A complex
/// Gaussian drawn from `seed`.
HermitianMatrix random_covariance(Index p, std::uint64_t seed);

/// Parses `identity`, `diag:a,b,...`, `spiked:gamma=G` or `random` (seeded).
/// Returns false when `spec` is none of these (callers then try a file path).
bool parse_covariance_preset(std::string_view spec, Index p, std::uint64_t seed,
                             HermitianMatrix& out);

}  // namespace cesscm
