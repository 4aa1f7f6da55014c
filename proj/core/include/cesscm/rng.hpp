#pragma once

#include <cstdint>

#include "cesscm/linalg.hpp"

namespace cesscm {

/// Identifies an independent random scalar sequence. The same (seed,
/// stream_id) pair always produces the same sequence: the engine is
/// xoshiro256++ keyed through splitmix64, and every distribution below is
/// built from integer draws with fixed arithmetic, never from <random>'s
/// implementation-defined distributions.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// A stream keyed on this (seed, stream_id) pair, restarting at stream_id 0.
  /// Used to give each Monte Carlo replication its own family of row streams.
  RngStream fork() const;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

class RandomSource {
 public:
  explicit RandomSource(RngStream stream);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Circular standard complex normal: real and imaginary parts N(0, 1/2),
  /// so E|z|^2 = 1.
  Complex complex_normal();

  /// Gamma(shape, scale = 1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);

  /// Chi-square with dof > 0 degrees of freedom.
  double chi_square(double dof);

 private:
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace cesscm
