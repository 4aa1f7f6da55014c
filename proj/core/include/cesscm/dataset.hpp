#pragma once

#include "cesscm/linalg.hpp"

namespace cesscm {

/// n x p complex data matrix, one observation per row.
class Dataset {
 public:
  Dataset() = default;
  /// Requires at least one row and finite entries.
  explicit Dataset(ComplexMatrix rows);

  Index n() const { return x_.rows(); }
  Index p() const { return x_.cols(); }
  const ComplexMatrix& matrix() const { return x_; }
  auto row(Index i) const { return x_.row(i); }
  auto column(Index j) const { return x_.col(j); }

 private:
  ComplexMatrix x_;
};

}  // namespace cesscm
