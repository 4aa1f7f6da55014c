#include "cesscm/dataset.hpp"

#include "cesscm/error.hpp"

namespace cesscm {

Dataset::Dataset(ComplexMatrix rows) : x_(std::move(rows)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw Error(ErrorKind::kInvalidArgument, "dataset needs n >= 1 and p >= 1");
  }
  require_finite(x_, "dataset");
}

}  // namespace cesscm
