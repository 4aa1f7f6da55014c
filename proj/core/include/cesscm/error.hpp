#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cesscm {

enum class ErrorKind {
  kInvalidArgument,
  kNotHermitian,
  kNotPositiveDefinite,
  kZeroTrace,
  kTooFewObservations,
  kSingularScm,
  kDegenerateCoordinate,
  kInvalidFamily,
  kShapeMismatch,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cesscm
