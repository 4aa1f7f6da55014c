#include "cesscm/error.hpp"

namespace cesscm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kZeroTrace: return "ZeroTrace";
    case ErrorKind::kTooFewObservations: return "TooFewObservations";
    case ErrorKind::kSingularScm: return "SingularSCM";
    case ErrorKind::kDegenerateCoordinate: return "DegenerateCoordinate";
    case ErrorKind::kInvalidFamily: return "InvalidFamily";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace cesscm
