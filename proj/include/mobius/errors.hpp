#pragma once

#include <stdexcept>
#include <string>

namespace mobius {

enum class ErrorKind {
  Validation,
  NonBallImage,
  DecodeFailure,
  DegenerateEdge,
  DegenerateFace,
  DegenerateHull,
  InfeasibleConstraint,
  NonPlanarInput,
  NonConvergence,
  UnsupportedDimension,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::NonBallImage: return "NonBallImage";
    case ErrorKind::DecodeFailure: return "DecodeFailure";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::DegenerateHull: return "DegenerateHull";
    case ErrorKind::InfeasibleConstraint: return "InfeasibleConstraint";
    case ErrorKind::NonPlanarInput: return "NonPlanarInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
  }
  return "Unknown";
}

// All library failures are reported through this exception; `kind()` lets
// callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mobius
