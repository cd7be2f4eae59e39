#include "glrr/error.hpp"

namespace glrr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::LogUndefined: return "LogUndefined";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::MaxItersExceeded: return "MaxItersExceeded";
    case ErrorKind::DegenerateAffinity: return "DegenerateAffinity";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::MissingLabels: return "MissingLabels";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

LogUndefinedPair::LogUndefinedPair(std::size_t base, std::size_t other, const std::string& what)
    : Error(ErrorKind::LogUndefined,
            "pair (" + std::to_string(base) + ", " + std::to_string(other) + "): " + what),
      base_(base),
      other_(other) {}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Format:
    case ErrorKind::MissingLabels:
      return 4;
    case ErrorKind::LogUndefined:
    case ErrorKind::RankDeficient:
    case ErrorKind::NumericalFailure:
    case ErrorKind::MaxItersExceeded:
    case ErrorKind::DegenerateAffinity:
      return 3;
    default:
      return 2;
  }
}

}  // namespace glrr
