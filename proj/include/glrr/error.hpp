#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glrr {

enum class ErrorKind {
  Shape,
  NotOrthonormal,
  RankDeficient,
  LogUndefined,
  BaseMismatch,
  NumericalFailure,
  MaxItersExceeded,
  DegenerateAffinity,
  LengthMismatch,
  Format,
  MissingLabels,
  Validation,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by build_gram when a pair of points sits at the cut locus.
class LogUndefinedPair : public Error {
 public:
  LogUndefinedPair(std::size_t base, std::size_t other, const std::string& what);

  std::size_t base() const noexcept { return base_; }
  std::size_t other() const noexcept { return other_; }

 private:
  std::size_t base_;
  std::size_t other_;
};

/// CLI exit codes: 0 success, 2 validation, 3 numerical, 4 I/O.
int exit_code_for(ErrorKind kind);

}  // namespace glrr
