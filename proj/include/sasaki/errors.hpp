#pragma once

#include <stdexcept>
#include <string>

namespace sasaki {

enum class ErrorKind {
  Parse,
  Validation,
  NotStrictlyConvex,
  NotGorenstein,
  ReebOutsideCone,
  ReebNearBoundary,
  RequiresRationalReeb,
  NonConvergence,
  CapacityExceeded,
  BoundaryEvaluation,
  NonConvex,
  Internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SASAKI_DEFINE_ERROR(Name, Kind)                               \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

SASAKI_DEFINE_ERROR(ValidationError, Validation)
SASAKI_DEFINE_ERROR(NotStrictlyConvex, NotStrictlyConvex)
SASAKI_DEFINE_ERROR(NotGorenstein, NotGorenstein)
SASAKI_DEFINE_ERROR(ReebOutsideCone, ReebOutsideCone)
SASAKI_DEFINE_ERROR(ReebNearBoundary, ReebNearBoundary)
SASAKI_DEFINE_ERROR(RequiresRationalReeb, RequiresRationalReeb)
SASAKI_DEFINE_ERROR(NonConvergence, NonConvergence)
SASAKI_DEFINE_ERROR(CapacityExceeded, CapacityExceeded)
SASAKI_DEFINE_ERROR(BoundaryEvaluation, BoundaryEvaluation)
SASAKI_DEFINE_ERROR(NonConvex, NonConvex)
SASAKI_DEFINE_ERROR(InternalError, Internal)

#undef SASAKI_DEFINE_ERROR

/// Malformed input; carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : Error(ErrorKind::Parse, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace sasaki
