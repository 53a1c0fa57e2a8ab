#include "sasaki/errors.hpp"

namespace sasaki {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorKind::NotGorenstein: return "NotGorenstein";
    case ErrorKind::ReebOutsideCone: return "ReebOutsideCone";
    case ErrorKind::ReebNearBoundary: return "ReebNearBoundary";
    case ErrorKind::RequiresRationalReeb: return "RequiresRationalReeb";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::BoundaryEvaluation: return "BoundaryEvaluation";
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

}  // namespace sasaki
