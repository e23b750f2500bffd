#include "bifurlab/error.hpp"

namespace bifurlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kDomainError: return "domain-error";
    case ErrorKind::kStepRefinementNeeded: return "step-refinement-needed";
    case ErrorKind::kResourceLimit: return "resource-limit";
    case ErrorKind::kUndecided: return "undecided";
    case ErrorKind::kNotConverged: return "not-converged";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace bifurlab
