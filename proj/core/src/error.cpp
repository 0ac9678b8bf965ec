#include "gnlab/error.hpp"

namespace gnlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kParameter: return "parameter";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kUnsupportedOrder: return "unsupported-order";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kNoCrossing: return "no-crossing";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kSearchFailure: return "search-failure";
  }
  return "unknown";
}

}  // namespace gnlab
