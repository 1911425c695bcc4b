#include "symjunta/error.hpp"

namespace symjunta {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::arity: return "arity";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::resource: return "resource";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::fit: return "fit";
    case ErrorKind::budget: return "budget";
    case ErrorKind::unavailable: return "unavailable";
    case ErrorKind::diagnostic: return "diagnostic";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace symjunta
