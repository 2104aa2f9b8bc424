#include "polyharm/errors.hpp"

namespace polyharm {

const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::capability: return "capability";
    case ErrorKind::chart: return "chart";
    case ErrorKind::contract: return "contract";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::precondition: return "precondition";
  }
  return "unknown";
}

}  // namespace polyharm
